"""Radius t0 of the fixed point on the u-axis: lambda + beta k(t0/alpha) = 1,
by bisection in 50-digit arithmetic, and the multiplier at that point."""
import mpmath as mp

mp.mp.dps = 50
lam = (3 + mp.sqrt(5)) / 2
beta, alpha = mp.mpf(-2), mp.mpf("0.1")


def k(r, p):
    return (1 - r * r) ** p if abs(r) < 1 else mp.mpf(0)


def dk(r, p):
    return -2 * p * r * (1 - r * r) ** (p - 1) if abs(r) < 1 else mp.mpf(0)


for p in (2, 3):
    lo, hi = mp.mpf(0), mp.mpf(1)
    for _ in range(200):
        mid = (lo + hi) / 2
        if lam + beta * k(mid, p) < 1:
            lo = mid
        else:
            hi = mid
    t0 = alpha * lo
    m = 1 + beta * t0 * dk(lo, p) / alpha
    print("exponent", p, "k(t0/alpha)", mp.nstr(k(lo, p), 20), "t0", mp.nstr(t0, 20), "m_u", mp.nstr(m, 20))
print("log lambda", mp.nstr(mp.log(lam), 15))
print("default beta", mp.nstr(((-lam + lam ** -2) + (1 - lam)) / 2, 20))
