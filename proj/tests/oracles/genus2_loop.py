"""Eigen-data of a primitive loop in the Rauzy class of (A B C D / D C B A).
Prints the loop matrix, Perron root, lengths, heights and polygon vertices."""
import itertools
import mpmath as mp

mp.mp.dps = 40
LETTERS = "ABCD"


def move(top, bot, kind):
    top, bot = list(top), list(bot)
    at, ab = top[-1], bot[-1]
    if kind == "t":
        bot.pop()
        bot.insert(bot.index(at) + 1, ab)
    else:
        top.pop()
        top.insert(top.index(ab) + 1, at)
    return tuple(top), tuple(bot)


def elementary(top, bot, kind):
    # lengths before the step = E * lengths after the step
    E = mp.eye(4)
    at, ab = LETTERS.index(top[-1]), LETTERS.index(bot[-1])
    if kind == "t":
        E[at, ab] = 1
    else:
        E[ab, at] = 1
    return E


def loops(maxlen):
    start = (tuple("ABCD"), tuple("DCBA"))
    for n in range(1, maxlen + 1):
        for word in itertools.product("tb", repeat=n):
            t, b = start
            B = mp.eye(4)
            for k in word:
                B = B * elementary(t, b, k)
                t, b = move(t, b, k)
            if (t, b) == start:
                yield "".join(word), B


def eig(B):
    E, V = mp.eig(B)
    return E, V


def analyse(word, B):
    if any(B[i, j] <= 0 for i in range(4) for j in range(4)):
        return None
    E, V = eig(B)
    idx = max(range(4), key=lambda i: mp.re(E[i]))
    rho = mp.re(E[idx])
    lam = [mp.re(V[i, idx]) for i in range(4)]
    if lam[0] < 0:
        lam = [-x for x in lam]
    jdx = min(range(4), key=lambda i: abs(E[i] - 1 / rho))
    tau = [mp.re(V[i, jdx]) for i in range(4)]
    if tau[0] < 0:
        tau = [-x for x in tau]
    slopes = [tau[i] / lam[i] for i in range(4)]
    convex = all(slopes[i] > slopes[i + 1] for i in range(3))
    top_ok = all(sum(tau[:k]) > 0 for k in range(1, 4))
    bot_ok = all(sum(tau[::-1][:k]) < 0 for k in range(1, 4))
    return rho, lam, tau, convex and top_ok and bot_ok


WORD = "tbtbtbtbbtb"


def loop_matrix(word):
    t, b = tuple("ABCD"), tuple("DCBA")
    B = mp.eye(4)
    for k in word:
        B = B * elementary(t, b, k)
        t, b = move(t, b, k)
    assert (t, b) == (tuple("ABCD"), tuple("DCBA"))
    return B


B = loop_matrix(WORD)
rho, lam, tau, _ = analyse(WORD, B)
word = WORD
s = sum(lam)
lam = [x / s for x in lam]
area = 0
# area of the Masur polygon = sum over letters of lam_a * h_a with h = Omega^T tau
Omega = [[0, 1, 1, 1], [-1, 0, 1, 1], [-1, -1, 0, 1], [-1, -1, -1, 0]]
h = [-sum(Omega[a][b] * tau[b] for b in range(4)) for a in range(4)]
area = sum(lam[a] * h[a] for a in range(4))
tau = [x / area for x in tau]
h = [x / area for x in h]
print("loop", word)
print("matrix", [[int(B[i, j]) for j in range(4)] for i in range(4)])
print("rho", mp.nstr(rho, 30))
print("lambda", [mp.nstr(x, 25) for x in lam])
print("tau", [mp.nstr(x, 25) for x in tau])
print("heights", [mp.nstr(x, 25) for x in h])
print("area", mp.nstr(sum(lam[a] * h[a] for a in range(4)), 20))

zeta = [(lam[a], tau[a]) for a in range(4)]
A, Bz, C, D = zeta
def add(*v):
    return (sum(x[0] for x in v), sum(x[1] for x in v))
verts = [(0, 0), D, add(D, C), add(D, C, Bz), add(A, Bz, C, D), add(A, Bz, C), add(A, Bz), A]
print("vertices", [(mp.nstr(x, 20), mp.nstr(y, 20)) for x, y in verts])
# power iteration cross-check of the Perron root
v = mp.matrix([1, 1, 1, 1])
for _ in range(200):
    w = B * v
    r = max(w) / max(v)
    v = w / max(w)
print("power_iteration_rho", mp.nstr(r, 25))
