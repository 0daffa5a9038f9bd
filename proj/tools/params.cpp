#include "params.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace nlpa::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Params::Params() {
  entries_ = {
      {"preset", "torus", "torus or genus2"},
      {"beta", "auto", "site strength in (-lambda, 0]; auto is -2 on the torus, the admissible midpoint on genus2"},
      {"alpha", "auto", "support radius; auto is 0.1 on the torus, 0.02 on genus2"},
      {"kernel", "C1", "C1 or C2 bump kernel (measure runs always use C2)"},
      {"site", "anchor", "perturbation site; only the preset anchor is supported"},
      {"seed", "1", "seed of every random choice"},
      {"tol", "1e-10", "integrator local error"},
      {"check_tol", "1e-11", "integrator tolerance of the Rauzy cross-check"},
      {"series_tol", "1e-12", "remainder bound of the stable field series"},
      {"points", "auto", "random points per identity check; auto is 10000 for reduction, 100 for commutation, 1000 for contraction and ball sampling"},
      {"window", "auto", "u0,u1,s0,s1; auto is the polygon bounding box"},
      {"resolution", "512", "raster width and height"},
      {"max_iter", "10000", "basin budget per pixel or sample"},
      {"format", "png", "png, ppm or both"},
      {"leaf_budget", "200", "arclength of each traced stable leaf, per side"},
      {"u", "0.2", "trace start u"},
      {"s", "0.3", "trace start s"},
      {"t", "1", "trace time"},
      {"steps", "40", "Rauzy steps"},
      {"min_agreement", "12", "required common prefix of the Rauzy paths"},
      {"separatrix_tmax", "auto", "separatrix length in flow time; auto is 2000 on the torus, 100 on genus2"},
      {"depth", "auto", "depth of the singular orbit sample; auto is 1000 on the torus, 100 on genus2"},
      {"wander_iterates", "1000", "images of the principal gap"},
      {"birkhoff_n", "1000000", "Birkhoff sum length"},
      {"starts", "10", "independent Birkhoff starts"},
      {"measure", "srb", "srb, correlation or nu"},
      {"nu_length", "3000", "orbit length of the transversal measure"},
      {"nu_start", "0.3", "orbit start on the transversal"},
      {"h_step", "0.05", "flow time between suspension samples"},
      {"bumps", "5", "observables"},
      {"bump_radius", "0.1", "observable radius"},
      {"srb_samples", "20000", "points on the stable segment"},
      {"srb_half_length", "1", "half length of the stable segment in flow time"},
      {"n", "30", "largest pushforward or correlation lag"},
      {"support_samples", "2000", "measure samples classified for the support check"},
      {"suite", "all", "verify suite"},
  };
}

bool Params::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const ParamEntry& e) { return e.key == key; });
}

const ParamEntry& Params::entry(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.key == key) return e;
  throw UsageError("unknown parameter '" + key + "'");
}

void Params::set(const std::string& key, const std::string& value) {
  const_cast<ParamEntry&>(entry(key)).value = value;
}

const std::string& Params::get(const std::string& key) const { return entry(key).value; }

double Params::number(const std::string& key) const {
  const std::string& v = get(key);
  double x = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw UsageError("parameter " + key + " = '" + v + "' is not a number");
  return x;
}

long Params::integer(const std::string& key) const {
  const std::string& v = get(key);
  long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw UsageError("parameter " + key + " = '" + v + "' is not an integer");
  return x;
}

void Params::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

nlohmann::ordered_json Params::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& e : entries_) j[e.key] = e.value;
  return j;
}

Params Params::from_json(const nlohmann::json& j) {
  Params p;
  for (const auto& [k, v] : j.items()) p.set(k, v.get<std::string>());
  return p;
}

}  // namespace nlpa::cli
