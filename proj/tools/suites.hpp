#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlpa/attractor.hpp"
#include "nlpa/measures.hpp"
#include "nlpa/renormalization.hpp"
#include "params.hpp"

namespace nlpa::cli {

// Lazily built objects shared by the suites of one preset.
class Session {
 public:
  explicit Session(const Params& p);

  const Params& params() const { return params_; }
  const Preset& preset() const { return preset_; }
  bool torus() const { return preset_.id == "torus"; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  KernelKind kernel() const { return kernel_; }
  std::uint64_t seed() const { return static_cast<std::uint64_t>(params_.integer("seed")); }
  double separatrix_tmax() const;
  int depth() const;
  long points(long fallback) const;
  Window window() const;

  const NonlinearMap& map(KernelKind k);
  const NonlinearMap& linear();
  const StableField& field(KernelKind k);
  const Flow& flow(KernelKind k);
  const GIET& giet(KernelKind k);
  // invariant measure sample of the C2 map
  const EmpiricalMeasure& mu();
  const std::vector<BumpObservable>& bumps();
  const std::vector<double>& bump_values();

  nlohmann::ordered_json resolved() const;

 private:
  struct Dynamics {
    std::unique_ptr<NonlinearMap> f;
    std::unique_ptr<StableField> field;
    std::unique_ptr<Flow> flow;
    std::unique_ptr<GIET> giet;
  };
  Dynamics& dyn(KernelKind k);

  Params params_;
  Preset preset_;
  double beta_ = 0.0, alpha_ = 0.0;
  KernelKind kernel_ = KernelKind::C1;
  std::map<KernelKind, Dynamics> dyn_;
  std::unique_ptr<NonlinearMap> linear_;
  std::unique_ptr<EmpiricalMeasure> mu_;
  std::vector<BumpObservable> bumps_;
  std::vector<double> bump_values_;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
};

struct SuiteReport {
  std::string suite;
  std::string preset;
  std::vector<Check> checks;
  // diagnostics that are printed but never decide the verdict
  std::vector<std::string> notes;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

const std::vector<std::string>& suite_names();
// Throws UsageError for unknown names.
SuiteReport run_suite(const std::string& name, Session& s);

}  // namespace nlpa::cli
