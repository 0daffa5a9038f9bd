// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance <path to nlpa> <scratch dir>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlpa/errors.hpp"
#include "suites.hpp"

using namespace nlpa;
using namespace nlpa::cli;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  bool genus2;  // also on the genus-2 preset
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

int run(const std::string& cmd, const std::string& log) {
  const int rc = std::system((cmd + " > " + quoted(log) + " 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// Runs each command, replays it from its manifest and requires identical hashes.
bool determinism(const std::string& nlpa, const fs::path& scratch, std::vector<std::string>& lines) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"verify-reduction", "verify --suite reduction"},
      {"verify-contraction", "verify --preset genus2 --suite contraction"},
      {"trace", "trace --u 0.2 --s 0.3 --t 2"},
      {"render", "render --resolution 64 --max-iter 300 --format both --leaf-budget 5"},
      {"rauzy", "rauzy --preset genus2 --separatrix-tmax 40 --steps 12 --depth 20 --wander-iterates 50"},
      {"measure", "measure --nu --separatrix-tmax 40 --nu-length 500"},
  };
  bool ok = true;
  for (const auto& [name, args] : cases) {
    const fs::path a = scratch / name / "first", b = scratch / name / "replay";
    fs::remove_all(scratch / name);
    fs::create_directories(scratch / name);
    const int rc = run(quoted(nlpa) + " " + args + " --out " + quoted(a.string()),
                       (scratch / name / "first.log").string());
    if (rc != 0 && rc != 1) {
      lines.push_back(name + ": run exited with " + std::to_string(rc));
      ok = false;
      continue;
    }
    const int rr = run(quoted(nlpa) + " replay " + quoted((a / "manifest.json").string()) + " --out " +
                           quoted(b.string()),
                       (scratch / name / "replay.log").string());
    nlohmann::json m1, m2;
    std::ifstream(a / "manifest.json") >> m1;
    std::ifstream(b / "manifest.json") >> m2;
    const bool same = rr == 0 && m1.at("outputs") == m2.at("outputs") && m1.at("params_hash") == m2.at("params_hash");
    ok = ok && same;
    lines.push_back(name + ": " + std::to_string(m1.at("outputs").size()) + " outputs " +
                    (same ? "reproduced bit for bit" : "differ on replay"));
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <nlpa binary> <scratch dir>\n";
    return 2;
  }
  const std::string nlpa = fs::absolute(argv[1]).string();
  const fs::path scratch = fs::absolute(argv[2]);
  fs::create_directories(scratch);

  const std::vector<Criterion> criteria = {
      {1, "reduction", {"reduction"}, false},
      {2, "commutation", {"commutation"}, true},
      {3, "exact contraction and entropy", {"contraction"}, true},
      {4, "fixed points", {"fixed-points"}, false},
      {5, "Rauzy path agreement", {"rauzy"}, true},
      {6, "unique ergodicity", {"ergodicity"}, false},
      {7, "wandering interval", {"wandering"}, false},
      {8, "attractor topology", {"attractor"}, false},
      {9, "SRB pushforward", {"srb"}, false},
      {10, "mixing", {"mixing"}, false},
      {11, "support", {"support"}, false},
  };

  Params tp, gp;
  gp.set("preset", "genus2");
  Session torus(tp), genus2(gp);

  const auto start = std::chrono::steady_clock::now();
  int passed = 0;
  const int total = static_cast<int>(criteria.size()) + 1;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> lines;
    std::vector<Session*> sessions = {&torus};
    if (c.genus2) sessions.push_back(&genus2);
    for (Session* s : sessions)
      for (const auto& name : c.suites) {
        try {
          SuiteReport r = run_suite(name, *s);
          ok = ok && r.pass();
          for (const auto& ch : r.checks)
            lines.push_back(r.preset + " " + (ch.pass ? "ok   " : "FAIL ") + ch.name + ": " + ch.detail);
          for (const auto& n : r.notes) lines.push_back(r.preset + " note " + n);
        } catch (const std::exception& e) {
          ok = false;
          lines.push_back(s->preset().id + " error: " + e.what());
        }
      }
    passed += ok;
    std::cout << "criterion " << c.id << " (" << c.title << "): " << (ok ? "PASS" : "FAIL") << "  ["
              << seconds_since(t0) << " s]\n";
    for (const auto& l : lines) std::cout << "    " << l << "\n";
    std::cout.flush();
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> lines;
  const bool det = determinism(nlpa, scratch, lines);
  passed += det;
  std::cout << "criterion 12 (determinism): " << (det ? "PASS" : "FAIL") << "  [" << seconds_since(t0) << " s]\n";
  for (const auto& l : lines) std::cout << "    " << l << "\n";

  std::cout << passed << "/" << total << " criteria pass, " << seconds_since(start) << " s total\n";
  return passed == total ? 0 : 1;
}
