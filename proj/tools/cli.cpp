#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>

#include "nlpa/errors.hpp"
#include "suites.hpp"

namespace fs = std::filesystem;

namespace nlpa::cli {

namespace {

const std::vector<std::string> kModel = {"preset", "beta", "alpha", "kernel", "site", "seed", "tol"};

const std::map<std::string, std::vector<std::string>>& command_keys() {
  static const std::map<std::string, std::vector<std::string>> k = {
      {"render", {"window", "resolution", "max_iter", "format", "leaf_budget"}},
      {"verify", {"suite", "check_tol", "series_tol", "points", "window", "resolution", "max_iter", "leaf_budget",
                  "steps", "min_agreement", "separatrix_tmax", "depth", "wander_iterates", "birkhoff_n", "starts",
                  "nu_length", "nu_start", "h_step", "bumps", "bump_radius", "srb_samples", "srb_half_length", "n",
                  "support_samples"}},
      {"trace", {"u", "s", "t"}},
      {"rauzy", {"steps", "min_agreement", "check_tol", "separatrix_tmax", "depth", "wander_iterates"}},
      {"measure", {"measure", "separatrix_tmax", "nu_length", "nu_start", "h_step", "bumps", "bump_radius",
                   "srb_samples", "srb_half_length", "n"}},
  };
  return k;
}

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
}

int cmd_render(Session& s, const fs::path& out, Manifest& m) {
  const Params& p = s.params();
  const NonlinearMap& f = s.map(s.kernel());
  BasinClassifier cls(f);
  const int res = static_cast<int>(p.integer("resolution"));
  const int iters = static_cast<int>(p.integer("max_iter"));
  if (res <= 0 || iters < 0) throw UsageError("resolution must be positive and max_iter non-negative");
  const std::string& format = p.get("format");
  if (format != "png" && format != "ppm" && format != "both") throw UsageError("format must be png, ppm or both");
  RasterImage img = raster_K(cls, s.window(), res, res, iters);
  const std::string comment = "nlpa render " + m.params_hash();
  if (format != "ppm") {
    write_png(join(out, "K.png"), img, comment);
    m.add_output(out.string(), "K.png");
  }
  if (format != "png") {
    write_ppm(join(out, "K.ppm"), img, comment);
    m.add_output(out.string(), "K.ppm");
  }

  nlohmann::ordered_json d;
  d["params_hash"] = m.params_hash();
  d["window"] = {img.window.u0, img.window.u1, img.window.s0, img.window.s1};
  d["undecided_fraction"] = img.undecided_fraction();
  auto ei = empty_interior(img);
  d["empty_interior"] = {{"tested", ei.tested}, {"violations", ei.violations}};
  if (!f.is_linear()) {
    std::vector<Polyline> leaves;
    for (const auto& q : f.fixed_points(0).p) leaves.push_back(trace_stable_leaf(s.flow(s.kernel()), q, p.number("leaf_budget")));
    auto cn = connectivity(img, leaves);
    auto finite = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr); };
    d["connectivity"] = {{"hausdorff_px", finite(cn.hausdorff_px)},
                         {"leaf_to_k_px", finite(cn.leaf_to_k_px)},
                         {"k_to_leaf_px", finite(cn.k_to_leaf_px)}};
    auto ab = accessible_border(img, leaves, 200, s.seed());
    d["accessible_border"] = {{"tested", ab.tested}, {"violations", ab.violations}, {"fraction_ok", ab.fraction_ok}};
  }
  write_json(join(out, "diagnostics.json"), d);
  m.add_output(out.string(), "diagnostics.json");
  std::cout << "undecided fraction " << img.undecided_fraction() << "\n";
  return 0;
}

int cmd_verify(Session& s, const fs::path& out, Manifest& m) {
  const std::string& which = s.params().get("suite");
  std::vector<std::string> names;
  if (which == "all")
    names = suite_names();
  else
    names = {which};
  auto all = nlohmann::ordered_json::array();
  CsvWriter csv(join(out, "report.csv"), {"suite", "preset", "check", "pass", "detail"});
  bool ok = true;
  for (const auto& n : names) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport r = run_suite(n, s);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& c : r.checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << n << ": " << c.name << " (" << c.detail << ")\n";
      csv.row({n, r.preset, c.name, c.pass ? "true" : "false", c.detail});
    }
    for (const auto& note : r.notes) std::cout << "     " << n << ": " << note << "\n";
    std::cout << "     " << n << ": " << sec << " s\n";
    ok = ok && r.pass();
    all.push_back(r.to_json());
  }
  csv.close();
  m.add_output(out.string(), "report.csv");
  write_json(join(out, "report.json"), all);
  m.add_output(out.string(), "report.json");
  return ok ? 0 : 1;
}

int cmd_trace(Session& s, const fs::path& out, Manifest& m) {
  const Params& p = s.params();
  const auto& S = *s.preset().surface;
  const Vec2 x{p.number("u"), p.number("s")};
  if (!S.contains(x)) throw UsageError("start (u, s) lies outside the polygon");
  Trajectory tr = s.flow(s.kernel()).integrate(S.normalize(x), p.number("t"));
  CsvWriter csv(join(out, "trajectory.csv"), {"t", "chart", "u", "s"});
  for (std::size_t i = 0; i < tr.x.size(); ++i)
    csv.row({fmt(tr.t[i]), std::to_string(tr.x[i].chart), fmt(tr.x[i].u), fmt(tr.x[i].s)});
  csv.close();
  m.add_output(out.string(), "trajectory.csv");
  if (tr.status == TrajectoryStatus::Captured)
    std::cout << "captured by cone " << tr.cone << " at t = " << tr.t_end << "\n";
  std::cout << tr.x.size() << " rows\n";
  return 0;
}

int cmd_rauzy(Session& s, const fs::path& out, Manifest& m) {
  const Params& p = s.params();
  const int M = static_cast<int>(p.integer("steps"));
  if (M < 0) throw UsageError("steps must be non-negative");
  std::string path, p0;
  RauzyRun run;
  if (M > 0) {
    const GIET& T = s.giet(s.kernel());
    FlowOptions fo = s.flow(s.kernel()).options();
    fo.tol = p.number("check_tol");
    Flow tight(s.field(s.kernel()), fo);
    SeparatrixOptions so;
    so.t_max = s.separatrix_tmax();
    const SeparatrixData check = trace_separatrices(tight, s.preset(), so);
    run = rauzy_induct(T.separatrices(), M, 1e-9, &check);
    ExactIET T0 = build_exact_iet(s.preset());
    p0 = rauzy_induct(T0, M);
    path = run.path;
  }
  {
    std::ofstream f(join(out, "path.txt"), std::ios::binary);
    f << path;
  }
  m.add_output(out.string(), "path.txt");
  CsvWriter csv(join(out, "rauzy.csv"), {"step", "T", "T0", "margin", "length"});
  for (std::size_t i = 0; i < path.size(); ++i)
    csv.row({std::to_string(i + 1), std::string(1, path[i]), std::string(1, p0[i]), fmt(run.margins[i]),
             fmt(run.lengths[i])});
  csv.close();
  m.add_output(out.string(), "rauzy.csv");
  int status = 0;
  if (M > 0) {
    const auto cmp = compare_paths(path, p0, static_cast<int>(p.integer("min_agreement")));
    std::cout << "T  " << path << (run.stop.empty() ? "" : "  [" + run.stop + "]") << "\nT0 " << p0 << "\n"
              << cmp.diagnostic << "\n";
    const GIET& T = s.giet(s.kernel());
    auto om = omega_and_wandering(T, s.flow(s.kernel()), s.depth(), static_cast<int>(p.integer("wander_iterates")),
                                  s.seed() + 5);
    CsvWriter g(join(out, "gaps.csv"), {"rank", "a", "b", "length"});
    for (std::size_t i = 0; i < om.gaps.size(); ++i)
      g.row({std::to_string(i), fmt(om.gaps[i].first), fmt(om.gaps[i].second),
             fmt(om.gaps[i].second - om.gaps[i].first)});
    g.close();
    m.add_output(out.string(), "gaps.csv");
    const auto& w = om.wandering;
    nlohmann::ordered_json j;
    j["params_hash"] = m.params_hash();
    j["agreement"] = cmp.agreement;
    j["length"] = T.length();
    j["J"] = {w.a, w.b};
    j["iterates"] = w.iterates;
    j["disjoint"] = w.disjoint;
    j["total_length"] = w.total_length;
    j["omega_distance"] = om.omega_distance;
    write_json(join(out, "wandering.json"), j);
    m.add_output(out.string(), "wandering.json");
    status = cmp.pass ? 0 : 1;
  }
  return status;
}

int cmd_measure(Session& s, const fs::path& out, Manifest& m) {
  const Params& p = s.params();
  const std::string& which = p.get("measure");
  const auto& S = *s.preset().surface;
  if (which == "nu") {
    const GIET& T = s.giet(KernelKind::C2);
    auto nu = empirical_nu(T, p.number("nu_start"), p.integer("nu_length"));
    CsvWriter csv(join(out, "nu.csv"), {"k", "xi", "weight"});
    for (std::size_t i = 0; i < nu.size(); ++i) csv.row({std::to_string(i), fmt(nu.xi[i]), fmt(nu.weights[i])});
    csv.close();
    m.add_output(out.string(), "nu.csv");
    return 0;
  }
  if (which == "srb") {
    const auto& obs = s.bumps();
    const auto& mv = s.bump_values();
    const int nmax = static_cast<int>(p.integer("n"));
    if (nmax < 0) throw UsageError("n must be non-negative");
    std::vector<int> ns;
    for (int n = 0; n <= nmax; n += (n < 10 ? 1 : 5)) ns.push_back(n);
    if (ns.back() != nmax) ns.push_back(nmax);
    auto tab = srb_pushforward(s.flow(KernelKind::C2), s.map(KernelKind::C2).fixed_points(0).p[0],
                               p.number("srb_half_length"), static_cast<int>(p.integer("srb_samples")), ns, obs, mv);
    CsvWriter csv(join(out, "srb.csv"), {"n", "observable", "pushed", "mu", "difference", "stderr"});
    for (const auto& row : tab.rows)
      for (std::size_t j = 0; j < obs.size(); ++j)
        csv.row({std::to_string(row.n), std::to_string(j), fmt(row.pushed[j]), fmt(mv[j]), fmt(row.diff[j]),
                 fmt(row.stderr_[j])});
    csv.close();
    m.add_output(out.string(), "srb.csv");
    const auto& last = tab.rows.back();
    std::cout << "max difference at n = " << last.n << ": " << *std::max_element(last.diff.begin(), last.diff.end())
              << "\n";
    return 0;
  }
  if (which == "correlation") {
    const auto& obs = s.bumps();
    auto phi = [&](const SurfacePoint& x) { return obs[0](S, x); };
    auto rep = correlation_decay(s.map(KernelKind::C2), s.mu(), phi, phi, static_cast<int>(p.integer("n")));
    CsvWriter csv(join(out, "correlation.csv"), {"n", "C", "stderr"});
    for (std::size_t n = 0; n < rep.C.size(); ++n) csv.row({std::to_string(n), fmt(rep.C[n]), fmt(rep.stderr_[n])});
    csv.close();
    m.add_output(out.string(), "correlation.csv");
    std::cout << "slope " << rep.slope << ", R^2 " << rep.r2 << "\n";
    return 0;
  }
  throw UsageError("measure must be srb, correlation or nu, got '" + which + "'");
}

}  // namespace

int execute(const std::string& command, const Params& p, const std::string& out, Manifest& m) {
  if (!command_keys().count(command)) throw UsageError("unknown command '" + command + "'");
  m.command = command;
  m.params = p;
  m.outputs.clear();
  Session s(p);
  m.resolved = s.resolved();
  fs::create_directories(out);
  const fs::path dir(out);
  int status = 0;
  if (command == "render") status = cmd_render(s, dir, m);
  if (command == "verify") status = cmd_verify(s, dir, m);
  if (command == "trace") status = cmd_trace(s, dir, m);
  if (command == "rauzy") status = cmd_rauzy(s, dir, m);
  if (command == "measure") status = cmd_measure(s, dir, m);
  m.write(out);
  return status;
}

namespace {

int replay(const std::string& manifest_path, std::string out) {
  Manifest old = Manifest::read(manifest_path);
  if (out.empty()) out = (fs::path(manifest_path).parent_path() / "replay").string();
  Manifest now;
  const int status = execute(old.command, old.params, out, now);
  std::map<std::string, std::string> a(old.outputs.begin(), old.outputs.end()), b(now.outputs.begin(), now.outputs.end());
  bool same = a.size() == b.size();
  for (const auto& [name, h] : a) {
    auto it = b.find(name);
    const bool eq = it != b.end() && it->second == h;
    same = same && eq;
    std::cout << (eq ? "same " : "DIFF ") << name << " " << h << "\n";
  }
  std::cout << (same ? "all output hashes reproduced" : "output hashes differ") << "\n";
  (void)status;
  return same ? 0 : 1;
}

std::string flag_names(const std::string& key) {
  std::string dash = key;
  std::replace(dash.begin(), dash.end(), '_', '-');
  return dash == key ? "--" + key : "--" + dash + ",--" + key;
}

}  // namespace

int main_cli(int argc, char** argv) {
  CLI::App app{"Non-linear pseudo-Anosov maps: attractors, renormalization and measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", artifact_version());

  Params defaults;
  std::map<std::string, std::string> given;
  std::string config, out = "nlpa-out", manifest_in;
  std::vector<CLI::App*> subs;

  for (const auto& [cmd, keys] : command_keys()) {
    static const std::map<std::string, std::string> about = {
        {"render", "rasterize the attractor and run the topological diagnostics"},
        {"verify", "run acceptance suites"},
        {"trace", "integrate the stable flow from a point"},
        {"rauzy", "Rauzy path of the return map, gaps and wandering interval"},
        {"measure", "SRB pushforwards, correlations or the transversal measure"}};
    CLI::App* sub = app.add_subcommand(cmd, about.at(cmd));
    sub->add_option("--config", config, "key = value file; flags override it");
    sub->add_option("--out", out, "output directory")->capture_default_str();
    std::vector<std::string> all = kModel;
    all.insert(all.end(), keys.begin(), keys.end());
    for (const auto& k : all) {
      std::string help = "";
      for (const auto& e : defaults.entries())
        if (e.key == k) help = e.help + " [" + e.value + "]";
      sub->add_option_function<std::string>(
          flag_names(k), [&given, k](const std::string& v) { given[k] = v; }, help);
    }
    if (cmd == "measure")
      for (const std::string m : {"srb", "correlation", "nu"})
        sub->add_flag_function("--" + m, [&given, m](std::int64_t) { given["measure"] = m; }, "same as --measure " + m);
    if (cmd == "render")
      for (const std::string f : {"png", "ppm"})
        sub->add_flag_function("--" + f, [&given, f](std::int64_t) { given["format"] = f; }, "same as --format " + f);
    subs.push_back(sub);
  }
  CLI::App* rep = app.add_subcommand("replay", "re-run a manifest and compare output hashes");
  rep->add_option("manifest", manifest_in, "manifest.json of an earlier run")->required();
  std::string replay_out;
  rep->add_option("--out", replay_out, "output directory [<manifest dir>/replay]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rep->parsed()) return replay(manifest_in, replay_out);
    for (CLI::App* sub : subs) {
      if (!sub->parsed()) continue;
      Params p;
      if (!config.empty()) p.load_file(config);
      for (const auto& [k, v] : given) p.set(k, v);
      Manifest m;
      const int status = execute(sub->get_name(), p, out, m);
      std::cout << "manifest " << (fs::path(out) / "manifest.json").string() << " (" << m.params_hash() << ")\n";
      return status;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidParameter ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace nlpa::cli
