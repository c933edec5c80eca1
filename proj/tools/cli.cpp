#include "cli.hpp"

#include "rarc/error.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rarc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kProblems = {"top-eig", "dominant-subspace", "elliptope",
                                            "truncated-svd", "swish"};
const std::vector<std::string> kModes = {"fd-pullback", "fd-transport", "fd-gradcalls",
                                         "exact"};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(source + ": seed must be a nonnegative integer, got '" + text + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw UsageError(source + ": seed out of range");
  return static_cast<std::uint64_t>(v);
}

std::string mode_of(const SolverConfig& c) {
  if (c.hessian_variant == HessianVariant::Exact) return "exact";
  if (c.hessian_variant == HessianVariant::Transport) return "fd-transport";
  if (c.hessian_variant == HessianVariant::GradCalls) return "fd-gradcalls";
  return "fd-pullback";
}

template <typename T>
T json_get(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config file: bad value for '" + key + "'");
  }
}

Index positive_size(long long v, const std::string& key) {
  if (v < 1) throw UsageError(key + " must be >= 1");
  return static_cast<Index>(v);
}

void apply_file(const std::string& path, Options& o) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [raw_key, val] : j.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "problem") {
      o.problem = json_get<std::string>(val, key);
    } else if (key == "n") {
      o.n = positive_size(json_get<long long>(val, key), key);
    } else if (key == "r") {
      o.r = positive_size(json_get<long long>(val, key), key);
    } else if (key == "s") {
      o.s = positive_size(json_get<long long>(val, key), key);
    } else if (key == "t") {
      o.t = positive_size(json_get<long long>(val, key), key);
    } else if (key == "dims") {
      const auto d = json_get<std::vector<long long>>(val, key);
      if (d.size() != 4) throw UsageError("config file: dims needs 4 entries");
      std::array<Index, 4> a{};
      for (std::size_t i = 0; i < 4; ++i) a[i] = positive_size(d[i], "dims");
      o.dims = a;
    } else if (key == "seed") {
      o.config.seed = val.is_string() ? parse_seed(val.get<std::string>(), "config file")
                                      : json_get<std::uint64_t>(val, key);
    } else if (key == "sigma1") {
      o.config.sigma1 = json_get<double>(val, key);
    } else if (key == "theta") {
      o.config.theta = json_get<double>(val, key);
    } else if (key == "eps_g") {
      o.config.eps_g = json_get<double>(val, key);
    } else if (key == "eps_h") {
      o.config.eps_H = json_get<double>(val, key);
    } else if (key == "mode") {
      o.mode = json_get<std::string>(val, key);
    } else if (key == "second_order") {
      o.config.second_order_mode = json_get<bool>(val, key);
    } else if (key == "max_iters") {
      o.config.max_outer_iters = json_get<std::size_t>(val, key);
    } else if (key == "max_alpha") {
      o.config.max_alpha = json_get<int>(val, key);
    } else if (key == "out") {
      o.out_dir = json_get<std::string>(val, key);
    } else if (key == "timings") {
      o.timings = json_get<bool>(val, key);
    } else {
      throw UsageError("config file: unknown key '" + raw_key + "'");
    }
  }
}

}  // namespace

void apply_mode(const std::string& mode, SolverConfig& c) {
  if (mode == "fd-pullback") {
    c.gradient_variant = GradientVariant::FD;
    c.hessian_variant = HessianVariant::Pullback;
  } else if (mode == "fd-transport") {
    c.gradient_variant = GradientVariant::FD;
    c.hessian_variant = HessianVariant::Transport;
  } else if (mode == "fd-gradcalls") {
    c.gradient_variant = GradientVariant::Exact;
    c.hessian_variant = HessianVariant::GradCalls;
  } else if (mode == "exact") {
    c.gradient_variant = GradientVariant::Exact;
    c.hessian_variant = HessianVariant::Exact;
  } else {
    throw UsageError("unknown mode '" + mode + "'");
  }
}

Options parse_config(const std::vector<std::string>& args, const char* env_seed) {
  CLI::App app{"Derivative-free adaptive cubic regularization on matrix manifolds", "rarc"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string problem, mode, out, config_path, seed_text;
  long long n = 0, r = 0, s = 0, t = 0;
  std::vector<long long> dims;
  double sigma1 = 0, theta = 0, eps_g = 0, eps_h = 0;
  std::size_t max_iters = 0;
  int max_alpha = 0;
  bool second_order = false, dry_run = false, timings = false;

  auto* o_problem = app.add_option("--problem", problem, "Problem to run or 'suite'")
                        ->check(CLI::IsMember([] {
                          auto v = kProblems;
                          v.push_back("suite");
                          return v;
                        }()));
  auto* o_n = app.add_option("--n", n, "Sphere dimension for top-eig");
  auto* o_r = app.add_option("--r", r, "Rows of the (first) factor");
  auto* o_s = app.add_option("--s", s, "Rows of the second Stiefel factor");
  auto* o_t = app.add_option("--t", t, "Columns / subspace dimension");
  auto* o_dims = app.add_option("--dims", dims, "Swish layer sizes r1,r2,r3,r4")
                     ->delimiter(',')
                     ->expected(4);
  auto* o_seed = app.add_option("--seed", seed_text, "Random seed");
  auto* o_sigma1 = app.add_option("--sigma1", sigma1, "Initial regularization sigma_1");
  auto* o_theta = app.add_option("--theta", theta, "Model stationarity factor theta");
  auto* o_eps_g = app.add_option("--eps-g", eps_g, "First-order tolerance");
  auto* o_eps_h = app.add_option("--eps-h", eps_h, "Second-order tolerance");
  auto* o_mode = app.add_option("--mode", mode, "Derivative mode")->check(CLI::IsMember(kModes));
  auto* o_second = app.add_flag("--second-order", second_order,
                                "Enforce the curvature condition and stop on lambda_min");
  auto* o_max_iters = app.add_option("--max-iters", max_iters, "Outer iteration cap");
  auto* o_max_alpha = app.add_option("--max-alpha", max_alpha, "Inner loop cap on alpha");
  auto* o_out = app.add_option("--out", out, "Output directory");
  app.add_option("--config", config_path, "JSON config file");
  app.add_flag("--dry-run", dry_run, "Print the resolved config and exit");
  app.add_flag("--timings", timings, "Also write timings.json with wall-clock times");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  Options o;
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    o.help = true;
    o.help_text = app.help();
    return o;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (env_seed != nullptr && *env_seed != '\0') o.config.seed = parse_seed(env_seed, "RARC_SEED");
  if (!config_path.empty()) apply_file(config_path, o);

  if (o_problem->count()) o.problem = problem;
  if (o_n->count()) o.n = positive_size(n, "--n");
  if (o_r->count()) o.r = positive_size(r, "--r");
  if (o_s->count()) o.s = positive_size(s, "--s");
  if (o_t->count()) o.t = positive_size(t, "--t");
  if (o_dims->count()) {
    std::array<Index, 4> a{};
    for (std::size_t i = 0; i < 4; ++i) a[i] = positive_size(dims[i], "--dims");
    o.dims = a;
  }
  if (o_seed->count()) o.config.seed = parse_seed(seed_text, "--seed");
  if (o_sigma1->count()) o.config.sigma1 = sigma1;
  if (o_theta->count()) o.config.theta = theta;
  if (o_eps_g->count()) o.config.eps_g = eps_g;
  if (o_eps_h->count()) o.config.eps_H = eps_h;
  if (o_mode->count()) o.mode = mode;
  if (o_second->count()) o.config.second_order_mode = second_order;
  if (o_max_iters->count()) o.config.max_outer_iters = max_iters;
  if (o_max_alpha->count()) o.config.max_alpha = max_alpha;
  if (o_out->count()) o.out_dir = out;
  o.dry_run = dry_run;
  o.timings = o.timings || timings;

  if (std::find(kProblems.begin(), kProblems.end(), o.problem) == kProblems.end() &&
      o.problem != "suite") {
    throw UsageError("unknown problem '" + o.problem + "'");
  }
  apply_mode(o.mode, o.config);
  try {
    o.config.validate();
  } catch (const rarc::DomainError& e) {
    throw UsageError(e.what());
  }
  return o;
}

std::vector<ProblemSpec> resolve_problems(const Options& o) {
  auto spec_for = [&](const std::string& name, bool use_flags) {
    ProblemSpec p;
    p.name = name;
    auto pick = [&](const std::optional<Index>& v, Index def) {
      return use_flags && v ? *v : def;
    };
    if (name == "top-eig") {
      p.r = use_flags && o.n ? *o.n : pick(o.r, 20);
    } else if (name == "dominant-subspace" || name == "elliptope") {
      p.r = pick(o.r, 12);
      p.t = pick(o.t, 4);
    } else if (name == "truncated-svd") {
      p.r = pick(o.r, 8);
      p.s = pick(o.s, 6);
      p.t = pick(o.t, 3);
    } else if (name == "swish") {
      p.dims = use_flags && o.dims ? *o.dims : std::array<Index, 4>{10, 20, 18, 16};
    }
    return p;
  };
  std::vector<ProblemSpec> out;
  if (o.problem == "suite") {
    for (const auto& name : kProblems) out.push_back(spec_for(name, false));
  } else {
    out.push_back(spec_for(o.problem, true));
  }
  return out;
}

ProblemInstance build_problem(const ProblemSpec& p, std::uint64_t seed) {
  if (p.name == "top-eig") return make_top_eigenvalue(p.r, seed);
  if (p.name == "dominant-subspace") return make_dominant_subspace(p.r, p.t, seed);
  if (p.name == "elliptope") return make_elliptope(p.r, p.t, seed);
  if (p.name == "truncated-svd") return make_truncated_svd(p.r, p.s, p.t, seed);
  if (p.name == "swish") return make_swish_composite(p.dims, seed);
  throw UsageError("unknown problem '" + p.name + "'");
}

RunReport make_report(const std::string& problem, const std::string& manifold,
                      const RunResult& result) {
  RunReport rep;
  rep.problem = problem;
  rep.manifold = manifold;
  rep.ofv = result.history.back().f_val;
  rep.g_norm = result.history.back().g_norm;
  rep.iters = static_cast<std::size_t>(
      std::count_if(result.history.begin(), result.history.end(),
                    [](const IterateRecord& r) { return !r.terminal; }));
  rep.f_evals = result.f_evals;
  rep.wall_ms = std::chrono::duration<double, std::milli>(result.wall_time).count();
  rep.status = result.status;
  return rep;
}

json config_json(const Options& o) {
  json j;
  j["problem"] = o.problem;
  j["mode"] = mode_of(o.config);
  j["seed"] = o.config.seed;
  j["sigma1"] = o.config.sigma1;
  j["theta"] = o.config.theta;
  j["eps_g"] = o.config.eps_g;
  j["eps_h"] = o.config.eps_H ? json(*o.config.eps_H) : json(nullptr);
  j["second_order"] = o.config.second_order_mode;
  j["max_iters"] = o.config.max_outer_iters;
  j["max_alpha"] = o.config.max_alpha;
  j["out"] = o.out_dir;
  json problems = json::array();
  for (const ProblemSpec& p : resolve_problems(o)) {
    json e{{"name", p.name}};
    if (p.name == "swish") {
      e["dims"] = p.dims;
    } else {
      e["r"] = p.r;
      if (p.s > 0) e["s"] = p.s;
      if (p.t > 0) e["t"] = p.t;
    }
    problems.push_back(e);
  }
  j["problems"] = problems;
  return j;
}

void write_history_csv(std::ostream& os, const std::vector<IterateRecord>& history) {
  os << "k,f,g_norm,v_norm,sigma,alpha,h,h_clamped,f_evals_cum\n";
  char buf[512];
  for (const IterateRecord& r : history) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%d,%zu\n", r.k,
                  r.f_val, r.g_norm, r.v_norm, r.sigma_k, r.alpha_k, r.h,
                  r.h_clamped ? 1 : 0, r.f_evals_cum);
    os << buf;
  }
}

namespace {

void check_compatible(const ProblemInstance& pi, const SolverConfig& c) {
  const Capabilities caps = pi.manifold->capabilities();
  const std::string where = pi.name + " on " + pi.manifold->name();
  if (c.hessian_variant == HessianVariant::Transport && !(caps.has_exp && caps.has_transport)) {
    throw UsageError("mode fd-transport needs exp and parallel transport, unavailable for " +
                     where);
  }
  if (c.gradient_variant == GradientVariant::Exact && !pi.objective.has_gradient()) {
    throw UsageError("mode needs an analytic gradient, unavailable for " + where);
  }
  if (c.hessian_variant == HessianVariant::Exact && !pi.objective.has_hessian()) {
    throw UsageError("mode exact needs an analytic Hessian, unavailable for " + where);
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<RunReport> run_benchmark(const Options& o, std::ostream& log) {
  std::vector<ProblemInstance> instances;
  for (const ProblemSpec& spec : resolve_problems(o)) {
    try {
      instances.push_back(build_problem(spec, o.config.seed));
    } catch (const rarc::DomainError& e) {
      throw UsageError(e.what());
    }
    check_compatible(instances.back(), o.config);
  }

  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + o.out_dir + "'");
  }

  std::vector<RunReport> reports;
  for (const ProblemInstance& pi : instances) {
    const RunResult result = run(pi.objective, pi.manifold, o.config);
    std::ostringstream csv;
    write_history_csv(csv, result.history);
    write_file(dir / (pi.name + ".csv"), csv.str());
    reports.push_back(make_report(pi.name, pi.manifold->name(), result));
    const RunReport& rep = reports.back();
    log << rep.problem << " " << rep.manifold << " " << to_string(rep.status)
        << " ofv=" << rep.ofv << " g=" << rep.g_norm << " iters=" << rep.iters
        << " f_evals=" << rep.f_evals << "\n";
  }

  json summary;
  summary["schema"] = 1;
  summary["config"] = config_json(o);
  summary["config"].erase("out");  // where the files went is not part of the result
  json arr = json::array();
  json timings = json::array();
  for (const RunReport& rep : reports) {
    arr.push_back({{"problem", rep.problem},
                   {"manifold", rep.manifold},
                   {"ofv", rep.ofv},
                   {"g_norm", rep.g_norm},
                   {"iters", rep.iters},
                   {"f_evals", rep.f_evals},
                   {"status", std::string(to_string(rep.status))}});
    timings.push_back({{"problem", rep.problem}, {"wall_ms", rep.wall_ms}});
  }
  summary["reports"] = arr;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  if (o.timings) {
    write_file(dir / "timings.json", json{{"schema", 1}, {"timings", timings}}.dump(2) + "\n");
  }
  return reports;
}

int main_entry(const std::vector<std::string>& args, const char* env_seed,
               std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o = parse_config(args, env_seed);
  } catch (const UsageError& e) {
    err << "rarc: " << e.what() << "\n";
    return kUsage;
  }
  if (o.help) {
    out << o.help_text;
    return kOk;
  }
  if (o.dry_run) {
    out << config_json(o).dump(2) << "\n";
    return kOk;
  }
  try {
    const auto reports = run_benchmark(o, out);
    const bool ok = std::all_of(reports.begin(), reports.end(),
                                [](const RunReport& r) { return is_converged(r.status); });
    return ok ? kOk : kNotConverged;
  } catch (const UsageError& e) {
    err << "rarc: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "rarc: " << e.what() << "\n";
    return kIo;
  } catch (const rarc::Error& e) {
    err << "rarc: run failed: " << e.what() << "\n";
    return kNotConverged;
  }
}

}  // namespace rarc::cli
