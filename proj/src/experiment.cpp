#include "aoinet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoinet/analytic.hpp"
#include "aoinet/errors.hpp"
#include "aoinet/gradient.hpp"
#include "aoinet/homogeneous.hpp"
#include "aoinet/rng.hpp"
#include "aoinet/simulator.hpp"

namespace fs = std::filesystem;

namespace aoinet::exp {

namespace {

// seed streams: keep every stochastic stage on its own derived stream
enum SeedStream : std::uint64_t {
  kCorrelationStream = 1,
  kPolicyStream = 2,
  kOptimizerStream = 3,
  kSimulationStream = 4,
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + v + "'", line);
  }
}

std::int64_t parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const std::int64_t x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + v + "'", line);
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true/false, got '" + v + "'", line);
}

std::vector<double> parse_vector(const std::string& v, int line) {
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, line));
  if (out.empty()) throw ConfigError("expected at least one number", line);
  return out;
}

}  // namespace

ExperimentSpec parse_spec(std::istream& in, const std::string& path) {
  ExperimentSpec spec;
  spec.source_path = path;
  SweepAxis axis;
  bool axis_seen = false;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", lineno);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", lineno);
    spec.raw.emplace_back(key, value);

    if (key == "name") spec.name = value;
    else if (key == "n") spec.n = static_cast<int>(parse_int(value, lineno));
    else if (key == "aoi_cap") spec.aoi_cap = static_cast<int>(parse_int(value, lineno));
    else if (key == "power_transmit") spec.power_transmit = parse_double(value, lineno);
    else if (key == "power_idle") spec.power_idle = parse_double(value, lineno);
    else if (key == "energy_budget") spec.energy_budget = parse_double(value, lineno);
    else if (key == "correlation_file") spec.correlation_file = value;
    else if (key == "correlation_diag") { spec.corr_diag = parse_double(value, lineno); spec.has_generator = true; }
    else if (key == "correlation_lo") { spec.corr_lo = parse_double(value, lineno); spec.has_generator = true; }
    else if (key == "correlation_hi") { spec.corr_hi = parse_double(value, lineno); spec.has_generator = true; }
    else if (key == "correlation_density") { spec.corr_density = parse_double(value, lineno); spec.has_generator = true; }
    else if (key == "policy") spec.policy = parse_vector(value, lineno);
    else if (key == "strategy") spec.strategy = value;
    else if (key == "sweep_variable") { axis.variable = value; axis_seen = true; }
    else if (key == "sweep_min") { axis.lo = parse_double(value, lineno); axis_seen = true; }
    else if (key == "sweep_max") { axis.hi = parse_double(value, lineno); axis_seen = true; }
    else if (key == "sweep_steps") { axis.steps = static_cast<int>(parse_int(value, lineno)); axis_seen = true; }
    else if (key == "sweep_simulate") spec.sweep_simulate = parse_bool(value, lineno);
    else if (key == "sim_slots") spec.sim_slots = parse_int(value, lineno);
    else if (key == "sim_warmup") spec.sim_warmup = parse_int(value, lineno);
    else if (key == "replications") spec.replications = static_cast<int>(parse_int(value, lineno));
    else if (key == "gamma1") spec.opt.weights.gamma1 = parse_double(value, lineno);
    else if (key == "gamma2") spec.opt.weights.gamma2 = parse_double(value, lineno);
    else if (key == "learning_rate") spec.opt.learning_rate = parse_double(value, lineno);
    else if (key == "tolerance") spec.opt.tolerance = parse_double(value, lineno);
    else if (key == "beta1") spec.opt.beta1 = parse_double(value, lineno);
    else if (key == "beta2") spec.opt.beta2 = parse_double(value, lineno);
    else if (key == "epsilon_guard") spec.opt.epsilon_guard = parse_double(value, lineno);
    else if (key == "starts") spec.opt.starts = static_cast<int>(parse_int(value, lineno));
    else if (key == "min_start_distance") spec.opt.min_start_distance = parse_double(value, lineno);
    else if (key == "max_iters") spec.opt.max_iters = parse_int(value, lineno);
    else if (key == "q_round") spec.opt.q_round = parse_double(value, lineno);
    else if (key == "q_epsilon") spec.q_epsilon = parse_double(value, lineno);
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(value, lineno));
    else throw ConfigError("unknown key '" + key + "'", lineno);
  }
  if (axis_seen) spec.sweep = axis;
  if (spec.n <= 0)
    throw ConfigError("config must set a positive sensor count 'n'");
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_spec(in, path);
}

std::uint64_t effective_seed(const ExperimentSpec& spec, const RunOptions& opt) {
  return opt.seed ? *opt.seed : spec.seed;
}

NetworkModel build_model(const ExperimentSpec& spec, std::uint64_t seed) {
  const bool from_file = !spec.correlation_file.empty();
  if (from_file == spec.has_generator)
    throw ConfigError(
        "exactly one correlation source required: correlation_file or "
        "correlation_lo/correlation_hi generator parameters");
  NetworkModel model;
  model.n = spec.n;
  model.aoi_cap = spec.aoi_cap;
  model.power = {spec.power_transmit, spec.power_idle, spec.energy_budget};
  if (from_file) {
    fs::path p(spec.correlation_file);
    if (p.is_relative() && !spec.source_path.empty())
      p = fs::path(spec.source_path).parent_path() / p;
    model.correlation = load_correlation(p.string());
  } else {
    CorrelationGenSpec g;
    g.n = spec.n;
    g.diag = spec.corr_diag;
    g.lo = spec.corr_lo;
    g.hi = spec.corr_hi;
    g.density = spec.corr_density;
    g.seed = derive_seed(seed, kCorrelationStream);
    model.correlation = generate_correlation(g);
  }
  validate(model);
  return model;
}

Policy build_policy(const ExperimentSpec& spec, const NetworkModel& model,
                    std::uint64_t seed, int threads) {
  const bool explicit_policy = !spec.policy.empty();
  if (explicit_policy == !spec.strategy.empty())
    throw ConfigError(
        "exactly one policy source required: 'policy' values or a 'strategy' name");
  if (explicit_policy) {
    Policy q = spec.policy;
    if (q.size() == 1 && model.n > 1) q = broadcast_policy(model.n, q[0]);
    validate_policy_shape(model.n, q);
    return q;
  }
  const std::string& s = spec.strategy;
  if (s == "random") {
    Rng rng(derive_seed(seed, kPolicyStream));
    Policy q(model.n);
    for (int i = 0; i < model.n; ++i) q[i] = rng.uniform01();
    return q;
  }
  if (s == "homogeneous_age")
    return broadcast_policy(model.n, homo::age_optimal_q(model.n));
  if (s == "homogeneous_ee")
    return broadcast_policy(model.n, homo::energy_optimal_q(model.n, model.power));
  if (s == "homogeneous_pareto")
    return broadcast_policy(
        model.n,
        homo::pareto_search(model, spec.opt.weights, spec.q_epsilon, threads).q_star);
  if (s == "mspadam") {
    mspadam::OptimizerConfig cfg = spec.opt;
    cfg.seed = derive_seed(seed, kOptimizerStream);
    return mspadam::optimize(model, cfg, threads).q_star;
  }
  throw ConfigError("unknown strategy '" + s + "'");
}

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::ofstream f(dir / name);
  if (!f) throw Error("cannot write " + (dir / name).string());
  return f;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const ExperimentSpec& spec, const RunOptions& opt,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream f = open_out(dir, "manifest.txt");
  f << "tool = aoinet " << kVersion << "\n";
  f << "command = " << command << "\n";
  f << "config = " << (spec.source_path.empty() ? "(builtin)" : spec.source_path)
    << "\n";
  f << "seed = " << effective_seed(spec, opt) << "\n";
  f << "threads = " << opt.threads << "\n";
  for (const auto& [k, v] : spec.raw) f << k << " = " << v << "\n";
  for (const auto& [k, v] : extra) f << k << " = " << v << "\n";
}

void report_artifacts(const RunOptions& opt, const fs::path& dir,
                      std::initializer_list<const char*> files) {
  if (!opt.verbose) return;
  for (const char* f : files) std::cout << "wrote " << (dir / f).string() << "\n";
}

fs::path prepare_dir(const RunOptions& opt) {
  fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_sim_csv(std::ostream& out, const sim::SimStats& stats) {
  out << "sensor,mean_aoi,reset_rate,delivered_updates,empirical_ee\n";
  const int n = static_cast<int>(stats.mean_aoi.size());
  for (int i = 0; i < n; ++i)
    out << i + 1 << ',' << fmt(stats.mean_aoi[i]) << ','
        << fmt(stats.reset_rate[i]) << ',' << stats.delivered_updates[i] << ','
        << fmt(stats.empirical_ee[i]) << '\n';
}

void write_replicate_csv(std::ostream& out, const sim::ReplicateSummary& s) {
  out << "sensor,mean_aoi,mean_aoi_se,reset_rate,reset_rate_se,"
         "delivered_updates,delivered_updates_se,empirical_ee,empirical_ee_se\n";
  const int n = static_cast<int>(s.mean_aoi.size());
  for (int i = 0; i < n; ++i)
    out << i + 1 << ',' << fmt(s.mean_aoi[i]) << ',' << fmt(s.mean_aoi_se[i])
        << ',' << fmt(s.reset_rate[i]) << ',' << fmt(s.reset_rate_se[i]) << ','
        << fmt(s.delivered_updates[i]) << ',' << fmt(s.delivered_updates_se[i])
        << ',' << fmt(s.empirical_ee[i]) << ',' << fmt(s.empirical_ee_se[i])
        << '\n';
}

class TraceWriter : public sim::SlotObserver {
 public:
  TraceWriter(std::ostream& out, int n) : out_(out) {
    out_ << "slot,transmitters,success";
    for (int i = 1; i <= n; ++i) out_ << ",aoi_" << i;
    out_ << "\n";
  }

  void on_slot(std::int64_t slot, std::span<const int> transmitters,
               int success_sensor, std::span<const std::int32_t> aoi,
               std::span<const std::uint8_t>) override {
    out_ << slot << ',';
    for (size_t k = 0; k < transmitters.size(); ++k)
      out_ << (k ? ";" : "") << transmitters[k] + 1;
    out_ << ',' << success_sensor + 1;  // 0 = no delivery
    for (std::int32_t a : aoi) out_ << ',' << a;
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

}  // namespace

void run_analytic(const ExperimentSpec& spec, const RunOptions& opt) {
  const std::uint64_t seed = effective_seed(spec, opt);
  const NetworkModel model = build_model(spec, seed);
  const Policy q = build_policy(spec, model, seed, opt.threads);
  const analytic::MetricsReport rep = analytic::evaluate(q, model, spec.opt.weights);

  const fs::path dir = prepare_dir(opt);
  write_manifest(dir, "analytic", spec, opt, {});
  {
    std::ofstream f = open_out(dir, "metrics.csv");
    analytic::write_metrics_csv(rep, q, f);
  }
  {
    std::ofstream f = open_out(dir, "report.txt");
    f << analytic::metrics_text(rep, model, spec.opt.weights);
  }
  if (opt.dump_gradient) {
    const gradient::GradientReport g = gradient::full_report(q, model, spec.opt.weights);
    std::ofstream f = open_out(dir, "gradients.csv");
    f << "row,kind";
    for (int s = 1; s <= model.n; ++s) f << ",d_q" << s;
    f << "\n";
    for (int i = 0; i < model.n; ++i) {
      f << i + 1 << ",d_reset";
      for (int s = 0; s < model.n; ++s)
        f << ',' << fmt(g.d_reset[static_cast<size_t>(i) * model.n + s]);
      f << "\n";
    }
    const auto vec_row = [&](const char* kind, const std::vector<double>& v) {
      f << "network," << kind;
      for (double x : v) f << ',' << fmt(x);
      f << "\n";
    };
    vec_row("d_aoi", g.d_aoi);
    vec_row("d_ee", g.d_ee);
    vec_row("d_objective", g.d_objective);
  }
  std::cout << "analytic: network AoI " << fmt(rep.network_aoi) << ", EE "
            << fmt(rep.network_ee) << ", J " << fmt(rep.objective) << "\n";
  report_artifacts(opt, dir, {"metrics.csv", "report.txt"});
}

void run_simulate(const ExperimentSpec& spec, const RunOptions& opt) {
  const std::uint64_t seed = effective_seed(spec, opt);
  const NetworkModel model = build_model(spec, seed);
  const Policy q = build_policy(spec, model, seed, opt.threads);

  sim::SimConfig cfg;
  cfg.model = model;
  cfg.policy = q;
  cfg.horizon = spec.sim_slots;
  cfg.warmup = spec.sim_warmup;
  cfg.seed = derive_seed(seed, kSimulationStream);

  const fs::path dir = prepare_dir(opt);
  write_manifest(dir, "simulate", spec, opt,
                 {{"sim_seed", std::to_string(cfg.seed)}});

  if (spec.replications > 1) {
    const sim::ReplicateSummary summary =
        sim::replicate(cfg, spec.replications, opt.threads);
    std::ofstream f = open_out(dir, "sim.csv");
    write_replicate_csv(f, summary);
    double total = 0.0;
    for (double a : summary.mean_aoi) total += a;
    std::cout << "simulate: " << spec.replications << " replications, network AoI "
              << fmt(total) << "\n";
  } else {
    std::optional<std::ofstream> trace_file;
    std::optional<TraceWriter> tracer;
    if (!opt.trace_path.empty()) {
      trace_file.emplace(opt.trace_path);
      if (!*trace_file) throw Error("cannot write trace: " + opt.trace_path);
      tracer.emplace(*trace_file, model.n);
    }
    const sim::SimStats stats = sim::simulate(cfg, tracer ? &*tracer : nullptr);
    {
      std::ofstream f = open_out(dir, "sim.csv");
      write_sim_csv(f, stats);
    }
    {
      std::ofstream f = open_out(dir, "sim_histogram.csv");
      f << "sensor,aoi,count\n";
      for (int i = 0; i < model.n; ++i)
        for (int k = 0; k < model.aoi_cap; ++k)
          f << i + 1 << ',' << k + 1 << ',' << stats.aoi_histogram[i][k] << '\n';
    }
    double total = 0.0;
    for (double a : stats.mean_aoi) total += a;
    std::cout << "simulate: network AoI " << fmt(total) << " over "
              << stats.slots_counted << " counted slots\n";
  }
  report_artifacts(opt, dir, {"sim.csv"});
}

namespace {

struct SweepPoint {
  double q = 0.0;
  double aoi_analytic = 0.0;
  double ee_analytic = 0.0;
  double objective = 0.0;
  double aoi_sim = 0.0;
  double ee_sim = 0.0;
};

// analytic curve plus optional per-point simulation, parallel over points
std::vector<SweepPoint> sweep_points(const NetworkModel& model,
                                     const ObjectiveWeights& weights,
                                     const std::vector<double>& qs, bool simulate,
                                     std::int64_t slots, std::int64_t warmup,
                                     std::uint64_t sim_seed_base, int threads) {
  const std::vector<homo::SweepRow> rows = homo::evaluate_grid(model, weights, qs, threads);
  std::vector<SweepPoint> points(rows.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    points[k].q = rows[k].q;
    points[k].aoi_analytic = rows[k].network_aoi;
    points[k].ee_analytic = rows[k].network_ee;
    points[k].objective = rows[k].objective;
  }
  if (!simulate) return points;
  const std::int64_t count = static_cast<std::int64_t>(points.size());
#ifdef _OPENMP
  int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(dynamic)
#endif
  for (std::int64_t k = 0; k < count; ++k) {
    sim::SimConfig cfg;
    cfg.model = model;
    cfg.policy = broadcast_policy(model.n, points[k].q);
    cfg.horizon = slots;
    cfg.warmup = warmup;
    cfg.seed = derive_seed(sim_seed_base, static_cast<std::uint64_t>(k));
    const sim::SimStats stats = sim::simulate(cfg);
    double aoi = 0.0, ee = 0.0;
    for (int i = 0; i < model.n; ++i) {
      aoi += stats.mean_aoi[i];
      ee += stats.empirical_ee[i];
    }
    points[k].aoi_sim = aoi;
    points[k].ee_sim = ee;
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     bool with_sim) {
  out << (with_sim
              ? "q,aoi_analytic,aoi_sim,ee_analytic,ee_sim,objective\n"
              : "q,aoi_analytic,ee_analytic,objective\n");
  for (const SweepPoint& p : points) {
    if (with_sim)
      out << fmt(p.q) << ',' << fmt(p.aoi_analytic) << ',' << fmt(p.aoi_sim)
          << ',' << fmt(p.ee_analytic) << ',' << fmt(p.ee_sim) << ','
          << fmt(p.objective) << '\n';
    else
      out << fmt(p.q) << ',' << fmt(p.aoi_analytic) << ','
          << fmt(p.ee_analytic) << ',' << fmt(p.objective) << '\n';
  }
}

}  // namespace

void run_sweep(const ExperimentSpec& spec, const RunOptions& opt) {
  if (!spec.sweep)
    throw ConfigError("sweep requires sweep_min/sweep_max/sweep_steps");
  const SweepAxis& axis = *spec.sweep;
  if (axis.variable != "q")
    throw ConfigError("unsupported sweep variable '" + axis.variable +
                      "'; only 'q' is available");
  if (axis.steps < 1) throw ConfigError("sweep_steps must be >= 1");
  if (!(axis.lo >= 0.0 && axis.hi <= 1.0 && axis.lo <= axis.hi))
    throw ConfigError("sweep range must lie inside [0,1]");

  const std::uint64_t seed = effective_seed(spec, opt);
  const NetworkModel model = build_model(spec, seed);
  std::vector<double> qs(axis.steps);
  for (int k = 0; k < axis.steps; ++k)
    qs[k] = axis.steps == 1
                ? axis.lo
                : axis.lo + (axis.hi - axis.lo) * k / static_cast<double>(axis.steps - 1);

  const std::vector<SweepPoint> points =
      sweep_points(model, spec.opt.weights, qs, spec.sweep_simulate,
                   spec.sim_slots, spec.sim_warmup,
                   derive_seed(seed, kSimulationStream), opt.threads);

  const fs::path dir = prepare_dir(opt);
  write_manifest(dir, "sweep", spec, opt, {});
  std::ofstream f = open_out(dir, "sweep.csv");
  write_sweep_csv(f, points, spec.sweep_simulate);
  std::cout << "sweep: " << points.size() << " points over ["
            << fmt(axis.lo) << ", " << fmt(axis.hi) << "]\n";
  report_artifacts(opt, dir, {"sweep.csv"});
}

namespace {

void write_solution_row(std::ostream& out, const char* kind,
                        const homo::HomogeneousSolution& sol, double objective) {
  out << kind << ',' << fmt(sol.q_star) << ',' << fmt(sol.aoi_at_q) << ','
      << fmt(sol.ee_at_q) << ',' << fmt(objective) << ','
      << (sol.power_ratio_limit ? 1 : 0) << '\n';
}

}  // namespace

void run_opt_homogeneous(const ExperimentSpec& spec, const RunOptions& opt) {
  const std::uint64_t seed = effective_seed(spec, opt);
  const NetworkModel model = build_model(spec, seed);
  const ObjectiveWeights& w = spec.opt.weights;

  const homo::HomogeneousSolution age = homo::age_optimal(model);
  const homo::HomogeneousSolution energy = homo::energy_optimal(model);
  const homo::HomogeneousSolution pareto =
      homo::pareto_search(model, w, spec.q_epsilon, opt.threads);
  homo::Evaluator eval(model);

  const fs::path dir = prepare_dir(opt);
  write_manifest(dir, "opt-homogeneous", spec, opt,
                 {{"interval_lo", fmt(pareto.interval_lo)},
                  {"interval_hi", fmt(pareto.interval_hi)},
                  {"candidates", std::to_string(pareto.candidates)}});
  {
    std::ofstream f = open_out(dir, "solutions.csv");
    f << "kind,q,network_aoi,network_ee,objective,power_ratio_limit\n";
    write_solution_row(f, "age_optimal", age, eval.objective(age.q_star, w));
    write_solution_row(f, "energy_optimal", energy, eval.objective(energy.q_star, w));
    write_solution_row(f, "pareto", pareto, pareto.objective_at_q);
  }
  {
    // full curve for plotting; range covers the optimum interval with margin
    const double hi = std::min(1.0, 2.0 * age.q_star);
    const double lo = std::min(energy.q_star / 2.0, hi);
    const std::vector<homo::SweepRow> rows =
        homo::sweep(model, w, lo, hi, 200, opt.threads);
    std::ofstream f = open_out(dir, "sweep.csv");
    f << "q,network_aoi,network_ee,objective\n";
    for (const homo::SweepRow& r : rows)
      f << fmt(r.q) << ',' << fmt(r.network_aoi) << ',' << fmt(r.network_ee)
        << ',' << fmt(r.objective) << '\n';
  }
  std::cout << "opt-homogeneous: q_A* " << fmt(age.q_star) << ", q_E* "
            << fmt(energy.q_star) << ", pareto q* " << fmt(pareto.q_star)
            << " (J " << fmt(pareto.objective_at_q) << ")\n";
  report_artifacts(opt, dir, {"solutions.csv", "sweep.csv"});
}

namespace {

void write_policy_csv(std::ostream& out, const Policy& q) {
  out << "sensor,q\n";
  for (size_t i = 0; i < q.size(); ++i) out << i + 1 << ',' << fmt(q[i]) << '\n';
}

}  // namespace

void run_opt_mspadam(const ExperimentSpec& spec, const RunOptions& opt) {
  const std::uint64_t seed = effective_seed(spec, opt);
  const NetworkModel model = build_model(spec, seed);
  mspadam::OptimizerConfig cfg = spec.opt;
  cfg.seed = derive_seed(seed, kOptimizerStream);

  std::vector<mspadam::IterationRecord> trace;
  const mspadam::OptimizationResult result = mspadam::optimize(
      model, cfg, opt.threads, opt.dump_trajectories ? &trace : nullptr);

  const fs::path dir = prepare_dir(opt);
  write_manifest(dir, "opt-mspadam", spec, opt,
                 {{"optimizer_seed", std::to_string(cfg.seed)}});
  {
    std::ofstream f = open_out(dir, "policy.csv");
    write_policy_csv(f, result.q_star);
  }
  {
    std::ofstream f = open_out(dir, "starts.csv");
    f << "start,iterations,objective,converged,failed\n";
    for (const mspadam::StartTrajectory& t : result.starts)
      f << t.start << ',' << t.iterations << ',' << fmt(t.final_objective)
        << ',' << (t.converged ? 1 : 0) << ',' << (t.failed ? 1 : 0) << '\n';
  }
  if (opt.dump_trajectories) {
    std::ofstream f = open_out(dir, "trajectories.csv");
    f << "start,iteration,objective,step_norm\n";
    for (const mspadam::IterationRecord& r : trace)
      f << r.start << ',' << r.iteration << ',' << fmt(r.objective) << ','
        << fmt(r.step_norm) << '\n';
  }
  {
    std::ofstream f = open_out(dir, "baselines.csv");
    f << "strategy,objective,network_aoi,network_ee\n";
    f << "mspadam," << fmt(result.objective) << ',';
    const analytic::MetricsReport rep =
        analytic::evaluate(result.q_star, model, cfg.weights);
    f << fmt(rep.network_aoi) << ',' << fmt(rep.network_ee) << '\n';
    for (const mspadam::BaselineKind kind :
         {mspadam::BaselineKind::random, mspadam::BaselineKind::homogeneous_age,
          mspadam::BaselineKind::homogeneous_ee,
          mspadam::BaselineKind::homogeneous_pareto}) {
      const mspadam::BaselineResult b = mspadam::baseline(
          model, kind, cfg.weights, derive_seed(seed, kPolicyStream));
      f << mspadam::baseline_name(kind) << ',' << fmt(b.metrics.objective) << ','
        << fmt(b.metrics.network_aoi) << ',' << fmt(b.metrics.network_ee) << '\n';
    }
  }
  for (const std::string& wmsg : result.warnings)
    std::cerr << "warning: " << wmsg << "\n";
  std::cout << "opt-mspadam: J " << fmt(result.objective) << " from start "
            << result.best_start << ", "
            << fmt(mspadam::contention_reduction(result.q_star, cfg.q_round))
            << " of sensors silent\n";
  report_artifacts(opt, dir, {"policy.csv", "starts.csv", "baselines.csv"});
}

namespace {

ExperimentSpec fig_base_spec(int n, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.n = n;
  spec.aoi_cap = 20;
  spec.power_transmit = 100.0;
  spec.power_idle = 1.0;
  spec.energy_budget = 1e6;
  spec.seed = seed;
  return spec;
}

NetworkModel fig_model(int n, double lo, double hi, std::uint64_t seed) {
  NetworkModel model;
  model.n = n;
  model.aoi_cap = 20;
  model.power = {100.0, 1.0, 1e6};
  CorrelationGenSpec g;
  g.n = n;
  g.diag = 1.0;
  g.lo = lo;
  g.hi = hi;
  g.density = 1.0;
  g.seed = seed;
  model.correlation = generate_correlation(g);
  return model;
}

void reproduce_fig5_fig6(const RunOptions& opt, bool fig6) {
  const std::uint64_t seed = opt.seed ? *opt.seed : 0;
  const fs::path dir = prepare_dir(opt);
  const char* name = fig6 ? "fig6" : "fig5";
  constexpr double ranges[3][2] = {{0.0, 0.3}, {0.3, 0.6}, {0.6, 0.9}};
  const ObjectiveWeights weights = fig6 ? ObjectiveWeights{0.02, 1.0}
                                        : ObjectiveWeights{0.1, 1.0};

  ExperimentSpec manifest_spec = fig_base_spec(50, seed);
  manifest_spec.raw.emplace_back("matrices", "C1 [0,0.3]; C2 [0.3,0.6]; C3 [0.6,0.9]");
  manifest_spec.raw.emplace_back("gamma1", fmt(weights.gamma1));
  manifest_spec.raw.emplace_back("gamma2", fmt(weights.gamma2));
  write_manifest(dir, std::string("reproduce ") + name, manifest_spec, opt, {});

  std::ofstream solutions;
  if (fig6) {
    solutions = open_out(dir, "fig6_solutions.csv");
    solutions << "matrix,q_energy,q_age,q_star,objective,network_aoi,network_ee,"
                 "candidates\n";
  }

  for (int k = 0; k < 3; ++k) {
    const std::uint64_t matrix_seed = derive_seed(seed, static_cast<std::uint64_t>(k + 1));
    const NetworkModel model = fig_model(50, ranges[k][0], ranges[k][1], matrix_seed);
    const std::string matrix_name = "C" + std::to_string(k + 1);
    save_correlation(model.correlation,
                     (dir / (std::string(name) + "_" + matrix_name + ".txt")).string());

    if (fig6) {
      const std::vector<double> qs = homo::uniform_grid(0.002, 0.04, 0.001);
      const std::vector<homo::SweepRow> rows =
          homo::evaluate_grid(model, weights, qs, opt.threads);
      std::ofstream f = open_out(dir, std::string(name) + "_" + matrix_name + ".csv");
      f << "q,network_aoi,network_ee,objective\n";
      for (const homo::SweepRow& r : rows)
        f << fmt(r.q) << ',' << fmt(r.network_aoi) << ',' << fmt(r.network_ee)
          << ',' << fmt(r.objective) << '\n';
      const homo::HomogeneousSolution sol =
          homo::pareto_search(model, weights, 1e-4, opt.threads);
      solutions << matrix_name << ',' << fmt(sol.interval_lo) << ','
                << fmt(sol.interval_hi) << ',' << fmt(sol.q_star) << ','
                << fmt(sol.objective_at_q) << ',' << fmt(sol.aoi_at_q) << ','
                << fmt(sol.ee_at_q) << ',' << sol.candidates << '\n';
    } else {
      std::vector<double> qs(20);
      for (int i = 0; i < 20; ++i) qs[i] = 0.002 + 0.002 * i;
      const std::vector<SweepPoint> points = sweep_points(
          model, weights, qs, true, 1000000, 1000,
          derive_seed(seed, 100 + static_cast<std::uint64_t>(k)), opt.threads);
      std::ofstream f = open_out(dir, std::string(name) + "_" + matrix_name + ".csv");
      write_sweep_csv(f, points, true);
    }
    if (opt.verbose)
      std::cout << name << ": finished matrix " << matrix_name << "\n";
  }
  std::cout << "reproduce " << name << ": artifacts in " << dir.string() << "\n";
}

void write_performance_header(std::ostream& out, const char* axis) {
  out << axis
      << ",strategy,objective,network_aoi,network_ee,contention_reduction\n";
}

void performance_rows(std::ostream& perf, std::ostream* policies,
                      const std::string& axis_value, const NetworkModel& model,
                      const ObjectiveWeights& weights, std::uint64_t opt_seed,
                      std::uint64_t random_seed, double q_round, int threads) {
  mspadam::OptimizerConfig cfg;  // Table-style defaults
  cfg.weights = weights;
  cfg.seed = opt_seed;
  const mspadam::OptimizationResult result = mspadam::optimize(model, cfg, threads);
  const analytic::MetricsReport rep =
      analytic::evaluate(result.q_star, model, weights);
  perf << axis_value << ",mspadam," << fmt(result.objective) << ','
       << fmt(rep.network_aoi) << ',' << fmt(rep.network_ee) << ','
       << fmt(mspadam::contention_reduction(result.q_star, q_round)) << '\n';
  if (policies)
    for (int i = 0; i < model.n; ++i)
      *policies << axis_value << ',' << i + 1 << ',' << fmt(result.q_star[i])
                << '\n';

  for (const mspadam::BaselineKind kind :
       {mspadam::BaselineKind::random, mspadam::BaselineKind::homogeneous_age,
        mspadam::BaselineKind::homogeneous_ee,
        mspadam::BaselineKind::homogeneous_pareto}) {
    const mspadam::BaselineResult b =
        mspadam::baseline(model, kind, weights, random_seed);
    perf << axis_value << ',' << mspadam::baseline_name(kind) << ','
         << fmt(b.metrics.objective) << ',' << fmt(b.metrics.network_aoi) << ','
         << fmt(b.metrics.network_ee) << ','
         << fmt(mspadam::contention_reduction(b.policy, q_round)) << '\n';
  }
}

void reproduce_fig7(const RunOptions& opt) {
  const std::uint64_t seed = opt.seed ? *opt.seed : 0;
  const fs::path dir = prepare_dir(opt);
  ExperimentSpec manifest_spec = fig_base_spec(20, seed);
  manifest_spec.raw.emplace_back("sensors", "4 8 12 16 20");
  manifest_spec.raw.emplace_back("offdiagonal_range", "[0,0.5]");
  write_manifest(dir, "reproduce fig7", manifest_spec, opt, {});

  std::ofstream perf = open_out(dir, "fig7_performance.csv");
  write_performance_header(perf, "n");
  std::ofstream pol = open_out(dir, "fig7_policies.csv");
  pol << "n,sensor,q\n";

  const int ns[] = {4, 8, 12, 16, 20};
  for (int idx = 0; idx < 5; ++idx) {
    const int n = ns[idx];
    const NetworkModel model =
        fig_model(n, 0.0, 0.5, derive_seed(seed, 20 + static_cast<std::uint64_t>(idx)));
    save_correlation(model.correlation,
                     (dir / ("fig7_C_n" + std::to_string(n) + ".txt")).string());
    performance_rows(perf, &pol, std::to_string(n), model, {0.1, 1.0},
                     derive_seed(seed, 40 + static_cast<std::uint64_t>(idx)),
                     derive_seed(seed, 60 + static_cast<std::uint64_t>(idx)),
                     1e-3, opt.threads);
    if (opt.verbose) std::cout << "fig7: finished n=" << n << "\n";
  }
  std::cout << "reproduce fig7: artifacts in " << dir.string() << "\n";
}

void reproduce_fig8(const RunOptions& opt, bool policies_only) {
  const std::uint64_t seed = opt.seed ? *opt.seed : 0;
  const fs::path dir = prepare_dir(opt);
  const char* name = policies_only ? "table3" : "fig8";
  ExperimentSpec manifest_spec = fig_base_spec(10, seed);
  manifest_spec.raw.emplace_back("offdiagonal_values", "0 0.2 0.4 0.6 0.8");
  manifest_spec.raw.emplace_back("offdiagonal_density", "1");
  write_manifest(dir, std::string("reproduce ") + name, manifest_spec, opt, {});

  std::optional<std::ofstream> perf;
  if (!policies_only) {
    perf.emplace(open_out(dir, "fig8_performance.csv"));
    write_performance_header(*perf, "c");
  }
  std::ofstream pol =
      open_out(dir, policies_only ? "table3.csv" : "fig8_policies.csv");
  pol << "c,sensor,q\n";

  const double cs[] = {0.0, 0.2, 0.4, 0.6, 0.8};
  for (int idx = 0; idx < 5; ++idx) {
    NetworkModel model;
    model.n = 10;
    model.aoi_cap = 20;
    model.power = {100.0, 1.0, 1e6};
    model.correlation = CorrelationMatrix::constant(10, 1.0, cs[idx]);
    const std::uint64_t opt_seed = derive_seed(seed, 80 + static_cast<std::uint64_t>(idx));
    if (perf) {
      performance_rows(*perf, &pol, fmt(cs[idx]), model, {0.1, 1.0}, opt_seed,
                       derive_seed(seed, 90 + static_cast<std::uint64_t>(idx)),
                       1e-3, opt.threads);
    } else {
      mspadam::OptimizerConfig cfg;
      cfg.weights = {0.1, 1.0};
      cfg.seed = opt_seed;
      const mspadam::OptimizationResult result =
          mspadam::optimize(model, cfg, opt.threads);
      for (int i = 0; i < model.n; ++i)
        pol << fmt(cs[idx]) << ',' << i + 1 << ',' << fmt(result.q_star[i]) << '\n';
    }
    if (opt.verbose) std::cout << name << ": finished c=" << fmt(cs[idx]) << "\n";
  }
  std::cout << "reproduce " << name << ": artifacts in " << dir.string() << "\n";
}

}  // namespace

void run_reproduce(const std::string& target, const RunOptions& opt) {
  if (target == "fig5") reproduce_fig5_fig6(opt, false);
  else if (target == "fig6") reproduce_fig5_fig6(opt, true);
  else if (target == "fig7") reproduce_fig7(opt);
  else if (target == "fig8") reproduce_fig8(opt, false);
  else if (target == "table3") reproduce_fig8(opt, true);
  else
    throw ConfigError("unknown reproduction target '" + target +
                      "'; expected fig5, fig6, fig7, fig8 or table3");
}

}  // namespace aoinet::exp
