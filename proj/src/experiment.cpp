#include "arlda/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "arlda/problems.hpp"

namespace arlda {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int log_level() {
  const char* env = std::getenv("ARLDA_LOG");
  if (!env) return 1;
  std::string s(env);
  if (s == "quiet" || s == "0") return 0;
  if (s == "debug" || s == "2") return 2;
  return 1;
}

std::string sibling_json_path(const std::string& out) {
  auto dot = out.find_last_of('.');
  auto slash = out.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out + ".json";
  return out.substr(0, dot) + ".json";
}

std::unique_ptr<Oracle> make_oracle(const ExperimentConfig& cfg, const ProblemSpec& spec) {
  if (cfg.oracle == "exact") return std::make_unique<ExactOracle>(spec, cfg.floors);
  if (cfg.oracle == "noise") {
    NoiseMode mode = cfg.noise_mode == "uniform" ? NoiseMode::uniform : NoiseMode::adversarial;
    return std::make_unique<AdditiveNoiseOracle>(spec, cfg.seed, mode, cfg.floors);
  }
  if (cfg.oracle == "series")
    return std::make_unique<TruncatedSeriesOracle>(spec, cfg.amplitude, cfg.floors);
  if (cfg.oracle == "partial")
    return std::make_unique<PartialSumOracle>(spec, cfg.summands, cfg.amplitude, cfg.floors);
  throw std::invalid_argument("unknown oracle '" + cfg.oracle +
                              "' (expected exact|noise|series|partial)");
}

AlgoConstants constants_for(const ExperimentConfig& cfg, double epsilon) {
  AlgoConstants k;
  k.epsilon = epsilon;
  k.sigma0 = cfg.sigma0;
  k.max_iterations = cfg.max_iters;
  k.monotonic = cfg.monotonic;
  return k;
}

SubproblemOptions subproblem_options(const ExperimentConfig& cfg) {
  SubproblemOptions o;
  o.gap_tol = cfg.gap_tol;
  o.max_iter = cfg.sub_max_iter;
  return o;
}

SuiteProblem problem_for(const ExperimentConfig& cfg) {
  std::optional<OuterFunction> h;
  if (cfg.h_kind) h = OuterFunction{outer_kind_from_string(*cfg.h_kind), cfg.h_weight};
  return make_problem(cfg.problem, h);
}

ordered_json constants_json(const AlgoConstants& k) {
  ordered_json j;
  j["eta1"] = k.eta1;
  j["eta2"] = k.eta2;
  j["gamma1"] = k.gamma1;
  j["gamma2"] = k.gamma2;
  j["gamma3"] = k.gamma3;
  j["alpha"] = k.alpha;
  j["kappa_omega"] = k.kappa_omega;
  j["gamma_eps"] = k.gamma_eps;
  j["sigma0"] = k.sigma0;
  j["sigma_min"] = k.sigma_min;
  j["eps_f_max"] = k.eps_f_max;
  j["eps_g_max"] = k.eps_g_max;
  j["eps_c_max"] = k.eps_c_max;
  j["eps_J_max"] = k.eps_J_max;
  j["epsilon"] = k.epsilon;
  j["max_iterations"] = k.max_iterations;
  j["monotonic"] = k.monotonic;
  return j;
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["problem"] = c.problem;
  if (c.h_kind) j["h"] = *c.h_kind;
  j["h_weight"] = c.h_weight;
  j["oracle"] = c.oracle;
  j["seed"] = c.seed;
  j["noise_mode"] = c.noise_mode;
  j["floor_f"] = c.floors.f;
  j["floor_g"] = c.floors.g;
  j["floor_c"] = c.floors.c;
  j["floor_J"] = c.floors.J;
  j["epsilon"] = c.epsilons;
  j["monotonic"] = c.monotonic;
  j["max_iters"] = c.max_iters;
  j["sigma0"] = c.sigma0;
  j["summands"] = c.summands;
  j["amplitude"] = c.amplitude;
  j["gap_tol"] = c.gap_tol;
  j["sub_max_iter"] = c.sub_max_iter;
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

ordered_json report_json(const TerminationReport& rep) {
  ordered_json j;
  j["status"] = to_string(rep.status);
  j["stall"] = to_string(rep.stall);
  j["iterations"] = rep.iterations;
  j["phi_bar"] = rep.phi_bar;
  j["phi_conservative"] = rep.phi_conservative;
  j["noisy_bound"] = rep.noisy_bound;
  j["psi_bar"] = rep.psi_bar;
  std::vector<double> x(rep.x.data(), rep.x.data() + rep.x.size());
  j["x"] = x;
  ordered_json led;
  led["nf"] = rep.ledger.total_f;
  led["ng"] = rep.ledger.total_g;
  led["nc"] = rep.ledger.total_c;
  led["nJ"] = rep.ledger.total_J;
  led["min_eps_f"] = rep.ledger.min_eps_f;
  led["min_eps_g"] = rep.ledger.min_eps_g;
  led["min_eps_c"] = rep.ledger.min_eps_c;
  led["min_eps_J"] = rep.ledger.min_eps_J;
  led["shrink_events"] = rep.ledger.shrink_events;
  led["successful"] = rep.ledger.successful;
  led["unsuccessful"] = rep.ledger.unsuccessful;
  j["ledger"] = led;
  ordered_json a;
  a["sigma_max"] = rep.audits.sigma_max ? ordered_json(*rep.audits.sigma_max) : ordered_json();
  a["sigma_within_bound"] = rep.audits.sigma_within_bound;
  a["tau"] = rep.audits.tau ? ordered_json(*rep.audits.tau) : ordered_json();
  a["iterations_within_tau"] = rep.audits.iterations_within_tau;
  a["shrinks_within_nu"] = rep.audits.shrinks_within_nu;
  a["f_evals_within_two"] = rep.audits.f_evals_within_two;
  a["nu_total"] = rep.audits.nu_total ? ordered_json(*rep.audits.nu_total) : ordered_json();
  a["monotonic_shrinks_ok"] = rep.audits.monotonic_shrinks_ok;
  j["audits"] = a;
  j["warnings"] = rep.warnings;
  return j;
}

bool write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

void ExperimentConfig::validate() const {
  auto ids = problem_ids();
  bool known = false;
  for (const auto& id : ids) known |= id == problem;
  if (!known) throw std::invalid_argument("unknown problem id '" + problem + "'");
  if (h_kind) outer_kind_from_string(*h_kind);  // throws on unknown kind
  if (h_weight <= 0.0) throw std::invalid_argument("h weight must be positive");
  if (oracle != "exact" && oracle != "noise" && oracle != "series" && oracle != "partial")
    throw std::invalid_argument("unknown oracle '" + oracle + "'");
  if (noise_mode != "adversarial" && noise_mode != "uniform")
    throw std::invalid_argument("noise mode must be adversarial or uniform");
  if (epsilons.empty()) throw std::invalid_argument("at least one epsilon is required");
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0))
      throw std::invalid_argument("epsilon must lie in (0,1), got " + fmt17(e));
  if (floors.f < 0 || floors.g < 0 || floors.c < 0 || floors.J < 0)
    throw std::invalid_argument("accuracy floors must be nonnegative");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("format must be csv or json");
  if (max_iters < 1) throw std::invalid_argument("max-iters must be positive");
  if (sigma0 <= 0.0) throw std::invalid_argument("sigma0 must be positive");
  if (summands < 2) throw std::invalid_argument("summands must be at least 2");
  if (amplitude <= 0.0) throw std::invalid_argument("amplitude must be positive");
  if (gap_tol <= 0.0) throw std::invalid_argument("gap-tol must be positive");
  if (sub_max_iter < 1) throw std::invalid_argument("sub-max-iter must be positive");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  ordered_json j;
  in >> j;
  ExperimentConfig c;
  auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("problem", c.problem);
  if (j.contains("h")) c.h_kind = j.at("h").get<std::string>();
  get("h_weight", c.h_weight);
  get("oracle", c.oracle);
  get("seed", c.seed);
  get("noise_mode", c.noise_mode);
  get("floor_f", c.floors.f);
  get("floor_g", c.floors.g);
  get("floor_c", c.floors.c);
  get("floor_J", c.floors.J);
  if (j.contains("epsilon")) {
    if (j.at("epsilon").is_array())
      c.epsilons = j.at("epsilon").get<std::vector<double>>();
    else
      c.epsilons = {j.at("epsilon").get<double>()};
  }
  get("monotonic", c.monotonic);
  get("max_iters", c.max_iters);
  get("sigma0", c.sigma0);
  get("summands", c.summands);
  get("amplitude", c.amplitude);
  get("gap_tol", c.gap_tol);
  get("sub_max_iter", c.sub_max_iter);
  get("out", c.out);
  get("format", c.format);
  return c;
}

int status_exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Exit1:
    case SolveStatus::Exit2: return 0;
    case SolveStatus::MaxIterations: return 3;
    case SolveStatus::AccuracyStalled:
    case SolveStatus::TargetUnreachable: return 2;
  }
  return 1;
}

std::string run_csv_text(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  out << "k,sigma,omega,eps_f,eps_g,eps_c,eps_J,phibar,dellbar,snorm,rho,accepted,shrinks,"
         "nf,ng,nc,nJ\n";
  for (const auto& r : records) {
    out << r.k << ',' << fmt17(r.sigma) << ',' << fmt17(r.omega) << ',' << fmt17(r.eps_f)
        << ',' << fmt17(r.eps_g) << ',' << fmt17(r.eps_c) << ',' << fmt17(r.eps_J) << ','
        << fmt17(r.phi_bar) << ',' << fmt17(r.lin_decrease) << ',' << fmt17(r.step_norm)
        << ',' << fmt17(r.rho) << ',' << (r.accepted ? 1 : 0) << ',' << r.shrinks << ','
        << r.nf << ',' << r.ng << ',' << r.nc << ',' << r.nJ << '\n';
  }
  return out.str();
}

std::vector<IterationRecord> parse_run_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("run CSV is empty");
  if (line !=
      "k,sigma,omega,eps_f,eps_g,eps_c,eps_J,phibar,dellbar,snorm,rho,accepted,shrinks,"
      "nf,ng,nc,nJ")
    throw std::invalid_argument("run CSV header does not match the schema");

  std::vector<IterationRecord> records;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 17)
      throw std::invalid_argument("run CSV line " + std::to_string(lineno) +
                                  " has the wrong number of fields");
    auto num = [&](size_t i) {
      const std::string& s = cells[i];
      char* end = nullptr;
      double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str())
        throw std::invalid_argument("run CSV line " + std::to_string(lineno) +
                                    ": unparseable number '" + s + "'");
      return v;
    };
    IterationRecord r;
    r.k = static_cast<long>(num(0));
    r.sigma = num(1);
    r.omega = num(2);
    r.eps_f = num(3);
    r.eps_g = num(4);
    r.eps_c = num(5);
    r.eps_J = num(6);
    r.phi_bar = num(7);
    r.lin_decrease = num(8);
    r.step_norm = num(9);
    r.rho = num(10);
    r.accepted = num(11) != 0.0;
    r.shrinks = static_cast<long>(num(12));
    r.nf = static_cast<long>(num(13));
    r.ng = static_cast<long>(num(14));
    r.nc = static_cast<long>(num(15));
    r.nJ = static_cast<long>(num(16));
    records.push_back(r);
  }
  return records;
}

std::string summary_json_text(const ExperimentConfig& config, const AlgoConstants& consts,
                              const TerminationReport& report) {
  ordered_json j;
  j["config"] = config_json(config);
  j["constants"] = constants_json(consts);
  j["result"] = report_json(report);
  return j.dump(2) + "\n";
}

std::string findings_json_text(const std::vector<AuditFinding>& findings) {
  ordered_json arr = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json j;
    j["iteration"] = f.iteration;
    j["check"] = f.check;
    j["bound"] = f.bound;
    j["measured"] = f.measured;
    j["pass"] = f.pass;
    arr.push_back(j);
  }
  ordered_json top;
  top["failures"] = count_failures(findings);
  top["findings"] = arr;
  return top.dump(2) + "\n";
}

int solve_command(const ExperimentConfig& config) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "arlda: configuration error: " << e.what() << "\n";
    return 1;
  }

  SuiteProblem prob = problem_for(config);
  auto oracle = make_oracle(config, prob.spec);
  AlgoConstants consts = constants_for(config, config.epsilons.front());
  std::vector<IterationRecord> records;
  TerminationReport rep;
  try {
    Solver solver(prob.spec, consts, *oracle, subproblem_options(config), true);
    rep = solver.run();
    records = solver.records();
  } catch (const std::exception& e) {
    std::cerr << "arlda: " << e.what() << "\n";
    return 1;
  }

  for (const auto& w : rep.warnings) std::cerr << "arlda: warning: " << w << "\n";
  if (log_level() >= 1)
    std::cerr << "arlda: " << config.problem << " status=" << to_string(rep.status)
              << " iterations=" << rep.iterations << " phibar=" << fmt17(rep.phi_bar) << "\n";
  if (log_level() >= 2)
    for (const auto& r : records)
      std::cerr << "  k=" << r.k << " sigma=" << r.sigma << " phibar=" << r.phi_bar
                << " rho=" << r.rho << " accepted=" << r.accepted << "\n";

  bool ok;
  if (config.format == "csv") {
    ok = write_text_file(config.out, run_csv_text(records));
    ok = ok && write_text_file(sibling_json_path(config.out),
                               summary_json_text(config, consts, rep));
  } else {
    ordered_json j = ordered_json::parse(summary_json_text(config, consts, rep));
    ordered_json iters = ordered_json::array();
    for (const auto& r : records) {
      ordered_json ji;
      ji["k"] = r.k;
      ji["sigma"] = r.sigma;
      ji["omega"] = r.omega;
      ji["eps_f"] = r.eps_f;
      ji["eps_g"] = r.eps_g;
      ji["eps_c"] = r.eps_c;
      ji["eps_J"] = r.eps_J;
      ji["phibar"] = r.phi_bar;
      ji["dellbar"] = r.lin_decrease;
      ji["snorm"] = r.step_norm;
      ji["rho"] = r.rho;
      ji["accepted"] = r.accepted;
      ji["shrinks"] = r.shrinks;
      ji["nf"] = r.nf;
      ji["ng"] = r.ng;
      ji["nc"] = r.nc;
      ji["nJ"] = r.nJ;
      iters.push_back(ji);
    }
    j["iterations_log"] = iters;
    ok = write_text_file(config.out, j.dump(2) + "\n");
  }
  if (!ok) {
    std::cerr << "arlda: cannot write output to '" << config.out << "'\n";
    return 1;
  }
  return status_exit_code(rep.status);
}

SweepReport run_sweep(const ExperimentConfig& config) {
  SweepReport report;
  for (double eps : config.epsilons) {
    ExperimentConfig one = config;
    one.epsilons = {eps};
    SuiteProblem prob = problem_for(one);
    auto oracle = make_oracle(one, prob.spec);
    AlgoConstants consts = constants_for(one, eps);
    Solver solver(prob.spec, consts, *oracle, subproblem_options(one), false);
    TerminationReport rep = solver.run();

    SweepRow row;
    row.epsilon = eps;
    row.status = to_string(rep.status);
    row.iterations = rep.iterations;
    row.successful = rep.ledger.successful;
    row.unsuccessful = rep.ledger.unsuccessful;
    row.nf = rep.ledger.total_f;
    row.ng = rep.ledger.total_g;
    row.nc = rep.ledger.total_c;
    row.nJ = rep.ledger.total_J;
    row.shrink_events = rep.ledger.shrink_events;
    row.phi_bar = rep.phi_bar;
    row.tau = rep.audits.tau;
    row.tau_ok = rep.audits.iterations_within_tau;
    report.all_within_tau &= row.tau_ok;
    report.rows.push_back(row);
  }

  // log-log slope of the successful-iteration count against 1/eps, over the
  // terminated rows only.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (const auto& row : report.rows) {
    if (row.status != "Exit1" && row.status != "Exit2") continue;
    if (row.successful < 1) continue;
    double x = std::log(1.0 / row.epsilon);
    double y = std::log(static_cast<double>(row.successful));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && sxx * n - sx * sx > 0)
    report.slope = (sxy * n - sx * sy) / (sxx * n - sx * sx);
  return report;
}

int sweep_command(const ExperimentConfig& config) {
  try {
    config.validate();
    if (config.epsilons.size() < 3)
      throw std::invalid_argument("a sweep needs at least 3 epsilon values");
  } catch (const std::exception& e) {
    std::cerr << "arlda: configuration error: " << e.what() << "\n";
    return 1;
  }

  SweepReport report = run_sweep(config);

  std::ostringstream csv;
  csv << "eps,status,iters,succ,unsucc,nf,ng,nc,nJ,shrinks,phibar,tau,tau_ok\n";
  for (const auto& r : report.rows) {
    csv << fmt17(r.epsilon) << ',' << r.status << ',' << r.iterations << ',' << r.successful
        << ',' << r.unsuccessful << ',' << r.nf << ',' << r.ng << ',' << r.nc << ',' << r.nJ
        << ',' << r.shrink_events << ',' << fmt17(r.phi_bar) << ','
        << (r.tau ? fmt17(*r.tau) : "nan") << ',' << (r.tau_ok ? 1 : 0) << '\n';
  }

  ordered_json j;
  j["config"] = config_json(config);
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json jr;
    jr["epsilon"] = r.epsilon;
    jr["status"] = r.status;
    jr["iterations"] = r.iterations;
    jr["successful"] = r.successful;
    jr["unsuccessful"] = r.unsuccessful;
    jr["nf"] = r.nf;
    jr["ng"] = r.ng;
    jr["nc"] = r.nc;
    jr["nJ"] = r.nJ;
    jr["shrink_events"] = r.shrink_events;
    jr["phi_bar"] = r.phi_bar;
    jr["tau"] = r.tau ? ordered_json(*r.tau) : ordered_json();
    jr["tau_ok"] = r.tau_ok;
    rows.push_back(jr);
  }
  j["rows"] = rows;
  j["slope"] = report.slope;
  j["all_within_tau"] = report.all_within_tau;

  bool ok;
  if (config.format == "json") {
    ok = write_text_file(config.out, j.dump(2) + "\n");
  } else {
    ok = write_text_file(config.out, csv.str());
    ok = ok && write_text_file(sibling_json_path(config.out), j.dump(2) + "\n");
  }
  if (!ok) {
    std::cerr << "arlda: cannot write output to '" << config.out << "'\n";
    return 1;
  }
  if (log_level() >= 1)
    std::cerr << "arlda: sweep of " << report.rows.size() << " runs, slope=" << report.slope
              << "\n";

  int worst = 0;
  for (const auto& r : report.rows) {
    int code = r.status == "Exit1" || r.status == "Exit2" ? 0
               : r.status == "MaxIterations"              ? 3
                                                          : 2;
    worst = std::max(worst, code);
  }
  return worst;
}

int audit_command(const ExperimentConfig& config, const std::string& run_csv,
                  const std::string& out_path) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "arlda: configuration error: " << e.what() << "\n";
    return 1;
  }

  std::ifstream in(run_csv);
  if (!in) {
    std::cerr << "arlda: cannot open run file '" << run_csv << "'\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::vector<IterationRecord> from_file;
  try {
    from_file = parse_run_csv(buffer.str());
  } catch (const std::exception& e) {
    std::cerr << "arlda: " << e.what() << "\n";
    return 1;
  }

  // Re-run deterministically and audit the replay; also cross-check the file.
  SuiteProblem prob = problem_for(config);
  auto oracle = make_oracle(config, prob.spec);
  AlgoConstants consts = constants_for(config, config.epsilons.front());
  Solver solver(prob.spec, consts, *oracle, subproblem_options(config), true);
  solver.run();

  std::vector<AuditFinding> findings =
      audit_run(prob.spec, consts, solver.records(), solver.audit_samples());

  std::string replay = run_csv_text(solver.records());
  bool matches = replay == buffer.str();
  findings.push_back({-1, "run-file-matches-replay", 0.0, matches ? 0.0 : 1.0, matches});

  if (!write_text_file(out_path, findings_json_text(findings))) {
    std::cerr << "arlda: cannot write findings to '" << out_path << "'\n";
    return 1;
  }
  long failures = count_failures(findings);
  if (log_level() >= 1)
    std::cerr << "arlda: audit of " << run_csv << ": " << findings.size() << " findings, "
              << failures << " failures\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace arlda
