#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "closefn/certificates.hpp"
#include "closefn/checks.hpp"
#include "closefn/erm.hpp"
#include "closefn/localization.hpp"
#include "closefn/online.hpp"
#include "closefn/oracle.hpp"
#include "closefn/report.hpp"
#include "closefn/serialize.hpp"

namespace closefn {

struct RunConfig {
  std::string command;
  std::filesystem::path input_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = "out";
  std::optional<std::vector<std::size_t>> grid_override;
  bool quiet = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitOperational = 1;
inline constexpr int kExitViolation = 2;

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> c = {"certify", "oracle", "sublevel-check", "calculus-check",
                                             "erm",     "online", "localize"};
  return c;
}

// Outcome of a command: the report to write and whether the mathematics
// checked out.
struct CommandResult {
  Report report;
  bool ok = true;
  std::string failure;
};

namespace cli_detail {

inline std::string bool_cell(bool b) { return b ? "1" : "0"; }

inline std::uint64_t effective_seed(const RunConfig& rc, const Json& cfg) {
  if (rc.seed) return *rc.seed;
  if (cfg.contains("seed")) {
    try {
      return cfg.at("seed").get<std::uint64_t>();
    } catch (const Json::exception& e) {
      fail(ErrorCode::ConfigError, std::string("seed: ") + e.what());
    }
  }
  return 42;
}

inline std::vector<std::size_t> parse_counts(const Json& j) {
  require(j.is_array(), ErrorCode::ConfigError, "grid must be an array of counts");
  std::vector<std::size_t> c;
  for (const auto& e : j) {
    require(e.is_number_unsigned(), ErrorCode::ConfigError, "grid counts must be positive integers");
    c.push_back(e.get<std::size_t>());
  }
  return c;
}

// Grid from, in order of precedence, --grid, the config's "grid" entry,
// or the per-dimension default. A single count applies to every axis.
inline Grid make_grid(const BoxDomain& dom, const RunConfig& rc, const Json& cfg) {
  std::optional<std::vector<std::size_t>> counts = rc.grid_override;
  if (!counts && cfg.is_object() && cfg.contains("grid")) counts = parse_counts(cfg.at("grid"));
  if (!counts) return Grid::make_default(dom);
  try {
    if (counts->size() == 1 && dom.dim() > 1) return Grid::make_uniform(dom, counts->front());
    return Grid(dom, *counts);
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, std::string("grid: ") + e.what());
  }
}

inline FunctionSpec load_function(const Json& cfg, const char* key) {
  return function_from_json(field(cfg, key));
}

inline std::vector<double> eps_list(const Json& cfg, std::vector<double> fallback) {
  if (!cfg.contains("epsilons")) return fallback;
  return parse_real_vector(cfg.at("epsilons"), "epsilons");
}

inline Json closeness_json(const Closeness& c) {
  Json detail = Json::object();
  for (const auto& [k, v] : c.detail) detail[k] = v;
  return {{"epsilon", c.epsilon}, {"delta", c.delta}, {"rule", std::string(to_string(c.provenance))},
          {"detail", detail}};
}

// ---- commands ---------------------------------------------------------------

inline CommandResult certify(const RunConfig& rc, const Json& cfg) {
  const FunctionSpec f = load_function(cfg, "f");
  const FunctionSpec g = load_function(cfg, "g");
  require(f.domain() == g.domain(), ErrorCode::ConfigError, "f and g must share a domain");
  const Grid grid = make_grid(f.domain(), rc, cfg);
  const GapProfile pf = gap_profile(f, grid), pg = gap_profile(g, grid);

  CommandResult res;
  CsvTable table(csv_columns().at("certify/results.csv"));
  Json certs = Json::array();
  for (const auto& o : all_certificates(f, g, grid)) {
    if (!o.certificate) {
      table.add_row({std::string(to_string(o.rule)), "0", "", "", "", "", o.reason});
      continue;
    }
    const Closeness& c = *o.certificate;
    const double od = min_delta(pf, pg, c.epsilon);
    const bool sound = dominates(c.delta, od);
    if (!sound) {
      res.ok = false;
      res.failure = std::string(to_string(o.rule)) + " certificate is below the oracle delta";
    }
    table.add_row({std::string(to_string(o.rule)), "1", format_real(c.epsilon), format_real(c.delta),
                   format_real(od), bool_cell(sound), ""});
    Json cj = closeness_json(c);
    cj["oracle_delta"] = od;
    certs.push_back(cj);
  }
  Json summary = {{"command", "certify"}, {"grid_size", grid.size()}, {"certificates", certs}};
  if (cfg.contains("claim")) {
    const double ce = parse_real(field(cfg.at("claim"), "epsilon", "claim"), "claim epsilon");
    const double cd = parse_real(field(cfg.at("claim"), "delta", "claim"), "claim delta");
    const double od = min_delta(pf, pg, ce);
    const bool holds = od <= cd;
    summary["claim"] = {{"epsilon", ce}, {"delta", cd}, {"oracle_delta", od}, {"holds", holds}};
    if (!holds) {
      res.ok = false;
      res.failure = "claimed closeness fails on the grid";
    }
  }
  res.report.tables.emplace("results.csv", std::move(table));
  res.report.summary = std::move(summary);
  return res;
}

inline CommandResult oracle(const RunConfig& rc, const Json& cfg) {
  const FunctionSpec f = load_function(cfg, "f");
  const FunctionSpec g = load_function(cfg, "g");
  require(f.domain() == g.domain(), ErrorCode::ConfigError, "f and g must share a domain");
  const Grid grid = make_grid(f.domain(), rc, cfg);
  const auto curve = delta_curve(f, g, eps_list(cfg, {0.0, std::log(2.0), std::log(4.0)}), grid);
  CommandResult res;
  CsvTable table(csv_columns().at("oracle/results.csv"));
  Json pts = Json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    table.add_row({format_real(curve[i].epsilon), format_real(curve[i].delta)});
    pts.push_back({{"epsilon", curve[i].epsilon}, {"delta", curve[i].delta}});
    if (i > 0 && curve[i].delta > curve[i - 1].delta) {
      res.ok = false;
      res.failure = "delta curve increases with epsilon";
    }
  }
  res.report.tables.emplace("results.csv", std::move(table));
  res.report.summary = {{"command", "oracle"}, {"grid_size", grid.size()}, {"curve", pts}};
  return res;
}

inline CommandResult sublevel_check(const RunConfig& rc, const Json& cfg) {
  const FunctionSpec f = load_function(cfg, "f");
  const FunctionSpec g = load_function(cfg, "g");
  require(f.domain() == g.domain(), ErrorCode::ConfigError, "f and g must share a domain");
  const Grid grid = make_grid(f.domain(), rc, cfg);
  const GapProfile pf = gap_profile(f, grid), pg = gap_profile(g, grid);

  std::vector<std::pair<double, double>> probes;
  if (cfg.contains("probes")) {
    for (const auto& p : cfg.at("probes"))
      probes.emplace_back(parse_real(field(p, "epsilon", "probe"), "probe epsilon"),
                          parse_real(field(p, "delta", "probe"), "probe delta"));
  } else {
    for (double e : {0.0, 0.5, std::log(2.0), 1.0}) {
      const double d = min_delta(pf, pg, e);
      if (d > 0.0) probes.emplace_back(e, 0.9 * d);
      probes.emplace_back(e, 1.1 * d + 1e-3);
    }
  }
  const auto levels = full_t_sweep(pf, pg);
  CommandResult res;
  CsvTable table(csv_columns().at("sublevel-check/results.csv"));
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto [e, d] = probes[i];
    const ClosenessCheck def = check_closeness(pf, pg, e, d);
    const bool sub = sublevel_inclusion_check(pf, pg, e, d, levels);
    if (def.holds != sub) ++disagreements;
    table.add_row({std::to_string(i), format_real(e), format_real(d), bool_cell(def.holds), bool_cell(sub),
                   format_real(def.worst_margin)});
  }
  if (disagreements) {
    res.ok = false;
    res.failure = std::to_string(disagreements) + " probes where the two characterizations disagree";
  }
  res.report.tables.emplace("results.csv", std::move(table));
  res.report.summary = {{"command", "sublevel-check"},
                        {"grid_size", grid.size()},
                        {"t_levels", levels.size()},
                        {"probes", probes.size()},
                        {"disagreements", disagreements}};
  return res;
}

inline CommandResult calculus_check(const RunConfig& rc, const Json& cfg) {
  const BoxDomain dom = cfg.contains("domain") ? domain_from_json(cfg.at("domain")) : BoxDomain::interval(-1.0, 1.0);
  const Grid grid = make_grid(dom, rc, cfg);
  const std::size_t trials = cfg.value("trials", std::size_t{100});
  FamilyMix mix = default_family_mix();
  if (cfg.contains("family_mix")) {
    mix.clear();
    for (const auto& [k, v] : cfg.at("family_mix").items()) mix[k] = parse_real(v, "family_mix");
  }
  const std::uint64_t seed = effective_seed(rc, cfg);
  const auto rows = calculus_trials(seed, trials, dom, grid, mix);
  CommandResult res;
  CsvTable table(csv_columns().at("calculus-check/results.csv"));
  std::size_t violations = 0;
  for (const auto& r : rows) {
    if (!r.holds) ++violations;
    table.add_row({std::to_string(r.trial), std::string(to_string(r.rule)), format_real(r.epsilon),
                   format_real(r.delta), format_real(r.oracle_delta), bool_cell(r.holds)});
  }
  if (violations) {
    res.ok = false;
    res.failure = std::to_string(violations) + " calculus rule violations";
  }
  res.report.tables.emplace("results.csv", std::move(table));
  res.report.summary = {{"command", "calculus-check"}, {"seed", seed},       {"trials", trials},
                        {"checks", rows.size()},       {"violations", violations}};
  return res;
}

inline Distribution distribution_from_json(const Json& j) {
  Distribution d;
  const std::string kind = field(j, "kind", "distribution").get<std::string>();
  if (kind == "discrete") {
    d.kind = Distribution::Kind::discrete;
    d.atoms = parse_real_matrix(field(j, "atoms", "distribution"), "atoms");
    d.probs = parse_real_vector(field(j, "probs", "distribution"), "probs");
  } else if (kind == "truncated_gaussian") {
    d.kind = Distribution::Kind::truncated_gaussian;
    d.mean = parse_real_vector(field(j, "mean", "distribution"), "mean");
    d.sd = parse_real_vector(field(j, "sd", "distribution"), "sd");
    d.trunc_lower = parse_real_vector(field(j, "lower", "distribution"), "lower");
    d.trunc_upper = parse_real_vector(field(j, "upper", "distribution"), "upper");
    d.table_size = j.value("table_size", std::size_t{10000});
  } else {
    fail(ErrorCode::ConfigError, "unknown distribution kind '" + kind + "'");
  }
  return d;
}

inline ERMConfig erm_config_from_json(const Json& j, std::uint64_t seed, const RunConfig& rc) {
  const std::string loss = field(j, "loss", "experiment").get<std::string>();
  require(loss == "squared" || loss == "absolute", ErrorCode::ConfigError, "loss must be squared or absolute");
  const LossKind kind = loss == "squared" ? LossKind::squared : LossKind::absolute;
  ERMConfig cfg = default_erm_config(kind);
  cfg.seed = seed;
  const BoxDomain dom = j.contains("domain") ? domain_from_json(j.at("domain")) : cfg.grid.domain();
  cfg.grid = make_grid(dom, rc, j);
  if (j.contains("distribution")) cfg.distribution = distribution_from_json(j.at("distribution"));
  if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<std::size_t>>();
  if (j.contains("replications")) cfg.replications = j.at("replications").get<std::size_t>();
  if (j.contains("epsilon_report")) cfg.epsilon_report = parse_real(j.at("epsilon_report"), "epsilon_report");
  return cfg;
}

inline CommandResult erm(const RunConfig& rc, const Json& cfg) {
  const std::uint64_t seed = effective_seed(rc, cfg);
  CommandResult res;
  CsvTable records(csv_columns().at("erm/results.csv"));
  CsvTable rates(csv_columns().at("erm/rates.csv"));
  Json experiments = Json::array();
  for (const auto& ej : field(cfg, "experiments")) {
    const std::string name = field(ej, "name", "experiment").get<std::string>();
    const ERMConfig ec = [&] {
      try {
        return erm_config_from_json(ej, seed, rc);
      } catch (const Json::exception& e) {
        fail(ErrorCode::ConfigError, "experiment '" + name + "': " + e.what());
      }
    }();
    const RateResult rr = rate_experiment(ec);
    const BoundCheck bc = excess_risk_bound_check(ec, rr);
    for (const auto& r : rr.records)
      records.add_row({name, std::to_string(r.n), std::to_string(r.replication), std::to_string(r.seed),
                       format_real(r.delta_hat), format_real(r.excess_risk)});
    for (const auto& p : rr.per_n)
      rates.add_row({name, std::to_string(p.n), format_real(p.mean_delta), format_real(p.stderr_delta),
                     format_real(p.median_delta), format_real(p.q90_delta), format_real(p.mean_excess)});
    experiments.push_back({{"name", name},
                           {"loss", std::string(to_string(ec.loss_kind))},
                           {"epsilon_report", ec.epsilon_report},
                           {"replications", ec.replications},
                           {"slope", rr.slope},
                           {"intercept", rr.intercept},
                           {"bound_checked", bc.checked},
                           {"bound_violations", bc.violations}});
    if (!bc.holds) {
      res.ok = false;
      res.failure = "excess risk bound violated in experiment '" + name + "'";
    }
  }
  res.report.tables.emplace("results.csv", std::move(records));
  res.report.tables.emplace("rates.csv", std::move(rates));
  res.report.summary = {{"command", "erm"}, {"seed", seed}, {"experiments", experiments}};
  return res;
}

inline OnlineSequenceSpec sequence_spec_from_json(const Json& j) {
  OnlineSequenceSpec s;
  try {
    const std::string kind = field(j, "kind", "scenario").get<std::string>();
    if (kind == "drift") s.kind = SequenceKind::drift;
    else if (kind == "shift") s.kind = SequenceKind::shift;
    else if (kind == "scale") s.kind = SequenceKind::scale;
    else fail(ErrorCode::ConfigError, "unknown scenario kind '" + kind + "'");
    s.T = j.value("T", s.T);
    s.base_family = j.value("base_family", s.base_family);
    if (j.contains("domain")) s.domain = domain_from_json(j.at("domain"));
    if (j.contains("curvature")) s.curvature = parse_real(j.at("curvature"), "curvature");
    if (j.contains("tau")) s.tau = parse_real(j.at("tau"), "tau");
    if (j.contains("slope")) s.slope = parse_real(j.at("slope"), "slope");
    if (j.contains("start")) s.start = parse_real_vector(j.at("start"), "start");
    if (j.contains("drift_step")) s.drift_step = parse_real_vector(j.at("drift_step"), "drift_step");
    s.shift_time = j.value("shift_time", s.shift_time);
    if (j.contains("shift_to")) s.shift_to = parse_real_vector(j.at("shift_to"), "shift_to");
    if (j.contains("scale_amplitude")) s.scale_amplitude = parse_real(j.at("scale_amplitude"), "scale_amplitude");
    if (j.contains("scale_period")) s.scale_period = parse_real(j.at("scale_period"), "scale_period");
  } catch (const Json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("scenario: ") + e.what());
  }
  return s;
}

inline std::string join_point(const std::vector<double>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + format_real(p[i]);
  return s;
}

inline CommandResult online(const RunConfig& rc, const Json& cfg) {
  const OnlineSequenceSpec spec = sequence_spec_from_json(field(cfg, "scenario"));
  const auto seq = build_sequence(spec);
  const Grid grid = make_grid(spec.domain, rc, cfg);
  const double eps = cfg.contains("eps_for_oracle") ? parse_real(cfg.at("eps_for_oracle"), "eps_for_oracle") : 0.0;
  const VariationTable vt = variation_table(seq, eps, grid);

  CommandResult res;
  CsvTable table(csv_columns().at("online/results.csv"));
  Json detail = Json::array();
  for (const auto& r : vt.rows) {
    table.add_row({std::to_string(r.t), format_real(r.sup_metric), format_real(r.grad_metric),
                   format_real(r.min_metric), format_real(r.cert_sup_delta), format_real(r.cert_grad_delta),
                   format_real(r.cert_min_delta), format_real(r.oracle_delta)});
    Json d = {{"t", r.t},
              {"cert_sup_centered_delta", r.cert_sup_centered_delta},
              {"oracle_delta_eps0", r.oracle_delta_eps0},
              {"note", r.note}};
    if (r.cert_min_epsilon) d["cert_min_epsilon"] = *r.cert_min_epsilon;
    if (r.oracle_delta_min_eps) d["oracle_delta_min_eps"] = *r.oracle_delta_min_eps;
    detail.push_back(d);
  }
  const std::size_t violations = certificate_violations(vt);
  if (violations) {
    res.ok = false;
    res.failure = std::to_string(violations) + " certificate cells below the oracle delta";
  }
  const auto& t = vt.totals;
  Json summary = {{"command", "online"},
                  {"scenario", std::string(to_string(spec.kind))},
                  {"T", spec.T},
                  {"eps_for_oracle", eps},
                  {"certificate_violations", violations},
                  {"totals",
                   {{"sup_metric", t.sup_metric},
                    {"grad_metric", t.grad_metric},
                    {"min_metric", t.min_metric},
                    {"cert_sup_delta", t.cert_sup_delta},
                    {"cert_grad_delta", t.cert_grad_delta},
                    {"cert_min_delta", t.cert_min_delta},
                    {"oracle_delta", t.oracle_delta}}},
                  {"rows", detail}};

  if (cfg.contains("learner")) {
    const Json& lj = cfg.at("learner");
    const double le = parse_real(field(lj, "epsilon", "learner"), "learner epsilon");
    const double thr = parse_real(field(lj, "delta_threshold", "learner"), "delta_threshold");
    const LearnerResult lr = restart_learner(seq, le, thr, grid);
    CsvTable traj(csv_columns().at("online/trajectory.csv"));
    std::vector<std::size_t> restart_times;
    for (const auto& s : lr.steps) {
      traj.add_row({std::to_string(s.t), join_point(s.theta), format_real(s.excess), bool_cell(s.restarted)});
      if (s.restarted) restart_times.push_back(s.t);
    }
    res.report.tables.emplace("trajectory.csv", std::move(traj));
    summary["learner"] = {{"epsilon", le},
                          {"delta_threshold", std::isfinite(thr) ? Json(thr) : Json("inf")},
                          {"restarts", lr.restarts},
                          {"restart_times", restart_times},
                          {"cumulative_excess", lr.cumulative_excess}};
  }
  res.report.tables.emplace("results.csv", std::move(table));
  res.report.summary = std::move(summary);
  return res;
}

inline CommandResult localize(const RunConfig& rc, const Json& cfg) {
  const FiniteClassProblem p = problem_from_json(cfg.contains("problem") ? cfg.at("problem") : cfg);
  const std::size_t reps = cfg.value("replications", std::size_t{500});
  const std::size_t draws = cfg.value("mc_draws", std::size_t{200});
  const std::uint64_t seed = effective_seed(rc, cfg);
  const LocalizationResult r = validate_proposition(p, reps, seed, draws);

  CommandResult res;
  CsvTable table(csv_columns().at("localize/results.csv"));
  const auto& env = r.psi.envelope;
  for (std::size_t k = 0; k < env.r_grid().size(); ++k)
    table.add_row({format_real(env.r_grid()[k]), format_real(r.psi.raw[k]), format_real(env.psi_values()[k])});
  res.report.tables.emplace("results.csv", std::move(table));
  Json summary = localization_to_json(p, r);
  summary["command"] = "localize";
  summary["seed"] = seed;
  summary["mc_draws"] = draws;
  res.report.summary = std::move(summary);
  if (r.mc_failure_rate > p.gamma) {
    res.ok = false;
    res.failure = "empirical failure rate exceeds gamma";
  } else if (!r.fixed_point.no_root && std::abs(r.fixed_point.residual) > 1e-8 * (1.0 + r.r_star)) {
    res.ok = false;
    res.failure = "fixed point residual too large";
  } else if (!env.is_nondecreasing() || !env.ratio_nonincreasing()) {
    res.ok = false;
    res.failure = "envelope is not sub-root";
  }
  return res;
}

inline CommandResult dispatch(const RunConfig& rc, const Json& cfg) {
  if (rc.command == "certify") return certify(rc, cfg);
  if (rc.command == "oracle") return oracle(rc, cfg);
  if (rc.command == "sublevel-check") return sublevel_check(rc, cfg);
  if (rc.command == "calculus-check") return calculus_check(rc, cfg);
  if (rc.command == "erm") return erm(rc, cfg);
  if (rc.command == "online") return online(rc, cfg);
  if (rc.command == "localize") return localize(rc, cfg);
  fail(ErrorCode::ConfigError, "unknown command '" + rc.command + "'");
}

inline bool is_violation(ErrorCode c) {
  return c == ErrorCode::NoiseViolation || c == ErrorCode::WeakeningViolation;
}

}  // namespace cli_detail

// Runs one command and writes results.csv / summary.json / manifest.json
// into out_dir. Exit codes: 0 success, 2 a mathematical check failed,
// 1 operational or configuration error.
inline int run(const RunConfig& rc, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    const auto& cmds = cli_commands();
    require(std::find(cmds.begin(), cmds.end(), rc.command) != cmds.end(), ErrorCode::ConfigError,
            "unknown command '" + rc.command + "'");
    const Json cfg = rc.input_path.empty() ? Json::object() : read_json(rc.input_path);
    require(cfg.is_object(), ErrorCode::ConfigError, "config must be a JSON object");
    CommandResult res = cli_detail::dispatch(rc, cfg);
    res.report.summary["ok"] = res.ok;
    if (!res.ok) res.report.summary["failure"] = res.failure;
    emit_report(res.report, rc.out_dir);
    if (!res.ok) {
      err << "ERROR:ValidationFailed:" << res.failure << "\n";
      return kExitViolation;
    }
    if (!rc.quiet) out << rc.command << ": ok, results in " << rc.out_dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "ERROR:" << to_string(e.code()) << ":" << e.what() << "\n";
    return cli_detail::is_violation(e.code()) ? kExitViolation : kExitOperational;
  } catch (const Json::exception& e) {
    err << "ERROR:ConfigError:" << e.what() << "\n";
    return kExitOperational;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "ERROR:IoError:" << e.what() << "\n";
    return kExitOperational;
  } catch (const std::exception& e) {
    err << "ERROR:InvalidArgument:" << e.what() << "\n";
    return kExitOperational;
  }
}

}  // namespace closefn
