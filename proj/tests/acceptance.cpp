// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "closefn/cli.hpp"
#include "closefn/closefn.hpp"
#include "test_support.hpp"

using namespace closefn;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 42;
const fs::path kConfigs = fs::path(CLOSEFN_SOURCE_DIR) / "configs";

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: no limit
  std::function<Verdict()> body;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Corpus pair k: every fifth pair is two-dimensional, every other pair
// places minimizers near or beyond the boundary.
struct CorpusCase {
  BoxDomain domain;
  Grid grid;
  FunctionSpec f, g;
};

CorpusCase corpus_case(std::uint64_t k, std::size_t grid_1d, std::size_t grid_2d) {
  const bool two = k % 5 == 4;
  const BoxDomain dom = two ? BoxDomain::cube(2, -1.0, 1.0) : BoxDomain::interval(-1.0, 1.0);
  CorpusOptions opt;
  opt.boundary_minimizers = k % 2 == 1;
  auto [f, g] = corpus_pair(kSeed, k, default_family_mix(), dom, opt);
  Grid grid = two ? Grid(dom, {grid_2d, grid_2d}) : Grid(dom, {grid_1d});
  return {dom, std::move(grid), std::move(f), std::move(g)};
}

// ---- 1 ----------------------------------------------------------------------

Verdict example_reproduction() {
  const BoxDomain dom = BoxDomain::interval(-1.0, 1.0);
  const Grid grid = Grid::make_default(dom);
  const double h = grid.cell_width(0);
  Verdict v;
  double worst_slack = -1e300, worst_equal = 0.0, min_sup = 1e300;
  Rng rng(kSeed);
  for (int k = 0; k < 50; ++k) {
    const double a = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
    const auto f = make_scaled_abs(1.0, a, dom), g = make_scaled_abs(2.0, b, dom);
    const double d = min_delta(f, g, std::log(2.0), grid);
    worst_slack = std::max(worst_slack, d - (std::abs(a - b) + 2.0 * h));
    if (d > std::abs(a - b) + 2.0 * h) v.pass = false;

    const auto ga = make_scaled_abs(2.0, a, dom);
    const double de = min_delta(f, ga, std::log(2.0), grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      sup = std::max(sup, std::abs(f.value(grid.point(i)) - ga.value(grid.point(i))));
    worst_equal = std::max(worst_equal, de);
    min_sup = std::min(min_sup, sup);
    if (de > 0.01 || sup < 0.99) v.pass = false;
  }
  v.detail = "max(delta* - |a-b| - 2h) = " + fmt("%.3g", worst_slack) + ", a=b: max delta* = " +
             fmt("%.3g", worst_equal) + ", min sup|f-g| = " + fmt("%.4g", min_sup);
  return v;
}

// ---- 2 ----------------------------------------------------------------------

Verdict certificate_soundness() {
  std::size_t checked = 0, violations = 0, not_applicable = 0;
  double worst = -1e300;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto c = corpus_case(k, 2049, 129);
    const auto pf = gap_profile(c.f, c.grid), pg = gap_profile(c.g, c.grid);
    for (const auto& o : all_certificates(c.f, c.g, c.grid)) {
      if (!o.certificate) {
        ++not_applicable;
        continue;
      }
      const double od = min_delta(pf, pg, o.certificate->epsilon);
      ++checked;
      worst = std::max(worst, od - o.certificate->delta);
      if (!dominates(o.certificate->delta, od)) {
        ++violations;
        std::fprintf(stderr, "  pair %llu rule %s: certificate %.17g < oracle %.17g\n",
                     static_cast<unsigned long long>(k), std::string(to_string(o.rule)).c_str(),
                     o.certificate->delta, od);
      }
    }
  }
  return {violations == 0, std::to_string(checked) + " certificates, " + std::to_string(not_applicable) +
                               " not applicable, " + std::to_string(violations) +
                               " violations, max(oracle - cert) = " + fmt("%.3g", worst)};
}

// ---- 3 ----------------------------------------------------------------------

Verdict sublevel_equivalence() {
  std::size_t probes = 0, feasible = 0, infeasible = 0, disagreements = 0, misclassified = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto c = corpus_case(k, 2049, 65);
    const auto pf = gap_profile(c.f, c.grid), pg = gap_profile(c.g, c.grid);
    const auto levels = full_t_sweep(pf, pg);
    Rng rng(derive_seed(kSeed, {3, k}));
    for (int j = 0; j < 20; ++j) {
      const double eps = rng.uniform(0.0, 1.5);
      const double ds = min_delta(pf, pg, eps);
      const bool want_feasible = j % 2 == 0;
      double delta;
      if (want_feasible || ds == 0.0) {
        // at least a relative 1e-6 above delta*, off the rounding boundary
        delta = ds * (1.0 + 1e-6 + rng.uniform()) + 1e-12;
      } else {
        delta = ds * rng.uniform(0.0, 0.98);
      }
      const bool def = check_closeness(pf, pg, eps, delta).holds;
      const bool sub = sublevel_inclusion_check(pf, pg, eps, delta, levels);
      ++probes;
      (def ? feasible : infeasible) += 1;
      if (def != sub) ++disagreements;
      if (def != (delta >= ds)) ++misclassified;
    }
  }
  return {disagreements == 0 && misclassified == 0,
          std::to_string(probes) + " probes (" + std::to_string(feasible) + " feasible, " +
              std::to_string(infeasible) + " infeasible), " + std::to_string(disagreements) + " disagreements"};
}

// ---- 4 ----------------------------------------------------------------------

Verdict calculus_algebra() {
  const BoxDomain dom = BoxDomain::interval(-1.0, 1.0);
  const Grid grid = Grid::make_default(dom);
  const auto trials = calculus_trials(kSeed, 1000, dom, grid);
  std::map<Rule, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& t : trials) {
    auto& [n, bad] = tally[t.rule];
    ++n;
    if (!t.holds) ++bad;
  }
  Verdict v;
  for (const auto& [rule, nb] : tally) {
    v.detail += (v.detail.empty() ? "" : ", ") + std::string(to_string(rule)) + " " + std::to_string(nb.second) +
                "/" + std::to_string(nb.first);
    if (nb.second) v.pass = false;
  }
  v.detail += " violations";
  return v;
}

// ---- 5 ----------------------------------------------------------------------

Verdict erm_rates() {
  const RateResult sc = rate_experiment(default_erm_config(LossKind::squared));
  const RateResult gen = rate_experiment(default_erm_config(LossKind::absolute));
  const bool ok = sc.slope >= -1.2 && sc.slope <= -0.8 && gen.slope >= -0.65 && gen.slope <= -0.35 &&
                  sc.slope < gen.slope - 0.25;
  return {ok, "squared slope " + fmt("%.4f", sc.slope) + " in [-1.2, -0.8], absolute slope " +
                  fmt("%.4f", gen.slope) + " in [-0.65, -0.35], separation " + fmt("%.4f", gen.slope - sc.slope)};
}

// ---- 6 ----------------------------------------------------------------------

Verdict oracle_monotonicity() {
  std::vector<double> eps;
  for (int k = 0; k <= 30; ++k) eps.push_back(0.1 * k);
  std::size_t violations = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto c = corpus_case(k, 2049, 129);
    const auto curve = delta_curve(gap_profile(c.f, c.grid), gap_profile(c.g, c.grid), eps);
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i].delta > curve[i - 1].delta) ++violations;
  }
  return {violations == 0, "1000 pairs x 31 epsilons, " + std::to_string(violations) + " increases"};
}

// ---- 7 ----------------------------------------------------------------------

Verdict online_unification() {
  Verdict v;
  for (const char* name : {"online_drift.json", "online_shift.json", "online_scale.json"}) {
    const Json cfg = read_json(kConfigs / name);
    const auto spec = cli_detail::sequence_spec_from_json(cfg.at("scenario"));
    const auto seq = build_sequence(spec);
    const Grid grid = cli_detail::make_grid(spec.domain, RunConfig{}, cfg);
    const double eps = parse_real(cfg.at("eps_for_oracle"));
    const auto table = variation_table(seq, eps, grid);
    const std::size_t bad = certificate_violations(table);
    if (bad) v.pass = false;
    v.detail += std::string(v.detail.empty() ? "" : "; ") + to_string(spec.kind).data() + ": " +
                std::to_string(bad) + " violations";
    if (spec.kind == SequenceKind::drift) {
      const double eta2 = spec.drift_step[0] * spec.drift_step[0];
      double worst = 0.0;
      for (const auto& r : table.rows) {
        if (!r.cert_min_delta) {
          worst = INFINITY;
          continue;
        }
        worst = std::max(worst, std::abs(*r.cert_min_delta - eta2));
      }
      if (!(worst <= 1e-10)) v.pass = false;
      v.detail += ", max |minimizer cert delta - eta^2| = " + fmt("%.3g", worst);
    }
    if (spec.kind == SequenceKind::shift) {
      const Json& lj = cfg.at("learner");
      const auto lr = restart_learner(seq, parse_real(lj.at("epsilon")), parse_real(lj.at("delta_threshold")), grid);
      if (lr.restarts != 1) v.pass = false;
      v.detail += ", restarts " + std::to_string(lr.restarts);
    }
  }
  return v;
}

// ---- 8 ----------------------------------------------------------------------

Verdict localization_validation() {
  const Json cfg = read_json(kConfigs / "binary_classification.json");
  const auto p = problem_from_json(cfg);
  const bool shape = p.class_size() == 16 && p.outcome_count() == 16 && p.alpha == 1.0 && p.gamma == 0.05 &&
                     p.n == 500;
  const auto r = validate_proposition(p, 500, kSeed, 200);
  const double tol = 1e-8 * (1.0 + r.r_star);
  const bool residual_ok = !r.fixed_point.no_root && std::abs(r.fixed_point.residual) <= tol;

  FiniteClassProblem doc;
  doc.b = 1.0;
  doc.n = 1000;
  doc.gamma = 0.05;
  NoiseCertificate nc;
  nc.C = 1.0;
  nc.alpha = 1.0;
  const double U = compute_delta(doc, 0.01, nc, 0.0).U_gamma;
  const bool u_ok = std::abs(U - 0.43685) <= 1e-4;
  return {shape && r.mc_failure_rate <= 0.05 && residual_ok && u_ok,
          "failure rate " + fmt("%.4f", r.mc_failure_rate) + " (" + std::to_string(r.failures) + "/500), r* " +
              fmt("%.6g", r.r_star) + ", residual " + fmt("%.3g", r.fixed_point.residual) + ", delta " +
              fmt("%.6g", r.delta) + ", U(documented) " + fmt("%.6f", U)};
}

// ---- 9 ----------------------------------------------------------------------

FiniteClassProblem toy(std::vector<std::vector<double>> loss, std::vector<double> probs) {
  FiniteClassProblem p;
  for (std::size_t h = 0; h + 1 < loss.size(); ++h) p.hypotheses.push_back("h" + std::to_string(h));
  for (std::size_t z = 0; z < probs.size(); ++z) p.outcomes.push_back("z" + std::to_string(z));
  p.h_star_row = loss.size() - 1;
  p.loss = std::move(loss);
  p.probs = std::move(probs);
  p.validate();
  return p;
}

Verdict rademacher_enumeration() {
  struct Fixture {
    FiniteClassProblem p;
    std::vector<std::size_t> ns;
    std::vector<double> scales;
    double radius;  // localize to second moment <= radius^2; <= 0 keeps all
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({toy({{0.5, -0.2, 0.1}, {-0.3, 0.4, 0.0}, {0.2, 0.2, -0.6}, {0.0, 0.0, 0.0}}, {0.5, 0.3, 0.2}),
                      {1, 2, 3, 5, 8},
                      {0.25, 0.5, 1.0},
                      0.0});
  fixtures.push_back({toy({{1.0, -1.0}, {0.3, 0.6}, {-0.5, 0.2}, {0.0, 0.0}}, {0.3, 0.7}), {10, 12}, {0.5, 1.0}, 0.0});
  fixtures.push_back({toy({{1.0}, {-1.0}, {0.0}}, {1.0}), {1, 12}, {1.0}, 0.0});
  auto binary = problem_from_json(read_json(kConfigs / "binary_classification.json"));
  fixtures.push_back({binary, {1, 2, 4}, {0.5, 1.0}, 0.0});
  fixtures.push_back({binary, {3, 4}, {0.25, 0.5, 0.75, 1.0}, 0.3});

  std::size_t cases = 0, misses = 0;
  double worst_z = 0.0;
  std::uint64_t stream = 0;
  for (const auto& fx : fixtures) {
    std::vector<StarMember> subset;
    for (const auto& m : build_star_hull(fx.p)) {
      bool keep = false;
      for (double s : fx.scales) keep = keep || std::abs(m.scale - s) < 1e-12;
      if (fx.radius > 0.0 && m.second_moment > fx.radius * fx.radius) keep = false;
      if (keep) subset.push_back(m);
    }
    if (subset.empty() || subset.size() > 64) return {false, "fixture subset size out of range"};
    std::vector<std::vector<double>> vals;
    for (const auto& m : subset) vals.push_back(m.values);
    for (std::size_t n : fx.ns) {
      const double exact = testref::rademacher_exact(vals, fx.p.probs, n);
      const auto est = rademacher_estimate(fx.p, subset, n, 20000, derive_seed(kSeed, {9, stream++}));
      const double err = std::abs(est.mean - exact);
      ++cases;
      if (err > 3.0 * est.stderr_ + 1e-12) ++misses;
      if (est.stderr_ > 0.0) worst_z = std::max(worst_z, err / est.stderr_);
    }
  }
  return {misses == 0, std::to_string(cases) + " (fixture, n) cases, " + std::to_string(misses) +
                           " outside 3 stderr, max |error|/stderr = " + fmt("%.3f", worst_z)};
}

// ---- 10 ---------------------------------------------------------------------

Verdict reproducibility() {
  const fs::path root = fs::temp_directory_path() / "closefn_acceptance_repro";
  fs::remove_all(root);
  fs::create_directories(root);
  Json erm_cfg = read_json(kConfigs / "erm_default.json");
  for (auto& e : erm_cfg.at("experiments")) {
    e["n_list"] = {64, 256, 1024};
    e["replications"] = 10;
  }
  write_file(root / "erm.json", erm_cfg.dump(2));

  struct Job {
    const char* cmd;
    fs::path cfg;
  };
  const std::vector<Job> jobs = {
      {"certify", kConfigs / "abs_pair.json"},       {"oracle", kConfigs / "quadratic_pair.json"},
      {"sublevel-check", kConfigs / "quadratic_pair.json"}, {"calculus-check", kConfigs / "calculus.json"},
      {"erm", root / "erm.json"},                    {"online", kConfigs / "online_shift.json"},
      {"localize", kConfigs / "binary_classification.json"},
  };
  std::size_t files = 0, differing = 0;
  std::string failed;
  for (const auto& job : jobs) {
    std::string runs[2];
    for (int k = 0; k < 2; ++k) {
      RunConfig rc;
      rc.command = job.cmd;
      rc.input_path = job.cfg;
      rc.seed = kSeed;
      rc.quiet = true;
      rc.out_dir = root / (std::string(job.cmd) + (k ? "_b" : "_a"));
      std::ostringstream out, err;
      if (run(rc, out, err) != kExitOk) failed += std::string(failed.empty() ? "" : ",") + job.cmd;
    }
    const fs::path a = root / (std::string(job.cmd) + "_a"), b = root / (std::string(job.cmd) + "_b");
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const fs::path other = b / entry.path().filename();
      if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) ++differing;
    }
  }
  fs::remove_all(root);
  std::string detail = std::to_string(jobs.size()) + " commands run twice, " + std::to_string(files) + " files, " +
                       std::to_string(differing) + " differ";
  if (!failed.empty()) detail += ", nonzero exit: " + failed;
  return {differing == 0 && failed.empty() && files > 0, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "example reproduction", 10.0, example_reproduction},
      {2, "certificate soundness", 60.0, certificate_soundness},
      {3, "definition / sub-level equivalence", 0.0, sublevel_equivalence},
      {4, "calculus algebra", 0.0, calculus_algebra},
      {5, "ERM rate dichotomy", 180.0, erm_rates},
      {6, "oracle monotonicity", 0.0, oracle_monotonicity},
      {7, "online variation unification", 0.0, online_unification},
      {8, "localization validation", 0.0, localization_validation},
      {9, "Rademacher enumeration oracle", 0.0, rademacher_enumeration},
      {10, "reproducibility", 0.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += ", over time limit " + fmt("%.0f s", c.time_limit_s);
    }
    if (!v.pass) ++failures;
    std::printf("criterion %2d %s: %s [%s, %.1f s]\n", c.id, v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
