// Acceptance suite: one [PASS]/[FAIL] line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lgbt/embedding_audit.hpp"
#include "lgbt/experiments.hpp"
#include "lgbt/monotonicity.hpp"
#include "lgbt/parallel.hpp"
#include "support.hpp"

using namespace lgbt;
using testing::between;
using testing::gaussian_matrix;
using testing::relative_error;

namespace {

constexpr Execution kExec = Execution::parallel;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double time_limit;  // seconds; 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const RootLaw kLaws[] = {RootLaw(RootLawKind::uniform), RootLaw(RootLawKind::binary),
                         RootLaw(RootLawKind::gaussian)};

// ---------------------------------------------------------------------------

Outcome golden_examples() {
  std::ostringstream detail;
  bool pass = true;

  const Matrix gram3{{1, 1, 0}, {1, 2, 1}, {0, 1, 1}};
  const Matrix y3 = 3 * Matrix::Identity(3, 3) - Matrix::Ones(3, 3);
  const Matrix m3 = goodness_matrix(gram3, y3);
  const double err3 = (m3 - Matrix{{3, 4, 1}, {4, 8, 4}, {1, 4, 3}} / 8.0).cwiseAbs().maxCoeff();
  pass &= err3 <= 1e-9 && m3(0, 1) > m3(0, 0);

  GoodnessOptions opt;
  opt.n_laplacians = 0;
  opt.injected = {y3};
  const Embedding x3(Matrix{{0, 1, 1}, {1, 1, 0}});
  const auto r3 = good_check_monte_carlo(x3, opt, RngStream());
  pass &= r3.verdict == GoodnessVerdict::not_good && r3.witness && r3.witness->a == 0 && r3.witness->b == 1;

  const Embedding x5 = concat_embeddings(one_hot_embedding(std::vector<std::size_t>{3, 1, 1}),
                                         one_hot_embedding(std::vector<std::size_t>{1, 1, 3}));
  const Matrix y5{{2, -1, 0, 0, -1}, {-1, 4, -1, -1, -1}, {0, -1, 1, 0, 0}, {0, -1, 0, 1, 0}, {-1, -1, 0, 0, 2}};
  const Matrix m5 = goodness_matrix(x5.gram(), y5);
  const Matrix printed{{0.96, 0.70, 0.85, 0.52, 0.67},
                       {0.70, 0.90, 0.95, 0.67, 0.68},
                       {0.85, 0.95, 1.48, 0.83, 0.84},
                       {0.52, 0.67, 0.83, 1.08, 0.56},
                       {0.67, 0.68, 0.84, 0.56, 0.93}};
  const double err5 = (m5 - printed).cwiseAbs().maxCoeff();
  pass &= err5 <= 1e-2 && m5(1, 2) > m5(1, 1);
  opt.injected = {y5};
  const auto r5 = good_check_monte_carlo(x5, opt, RngStream());
  pass &= r5.verdict == GoodnessVerdict::not_good && r5.witness && r5.witness->a == 1 && r5.witness->b == 2;

  detail << "3x3 max err " << fmt("%.1e", err3) << ", M12-M11 = " << fmt("%.4f", m3(0, 1) - m3(0, 0))
         << ", witness (" << (r3.witness ? r3.witness->a + 1 : 0) << "," << (r3.witness ? r3.witness->b + 1 : 0)
         << "); 5x5 max err vs printed " << fmt("%.4f", err5) << ", M23-M22 = " << fmt("%.4f", m5(1, 2) - m5(1, 1))
         << ", witness (" << (r5.witness ? r5.witness->a + 1 : 0) << "," << (r5.witness ? r5.witness->b + 1 : 0)
         << ")";
  return {pass, detail.str()};
}

// Runs `count` random favoring traces on instances from `gen`.
struct SuiteResult {
  std::size_t violations = 0;
  std::size_t errors = 0;
  std::size_t steps = 0;
  double worst = 0.0;
};

SuiteResult trace_suite(const InstanceGenerator& gen, std::size_t count, const RngStream& rng) {
  std::vector<MonotonicityReport> reports(count);
  std::vector<char> errored(count, 0);
  for_each_index(count, kExec, [&](std::size_t t) {
    RngStream s = rng.split(t);
    const MonotonicityInstance inst = gen(s);
    const OperationTrace trace = random_favoring_trace(inst.data, inst.target, inst.cfg.law, s);
    try {
      reports[t] = assert_monotone(inst.cfg, inst.data, trace, 1e-7);
    } catch (const ConvergenceError&) {
      errored[t] = 1;
    }
  });
  SuiteResult r;
  for (std::size_t t = 0; t < count; ++t) {
    if (errored[t]) {
      ++r.errors;
      continue;
    }
    r.violations += !reports[t].pass;
    r.steps += reports[t].steps;
    r.worst = std::min(r.worst, reports[t].worst_change);
  }
  return r;
}

Outcome monotone_suite() {
  const RngStream root(2);
  std::ostringstream detail;
  bool pass = true;
  auto report = [&](const std::string& name, const SuiteResult& r) {
    pass &= r.violations == 0 && r.errors == 0;
    detail << name << ": " << r.violations << " violations";
    if (r.errors) detail << ", " << r.errors << " solver failures";
    detail << " (" << r.steps << " steps, worst change " << fmt("%.1e", r.worst) << "); ";
  };
  for (std::size_t k = 0; k < 3; ++k)
    report("classic/" + kLaws[k].name(), trace_suite(classic_family(kLaws[k]), 1000, root.split(k)));
  report("one-hot+sI", trace_suite(one_hot_family(8), 1000, root.split(10)));
  report("diffusion", trace_suite(diffusion_family(8), 1000, root.split(11)));
  return {pass, detail.str()};
}

Outcome intro_counterexample() {
  const ModelConfig cfg{RootLaw(RootLawKind::uniform), 1.0, Embedding(Matrix{{1, 2}, {0, 0}}), Matrix::Zero(2, 2)};
  const Dataset empty(2);
  const double before = fit(cfg, empty).theta_star(0);
  const double after = fit(cfg, append(empty, 0, 1, 1.0, cfg.law)).theta_star(0);
  const double drop = before - after;
  return {drop > 1e-3, "theta*_a " + fmt("%.6f", before) + " -> " + fmt("%.6f", after) + ", drop " +
                           fmt("%.6f", drop)};
}

// Update (n, r) with |r - r_n| >= 0.1, or an append, on a random instance.
Operation random_sensitivity_op(const ModelConfig& cfg, const Dataset& data, RngStream& s) {
  const std::size_t n = cfg.alternatives();
  if (s.below(2) == 0) {
    const std::size_t a = s.below(n);
    std::size_t b = s.below(n - 1);
    if (b >= a) ++b;
    return Append{a, b, sample_comparison(cfg.law, s.normal(), s)};
  }
  const std::size_t k = s.below(data.size());
  const double old = data[k].r;
  for (;;) {
    const double r = cfg.law.kind() == RootLawKind::binary ? -old : sample_comparison(cfg.law, s.normal(), s);
    if (std::abs(r - old) >= 0.1) return Update{k, r};
  }
}

Outcome sensitivity_cross_check() {
  const RngStream root(4);
  const std::size_t count = 200;
  std::vector<double> sens_err(count), path_err(count);
  std::vector<char> is_append(count);
  SolverOptions tight;
  tight.tolerance = 1e-13;
  for_each_index(count, kExec, [&](std::size_t i) {
    RngStream s = root.split(i);
    ModelConfig cfg = testing::random_config(s);
    cfg.law = kLaws[i % 3];
    const Dataset data = random_dataset(cfg.alternatives(), between(1, 10, s), cfg.law, s);
    const Operation op = random_sensitivity_op(cfg, data, s);
    is_append[i] = std::holds_alternative<Append>(op);

    SensitivitySetup setup{cfg, data, op, s.uniform(0.1, 0.9)};
    const Vector analytic = sensitivity(setup, smoothed_fit(setup, tight));
    const double h = 1e-4;
    SensitivitySetup up = setup, down = setup;
    up.mu += h;
    down.mu -= h;
    const Vector fd = (smoothed_fit(up, tight).theta_star - smoothed_fit(down, tight).theta_star) / (2 * h);
    sens_err[i] = relative_error(fd, analytic);

    const Vector exact = fit(cfg, apply(op, data, cfg.law), tight).theta_star - fit(cfg, data, tight).theta_star;
    path_err[i] = relative_error(path_integral_adaptive(SensitivitySetup{cfg, data, op, 0.0}, 1e-7, 20, tight), exact);
  });
  double worst_append = 0, worst_update = 0;
  std::size_t appends = 0;
  for (std::size_t i = 0; i < count; ++i) {
    (is_append[i] ? worst_append : worst_update) = std::max(is_append[i] ? worst_append : worst_update, sens_err[i]);
    appends += is_append[i];
  }
  const double worst_path = *std::max_element(path_err.begin(), path_err.end());
  const bool pass = worst_append < 1e-4 && worst_update < 1e-4 && worst_path < 1e-3 && appends > 0 &&
                    appends < count;
  return {pass, std::to_string(appends) + " append / " + std::to_string(count - appends) +
                    " update instances; worst FD rel err append " + fmt("%.1e", worst_append) + ", update " +
                    fmt("%.1e", worst_update) + "; worst path-integral rel err " + fmt("%.1e", worst_path)};
}

Outcome derivative_check() {
  const RngStream root(5);
  double worst_g = 0, worst_h = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    RngStream s = root.split(i);
    ModelConfig cfg = testing::random_config(s);
    cfg.law = kLaws[i % 3];
    const Dataset data = random_dataset(cfg.alternatives(), between(0, 20, s), cfg.law, s);
    const Vector beta = gaussian_matrix(static_cast<Eigen::Index>(cfg.dims()), 1, s);
    const Matrix g_fd = testing::fd_jacobian(
        [&](const Vector& b) { return Vector::Constant(1, loss(cfg, data, b)); }, beta, 1e-6);
    const Matrix h_fd = testing::fd_jacobian([&](const Vector& b) { return gradient(cfg, data, b); }, beta, 1e-5);
    worst_g = std::max(worst_g, relative_error(g_fd.transpose(), gradient(cfg, data, beta)));
    worst_h = std::max(worst_h, relative_error(h_fd, hessian(cfg, data, beta)));
  }
  return {worst_g < 1e-6 && worst_h < 1e-5,
          "worst rel err gradient " + fmt("%.1e", worst_g) + ", Hessian " + fmt("%.1e", worst_h)};
}

Outcome one_hot_closed_form() {
  RngStream rng(6);
  double worst = 0;
  bool super = true;
  std::size_t cases = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = between(2, 12, rng);
    const std::size_t classes = between(1, n, rng);
    std::vector<std::size_t> labels(n);
    for (std::size_t a = 0; a < n; ++a) labels[a] = a < classes ? a : rng.below(classes);
    std::shuffle(labels.begin(), labels.end(), rng);
    const Matrix gram = one_hot_from_labels(labels).gram();
    for (double mu : {0.1, 1.0, 10.0}) {
      const Matrix closed = one_hot_gram_inverse(labels, mu);
      const Matrix numeric = (gram + mu * Matrix::Identity(gram.rows(), gram.cols())).inverse();
      worst = std::max(worst, (closed - numeric).cwiseAbs().maxCoeff());
      super &= is_super_laplacian(closed);
      ++cases;
    }
  }
  return {worst <= 1e-9 && super, std::to_string(cases) + " cases, max abs err " + fmt("%.1e", worst) +
                                      (super ? ", all super-Laplacian" : ", NOT all super-Laplacian")};
}

Outcome inverse_dominance() {
  RngStream rng(7);
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const Matrix delta = random_super_laplacian(between(2, 8, rng), rng);
    failures += !is_super_laplacian(delta) || !inverse_dominance_check(delta);
  }
  return {failures == 0, std::to_string(failures) + " failures in 1000"};
}

Outcome neutrality() {
  const RngStream root(8);
  double worst = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    RngStream s = root.split(i);
    ModelConfig cfg = testing::random_config(s);
    cfg.law = kLaws[i % 3];
    const std::size_t n = cfg.alternatives();
    const Dataset data = random_dataset(n, between(0, 20, s), cfg.law, s);
    std::vector<std::size_t> tau(n);
    std::iota(tau.begin(), tau.end(), 0);
    std::shuffle(tau.begin(), tau.end(), s);

    Matrix x(cfg.embedding.matrix().rows(), cfg.embedding.matrix().cols());
    Matrix l(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      x.col(tau[a]) = cfg.embedding.matrix().col(a);
      for (std::size_t b = 0; b < n; ++b) l(tau[a], tau[b]) = cfg.laplacian(a, b);
    }
    std::vector<ComparisonSample> samples;
    for (const auto& c : data.samples()) samples.push_back({tau[c.a], tau[c.b], c.r});
    const ModelConfig permuted{cfg.law, cfg.sigma, Embedding(x), l};

    const Vector theta = fit(cfg, data).theta_star;
    const Vector moved = fit(permuted, Dataset(n, samples)).theta_star;
    for (std::size_t a = 0; a < n; ++a) worst = std::max(worst, std::abs(moved(tau[a]) - theta(a)));
  }
  return {worst <= 1e-8, "max |theta*_tau(a) - theta*_a| = " + fmt("%.1e", worst)};
}

// a ≥ b up to k combined standard errors.
bool at_least(const ExperimentResult& a, const ExperimentResult& b, double k) {
  return a.estimate >= b.estimate - k * std::hypot(a.std_error, b.std_error);
}

Outcome heatmap_trend() {
  const HeatmapSpec spec;
  const auto rows = run_goodness_heatmap(spec, RngStream(9), kExec);
  std::map<std::tuple<std::string, std::size_t, std::size_t>, ExperimentResult> cell;
  for (const auto& r : rows) cell[{r.series, r.alternatives, r.dims}] = r;

  std::size_t checks = 0;
  std::vector<std::string> broken;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) broken.push_back(what);
  };
  std::size_t concat_d_dips = 0;
  for (std::size_t a = spec.min_alternatives; a <= spec.max_alternatives; ++a)
    for (std::size_t d = spec.min_dims; d <= spec.max_dims; ++d) {
      const auto& p = cell.at({"plain", a, d});
      const auto& c = cell.at({"identity_concat", a, d});
      const std::string at = "(A=" + std::to_string(a) + ",D=" + std::to_string(d) + ")";
      expect(at_least(c, p, 3), "concat<plain " + at);
      if (a > spec.min_alternatives) {
        expect(at_least(cell.at({"plain", a - 1, d}), p, 3), "plain rises in A " + at);
        expect(at_least(cell.at({"identity_concat", a - 1, d}), c, 3), "concat rises in A " + at);
      }
      if (d > spec.min_dims) {
        expect(at_least(p, cell.at({"plain", a, d - 1}), 3), "plain falls in D " + at);
        concat_d_dips += !at_least(c, cell.at({"identity_concat", a, d - 1}), 3);
      }
    }
  std::string detail = std::to_string(checks) + " comparisons, " + std::to_string(broken.size()) + " broken";
  for (std::size_t i = 0; i < std::min<std::size_t>(broken.size(), 5); ++i) detail += "; " + broken[i];
  detail += "; plain A=2 D=8 p=" + fmt("%.3f", cell.at({"plain", 2, 8}).estimate) +
            ", plain A=8 D=1 p=" + fmt("%.3f", cell.at({"plain", 8, 1}).estimate) +
            "; identity_concat D-direction dips (not asserted): " + std::to_string(concat_d_dips);
  return {broken.empty(), detail};
}

Outcome nmse_trends() {
  std::vector<std::string> broken;
  std::size_t checks = 0;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) broken.push_back(what);
  };

  const NmseVsDimsSpec dims_spec;
  const auto dims_rows = run_nmse_vs_dims(dims_spec, RngStream(10), kExec);
  std::map<std::pair<std::string, std::size_t>, ExperimentResult> by_d;
  for (const auto& r : dims_rows) by_d[{r.series, r.dims}] = r;
  for (std::size_t d : dims_spec.dims) {
    const auto& full = by_d.at({"full", d});
    for (const char* base : {"identity", "features"})
      expect(at_least(by_d.at({base, d}), full, 2), std::string("full > ") + base + " at D=" + std::to_string(d));
  }

  const NmseVsComparisonsSpec cmp_spec;
  const auto cmp_rows = run_nmse_vs_comparisons(cmp_spec, RngStream(11), kExec);
  std::map<std::pair<std::string, std::size_t>, ExperimentResult> by_n;
  for (const auto& r : cmp_rows) by_n[{r.series, r.comparisons}] = r;
  for (std::size_t k = 0; k < cmp_spec.comparisons.size(); ++k) {
    const std::size_t n = cmp_spec.comparisons[k];
    const auto& oh = by_n.at({"one_hot", n});
    const auto& cl = by_n.at({"classic", n});
    if (n <= cmp_spec.alternatives)
      expect(at_least(cl, oh, 2), "one_hot > classic at N=" + std::to_string(n));
    if (n == 0) {
      expect(oh.estimate == 1.0 && cl.estimate == 1.0, "nMSE(N=0) != 1");
    }
    if (k > 0) {
      const std::size_t prev = cmp_spec.comparisons[k - 1];
      for (const char* s : {"one_hot", "classic"})
        expect(at_least(by_n.at({s, prev}), by_n.at({s, n}), 2), std::string(s) + " rises at N=" + std::to_string(n));
    }
  }
  std::string detail = std::to_string(checks) + " comparisons, " + std::to_string(broken.size()) + " broken";
  for (const auto& b : broken) detail += "; " + b;
  const auto& last_full = by_d.at({"full", dims_spec.dims.back()});
  detail += "; full nMSE at D=" + std::to_string(dims_spec.dims.back()) + ": " + fmt("%.3f", last_full.estimate) +
            ", one_hot/classic at N=" + std::to_string(cmp_spec.alternatives) + ": " +
            fmt("%.3f", by_n.at({"one_hot", cmp_spec.alternatives}).estimate) + "/" +
            fmt("%.3f", by_n.at({"classic", cmp_spec.alternatives}).estimate);
  return {broken.empty(), detail};
}

// D = 1 rows: half built from {u, -v, 0}, some of those perturbed, the rest Gaussian.
Matrix random_d1_row(RngStream& s) {
  const std::size_t n = between(2, 8, s);
  Matrix row(1, static_cast<Eigen::Index>(n));
  const int kind = static_cast<int>(s.below(3));
  if (kind == 2) return gaussian_matrix(1, static_cast<Eigen::Index>(n), s);
  const double u = s.uniform(0.2, 3.0), v = s.uniform(0.2, 3.0);
  for (Eigen::Index a = 0; a < row.cols(); ++a) {
    const auto pick = s.below(5);
    row(0, a) = pick < 2 ? u : pick < 4 ? -v : 0.0;
  }
  if (kind == 1) row(0, static_cast<Eigen::Index>(s.below(n))) += (s.below(2) ? 1 : -1) * s.uniform(0.05, 0.5);
  return row;
}

Outcome exact_vs_monte_carlo() {
  GoodnessOptions opt;
  opt.n_laplacians = 1429;  // × 7 scales ≈ 10⁴ trials
  opt.use_exact_shortcuts = false;
  const RngStream root(12);

  std::ostringstream detail;
  bool pass = true;
  for (int which = 0; which < 2; ++which) {
    const std::size_t count = 500;
    std::vector<char> exact(count), mc(count);
    std::vector<std::size_t> trials(count);
    for_each_index(count, kExec, [&](std::size_t i) {
      RngStream s = root.split(which).split(i);
      Matrix x;
      if (which == 0) {
        x = gaussian_matrix(static_cast<Eigen::Index>(between(1, 6, s)), 2, s);
        exact[i] = good_check_exact_A2(x.transpose() * x);
      } else {
        x = random_d1_row(s);
        exact[i] = good_check_exact_D1(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
      }
      const auto r = good_check_monte_carlo(Embedding(x), opt, s.split(1), Execution::serial);
      mc[i] = r.verdict != GoodnessVerdict::not_good;
      trials[i] = r.trials;
    });
    std::size_t disagree = 0, good = 0, full = 0;
    for (std::size_t i = 0; i < count; ++i) {
      disagree += exact[i] != mc[i];
      good += exact[i];
      full += trials[i] >= 10000;
    }
    pass &= disagree == 0;
    detail << (which == 0 ? "A=2: " : "D=1: ") << disagree << " disagreements (" << good << " good, "
           << count - good << " not good; " << full << " ran all 10003 trials)" << (which == 0 ? "; " : "");
  }
  return {pass, detail.str()};
}

}  // namespace

int main() {
  apply_thread_env();
  const std::vector<Criterion> criteria{
      {"AC1", "small golden examples", 1, golden_examples},
      {"AC2", "monotonicity suite", 300, monotone_suite},
      {"AC3", "introductory counterexample", 1, intro_counterexample},
      {"AC4", "sensitivity formulas and path integral", 120, sensitivity_cross_check},
      {"AC5", "gradient/Hessian vs finite differences", 60, derivative_check},
      {"AC6", "one-hot closed-form inverse", 0, one_hot_closed_form},
      {"AC7", "super-Laplacian inverse dominance", 0, inverse_dominance},
      {"AC8", "neutrality", 0, neutrality},
      {"AC9", "goodness heatmap trends", 600, heatmap_trend},
      {"AC10", "nMSE trends", 600, nmse_trends},
      {"AC11", "exact A=2 / D=1 criteria vs Monte Carlo", 0, exact_vs_monte_carlo},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    testing::Stopwatch clock;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = clock.seconds();
    const bool in_time = c.time_limit == 0 || seconds < c.time_limit;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %s %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                o.detail.c_str(), seconds,
                c.time_limit > 0 ? (in_time ? ", within limit" : ", OVER TIME LIMIT") : "");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
