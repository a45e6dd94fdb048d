#include "lgbt/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lgbt/embedding_audit.hpp"

namespace lgbt {

namespace {

RootLaw random_law(RngStream& rng) {
  static constexpr RootLawKind kinds[] = {RootLawKind::uniform, RootLawKind::binary, RootLawKind::gaussian};
  return RootLaw(kinds[rng.below(3)]);
}

std::size_t other_alternative(std::size_t target, std::size_t n, RngStream& rng) {
  const std::size_t b = rng.below(n - 1);
  return b >= target ? b + 1 : b;
}

// r' on the favorable side of r for an (a, ·) sample (toward +sup) or a
// (·, a) sample (toward -sup).
double favorable_value(RootLaw law, double r, bool toward_plus, RngStream& rng) {
  switch (law.kind()) {
    case RootLawKind::uniform: return toward_plus ? rng.uniform(r, 1.0) : rng.uniform(-1.0, r);
    case RootLawKind::binary: return toward_plus ? 1.0 : -1.0;
    case RootLawKind::gaussian: {
      const double step = std::abs(rng.normal());
      return toward_plus ? r + step : r - step;
    }
  }
  return r;
}

Operation random_favoring_op(const Dataset& data, std::size_t target, RootLaw law, RngStream& rng) {
  std::vector<std::size_t> touching;
  for (std::size_t n = 0; n < data.size(); ++n)
    if (data[n].a == target || data[n].b == target) touching.push_back(n);

  const bool can_append = law.has_max() && data.num_alternatives() >= 2;
  for (;;) {
    switch (rng.below(4)) {
      case 0: return Exchange{static_cast<std::size_t>(rng.below(data.size() + 1))};
      case 1: {
        const std::size_t count = rng.below(data.size() + 1);
        std::vector<std::size_t> perm(count);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        return Shuffle{count, std::move(perm)};
      }
      case 2: {
        if (!can_append) continue;
        const std::size_t other = other_alternative(target, data.num_alternatives(), rng);
        if (rng.below(2) == 0) return Append{target, other, law.range_sup()};
        return Append{other, target, -law.range_sup()};
      }
      default: {
        if (touching.empty()) continue;
        const std::size_t n = touching[rng.below(touching.size())];
        const auto& s = data[n];
        return Update{n, favorable_value(law, s.r, s.a == target, rng)};
      }
    }
  }
}

double theta_change(const FitResult& before, const FitResult& after, std::size_t a) {
  return after.theta_star(a) - before.theta_star(a);
}

}  // namespace

OperationTrace random_favoring_trace(const Dataset& start, std::size_t target, RootLaw law, RngStream& rng,
                                     const TraceOptions& options) {
  if (target >= start.num_alternatives()) throw std::invalid_argument("trace target out of range");
  OperationTrace trace;
  trace.target = target;
  const std::size_t length =
      options.min_length + rng.below(options.max_length - options.min_length + 1);
  Dataset current = start;
  for (std::size_t k = 0; k < length; ++k) {
    trace.ops.push_back(random_favoring_op(current, target, law, rng));
    current = apply(trace.ops.back(), current, law);
  }
  return trace;
}

MonotonicityReport assert_monotone(const ModelConfig& cfg, const Dataset& data, const OperationTrace& trace,
                                   double slack, const SolverOptions& solver) {
  if (!trace.claims_favoring) throw std::invalid_argument("assert_monotone: trace does not claim to favor");
  MonotonicityReport report;
  Dataset current = data;
  FitResult before = fit(cfg, current, solver);
  for (std::size_t k = 0; k < trace.ops.size(); ++k) {
    const auto& op = trace.ops[k];
    if (!op_favors_alternative(op, trace.target, current, cfg.law))
      throw std::invalid_argument(std::string("assert_monotone: step ") + std::to_string(k) + " (" +
                                  operation_name(op) + ") does not favor the target");
    current = apply(op, current, cfg.law);
    FitResult after = fit(cfg, current, solver);
    const double change = theta_change(before, after, trace.target);
    report.worst_change = k == 0 ? change : std::min(report.worst_change, change);
    if (std::holds_alternative<Exchange>(op) || std::holds_alternative<Shuffle>(op))
      report.max_neutral_change =
          std::max(report.max_neutral_change, (after.theta_star - before.theta_star).cwiseAbs().maxCoeff());
    ++report.steps;
    if (change < -slack) {
      report.pass = false;
      report.failure = MonotonicityFailure{k, change, std::move(before), std::move(after)};
      return report;
    }
    before = std::move(after);
  }
  return report;
}

Matrix SensitivitySetup::scaled_gram() const { return cfg.sigma * cfg.sigma * cfg.embedding.gram(); }

Deformation SensitivitySetup::deformation(double weight) const {
  if (const auto* p = std::get_if<Append>(&op)) return Deformation::from_append(*p, weight);
  if (const auto* u = std::get_if<Update>(&op)) return Deformation::from_update(*u, data, weight);
  throw std::invalid_argument("sensitivity analysis needs an append or update operation");
}

FitResult smoothed_fit(const SensitivitySetup& setup, const SolverOptions& solver) {
  return fit(setup.cfg, setup.data, setup.deformation(setup.mu), solver);
}

namespace {

Vector direction(const SensitivitySetup& setup, const Matrix& m, std::size_t a, std::size_t b) {
  const Matrix x = setup.scaled_gram();
  const auto n = x.rows();
  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) + x * m);
  const Vector rhs = x.col(a) - x.col(b);
  return lu.solve(rhs);
}

}  // namespace

Vector sensitivity_update(const SensitivitySetup& setup, const FitResult& fit_at_mu, std::size_t n, double r) {
  if (n >= setup.data.size()) throw std::invalid_argument("sensitivity_update: position outside the dataset");
  const auto& s = setup.data[n];
  const Matrix m = setup.cfg.laplacian + hessian_of_dataset(setup.data, fit_at_mu.theta_star, setup.cfg.law);
  return (r - s.r) * direction(setup, m, s.a, s.b);
}

Vector sensitivity_append(const SensitivitySetup& setup, const FitResult& fit_at_mu, std::size_t a,
                          std::size_t b, double r) {
  const auto& theta = fit_at_mu.theta_star;
  const double t = theta(a) - theta(b);
  Matrix m = setup.cfg.laplacian + hessian_of_dataset(setup.data, theta, setup.cfg.law);
  m += setup.mu * phi_second(setup.cfg.law, t) * single_edge_laplacian(setup.data.num_alternatives(), a, b);
  return (r - phi_prime(setup.cfg.law, t)) * direction(setup, m, a, b);
}

Vector sensitivity(const SensitivitySetup& setup, const FitResult& fit_at_mu) {
  if (const auto* p = std::get_if<Append>(&setup.op)) return sensitivity_append(setup, fit_at_mu, p->a, p->b, p->r);
  if (const auto* u = std::get_if<Update>(&setup.op)) return sensitivity_update(setup, fit_at_mu, u->n, u->r);
  throw std::invalid_argument("sensitivity analysis needs an append or update operation");
}

Vector path_integral(const SensitivitySetup& setup, std::size_t points, const SolverOptions& solver) {
  if (points < 3 || points % 2 == 0) throw std::invalid_argument("path_integral: need an odd number ≥ 3 of nodes");
  const double h = 1.0 / static_cast<double>(points - 1);
  Vector total = Vector::Zero(static_cast<Eigen::Index>(setup.data.num_alternatives()));
  SensitivitySetup node = setup;
  for (std::size_t k = 0; k < points; ++k) {
    node.mu = static_cast<double>(k) * h;
    const double w = (k == 0 || k + 1 == points) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    total += w * sensitivity(node, smoothed_fit(node, solver));
  }
  return total * (h / 3.0);
}

namespace {

struct AdaptiveSimpson {
  SensitivitySetup node;
  SolverOptions solver;
  double abs_tol = 0.0;
  int max_depth = 0;

  Vector at(double mu) {
    node.mu = mu;
    return sensitivity(node, smoothed_fit(node, solver));
  }

  Vector refine(double lo, double hi, const Vector& f_lo, const Vector& f_mid, const Vector& f_hi,
                const Vector& whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const Vector f_l = at(0.5 * (lo + mid)), f_r = at(0.5 * (mid + hi));
    const double w = (hi - lo) / 12.0;
    const Vector left = w * (f_lo + 4.0 * f_l + f_mid), right = w * (f_mid + 4.0 * f_r + f_hi);
    const Vector delta = left + right - whole;
    if (depth >= max_depth || (depth >= 3 && delta.norm() <= 15.0 * tol)) return left + right + delta / 15.0;
    return refine(lo, mid, f_lo, f_l, f_mid, left, 0.5 * tol, depth + 1) +
           refine(mid, hi, f_mid, f_r, f_hi, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

Vector path_integral_adaptive(const SensitivitySetup& setup, double tolerance, int max_depth,
                              const SolverOptions& solver) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("path_integral_adaptive: tolerance must be positive");
  AdaptiveSimpson q{setup, solver, 0.0, max_depth};
  // a 21-node pass sets the scale for the absolute tolerance
  const Vector rough = path_integral(setup, 21, solver);
  q.abs_tol = tolerance * std::max(rough.norm(), 1e-12);
  const Vector f0 = q.at(0.0), f_half = q.at(0.5), f1 = q.at(1.0);
  return q.refine(0.0, 1.0, f0, f_half, f1, (f0 + 4.0 * f_half + f1) / 6.0, q.abs_tol, 0);
}

double replay_witness(const ViolationWitness& w, const SolverOptions& solver) {
  const auto before = fit(w.cfg, w.data, solver);
  const auto after = fit(w.cfg, apply(w.op, w.data, w.cfg.law), solver);
  return theta_change(before, after, w.target);
}

namespace {

struct TrialResult {
  bool failed = false;
  ViolationWitness witness;
};

TrialResult hunt_trial(const InstanceGenerator& generator, const RngStream& rng, std::size_t t, double slack) {
  RngStream stream = rng.split(t);
  auto inst = generator(stream);
  const auto trace = random_favoring_trace(inst.data, inst.target, inst.cfg.law, stream);
  const auto report = assert_monotone(inst.cfg, inst.data, trace, slack);
  TrialResult out;
  if (report.pass) return out;
  Dataset current = inst.data;
  for (std::size_t k = 0; k < report.failure->step; ++k) current = apply(trace.ops[k], current, inst.cfg.law);
  out.failed = true;
  out.witness = ViolationWitness{std::move(inst.cfg), std::move(current), trace.ops[report.failure->step],
                                 inst.target, report.failure->drop, t};
  return out;
}

void shrink(ViolationWitness& w, double slack) {
  auto fails = [&](const ViolationWitness& c) { return replay_witness(c) < -slack; };

  // Drop samples the failing operation does not reference.
  for (std::size_t j = w.data.size(); j-- > 0;) {
    ViolationWitness candidate = w;
    if (auto* u = std::get_if<Update>(&candidate.op)) {
      if (u->n == j) continue;
      if (u->n > j) --u->n;
    }
    auto samples = w.data.samples();
    samples.erase(samples.begin() + static_cast<std::ptrdiff_t>(j));
    candidate.data = Dataset(w.data.num_alternatives(), std::move(samples));
    if (fails(candidate)) w = std::move(candidate);
  }

  // Zero embedding entries.
  const Matrix& x0 = w.cfg.embedding.matrix();
  for (Eigen::Index d = 0; d < x0.rows(); ++d)
    for (Eigen::Index a = 0; a < x0.cols(); ++a) {
      if (w.cfg.embedding.matrix()(d, a) == 0.0) continue;
      ViolationWitness candidate = w;
      Matrix x = w.cfg.embedding.matrix();
      x(d, a) = 0.0;
      candidate.cfg.embedding = Embedding(std::move(x));
      if (fails(candidate)) w = std::move(candidate);
    }

  // Remove prior-graph edges.
  const auto n = w.cfg.laplacian.rows();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double lab = w.cfg.laplacian(a, b);
      if (lab == 0.0) continue;
      ViolationWitness candidate = w;
      Matrix& l = candidate.cfg.laplacian;
      l(a, b) = l(b, a) = 0.0;
      // Rebuild the diagonal from the off-diagonals so no round-off is left.
      for (Eigen::Index i : {a, b}) l(i, i) = 0.0 - (l.row(i).sum() - l(i, i));
      if (fails(candidate)) w = std::move(candidate);
    }

  w.drop = replay_witness(w);
}

}  // namespace

std::optional<ViolationWitness> hunt_violation(const InstanceGenerator& generator, const RngStream& rng,
                                               std::size_t budget, double slack, Execution exec) {
  if (budget == 0) throw std::invalid_argument("hunt_violation: budget must be at least 1");
  std::optional<ViolationWitness> found;
  if (exec == Execution::serial) {
    for (std::size_t t = 0; t < budget && !found; ++t) {
      auto r = hunt_trial(generator, rng, t, slack);
      if (r.failed) found = std::move(r.witness);
    }
  } else {
    constexpr std::size_t kBlock = 64;
    for (std::size_t start = 0; start < budget && !found; start += kBlock) {
      const std::size_t count = std::min(kBlock, budget - start);
      std::vector<TrialResult> block(count);
      for_each_index(count, exec, [&](std::size_t k) { block[k] = hunt_trial(generator, rng, start + k, slack); });
      for (auto& r : block)
        if (r.failed) {
          found = std::move(r.witness);
          break;
        }
    }
  }
  if (found) shrink(*found, slack);
  return found;
}

AuditSummary run_monotonicity_audit(const ModelConfig& cfg, const Dataset& data, std::size_t trials,
                                    const RngStream& rng, double slack, Execution exec) {
  if (data.num_alternatives() < 2) throw std::invalid_argument("monotonicity audit needs two alternatives");
  struct Outcome {
    OperationTrace trace;
    MonotonicityReport report;
  };
  std::vector<Outcome> outcomes(trials);
  for_each_index(trials, exec, [&](std::size_t t) {
    RngStream stream = rng.split(t);
    const std::size_t target = stream.below(data.num_alternatives());
    outcomes[t].trace = random_favoring_trace(data, target, cfg.law, stream);
    outcomes[t].report = assert_monotone(cfg, data, outcomes[t].trace, slack);
  });

  AuditSummary summary;
  summary.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& o = outcomes[t];
    summary.worst_change = t == 0 ? o.report.worst_change : std::min(summary.worst_change, o.report.worst_change);
    if (o.report.pass) continue;
    if (summary.violations++ == 0) {
      summary.first_failing_trial = t;
      summary.first_failing_trace = o.trace;
      summary.first_failure = o.report.failure;
    }
  }
  return summary;
}

Dataset random_dataset(std::size_t num_alternatives, std::size_t size, RootLaw law, RngStream& rng) {
  if (num_alternatives < 2) return Dataset(num_alternatives);
  Vector truth(static_cast<Eigen::Index>(num_alternatives));
  for (auto& v : truth) v = rng.normal();
  std::vector<ComparisonSample> samples;
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t a = rng.below(num_alternatives);
    const std::size_t b = other_alternative(a, num_alternatives, rng);
    samples.push_back({a, b, sample_comparison(law, truth(a) - truth(b), rng)});
  }
  return Dataset(num_alternatives, std::move(samples));
}

namespace {

Matrix random_prior(std::size_t n, RngStream& rng) {
  if (rng.below(2) == 0) return Matrix::Zero(n, n);
  return rng.uniform(0.0, 2.0) * random_laplacian(n, rng);
}

std::size_t random_size(std::size_t lo, std::size_t hi, RngStream& rng) { return lo + rng.below(hi - lo + 1); }

}  // namespace

InstanceGenerator classic_family(RootLaw law, std::size_t max_alternatives) {
  return [law, max_alternatives](RngStream& rng) {
    const std::size_t n = random_size(2, max_alternatives, rng);
    const double sigma = rng.uniform(0.3, 3.0);
    auto data = random_dataset(n, random_size(0, 12, rng), law, rng);
    return MonotonicityInstance{ModelConfig::classic(law, sigma, n), std::move(data), rng.below(n)};
  };
}

InstanceGenerator one_hot_family(std::size_t max_alternatives) {
  return [max_alternatives](RngStream& rng) {
    const std::size_t n = random_size(2, max_alternatives, rng);
    const std::size_t classes = random_size(1, n, rng);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = rng.below(classes);
    // Relabel to drop empty classes.
    std::vector<std::size_t> remap(classes, classes);
    std::size_t next = 0;
    for (auto& l : labels) {
      if (remap[l] == classes) remap[l] = next++;
      l = remap[l];
    }
    const double s = rng.below(4) == 0 ? 0.0 : rng.uniform(0.1, 2.0);
    const RootLaw law = random_law(rng);
    ModelConfig cfg{law, rng.uniform(0.3, 3.0), one_hot_from_labels(labels, s), random_prior(n, rng)};
    auto data = random_dataset(n, random_size(0, 12, rng), law, rng);
    return MonotonicityInstance{std::move(cfg), std::move(data), rng.below(n)};
  };
}

InstanceGenerator diffusion_family(std::size_t max_alternatives) {
  return [max_alternatives](RngStream& rng) {
    const auto grid = default_lambda_grid();
    for (;;) {
      const std::size_t n = random_size(2, max_alternatives, rng);
      const Matrix delta = random_super_laplacian(n, rng);
      Eigen::LLT<Matrix> llt(spd_inverse(delta));
      Matrix x = llt.matrixU();  // xᵀx = Δ^{-1}
      x *= rng.uniform(0.3, 3.0);
      Embedding emb(std::move(x));
      if (rng.below(2) == 0) {
        const auto k = static_cast<Eigen::Index>(n);
        emb = concat_embeddings(emb, Embedding(rng.uniform(0.1, 2.0) * Matrix::Identity(k, k)));
      }
      if (!is_diffusion_embedding(emb, grid).pass) continue;
      const RootLaw law = random_law(rng);
      ModelConfig cfg{law, rng.uniform(0.3, 3.0), std::move(emb), random_prior(n, rng)};
      auto data = random_dataset(n, random_size(0, 12, rng), law, rng);
      return MonotonicityInstance{std::move(cfg), std::move(data), rng.below(n)};
    }
  };
}

InstanceGenerator intro_family(std::size_t max_alternatives) {
  return [max_alternatives](RngStream& rng) {
    const std::size_t n = random_size(2, std::max<std::size_t>(2, max_alternatives), rng);
    Matrix x = Matrix::Zero(2, static_cast<Eigen::Index>(n));
    x(0, 0) = 1.0;
    x(0, 1) = 2.0;
    for (Eigen::Index a = 2; a < x.cols(); ++a) {
      x(0, a) = rng.normal();
      x(1, a) = rng.normal();
    }
    const RootLaw law(RootLawKind::uniform);
    ModelConfig cfg{law, 1.0, Embedding(std::move(x)), Matrix::Zero(n, n)};
    auto data = random_dataset(n, random_size(0, 4, rng), law, rng);
    return MonotonicityInstance{std::move(cfg), std::move(data), 0};
  };
}

InstanceGenerator gaussian_family(std::size_t num_alternatives, std::size_t dims) {
  if (num_alternatives < 2) throw std::invalid_argument("gaussian_family: needs two alternatives");
  return [num_alternatives, dims](RngStream& rng) {
    const auto n = static_cast<Eigen::Index>(num_alternatives);
    Matrix x(static_cast<Eigen::Index>(dims), n);
    for (auto& v : x.reshaped()) v = rng.normal();
    const RootLaw law = random_law(rng);
    ModelConfig cfg{law, rng.uniform(0.3, 3.0), Embedding(std::move(x)), random_prior(num_alternatives, rng)};
    auto data = random_dataset(num_alternatives, random_size(0, 12, rng), law, rng);
    return MonotonicityInstance{std::move(cfg), std::move(data), rng.below(num_alternatives)};
  };
}

}  // namespace lgbt
