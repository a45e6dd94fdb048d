#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lgbt/dataset.hpp"
#include "lgbt/model.hpp"
#include "lgbt/parallel.hpp"
#include "lgbt/rng.hpp"

namespace lgbt {

inline constexpr double kMonotonicitySlack = 1e-7;

/// Sequence of dataset operations meant to favor `target`.
struct OperationTrace {
  std::vector<Operation> ops;
  std::size_t target = 0;
  bool claims_favoring = true;
};

struct TraceOptions {
  std::size_t min_length = 1;
  std::size_t max_length = 10;
};

/// Random trace mixing all four operation kinds, each favoring `target` when
/// applied to the dataset produced by the previous steps. Appends are skipped
/// for laws whose range has no maximum.
OperationTrace random_favoring_trace(const Dataset& start, std::size_t target, RootLaw law, RngStream& rng,
                                     const TraceOptions& options = {});

struct MonotonicityFailure {
  std::size_t step;
  double drop;  // θ*_a(after) - θ*_a(before), < -slack
  FitResult before;
  FitResult after;
};

struct MonotonicityReport {
  bool pass = true;
  std::size_t steps = 0;
  std::optional<MonotonicityFailure> failure;
  /// Smallest θ*_a change over all steps.
  double worst_change = 0.0;
  /// Largest ‖Δθ*‖∞ across exchange and shuffle steps.
  double max_neutral_change = 0.0;
};

/// Fits before and after every step; fails at the first step where θ*_a
/// drops by more than `slack`. Throws std::invalid_argument if the trace
/// contains an operation that does not favor the target.
MonotonicityReport assert_monotone(const ModelConfig& cfg, const Dataset& data, const OperationTrace& trace,
                                   double slack = kMonotonicitySlack, const SolverOptions& solver = {});

// ---------------------------------------------------------------------------
// Sensitivity of θ* along the smoothened loss 𝓛_λ(·|D, o)
// ---------------------------------------------------------------------------

struct SensitivitySetup {
  ModelConfig cfg;
  Dataset data;
  Operation op;  // Append or Update
  double mu = 0.0;

  /// X = σ² xᵀx.
  Matrix scaled_gram() const;
  Deformation deformation(double weight) const;
};

/// Minimizer of 𝓛_μ(·|D, o).
FitResult smoothed_fit(const SensitivitySetup& setup, const SolverOptions& solver = {});

/// dθ*_λ/dλ at λ = μ for update(n, r) with D_n = (a, b, s):
///   (r - s) (I + X(L + H))^{-1} X e_ab.
Vector sensitivity_update(const SensitivitySetup& setup, const FitResult& fit_at_mu, std::size_t n, double r);

/// dθ*_λ/dλ at λ = μ for append(a, b, r):
///   (r - Φ'(θ*_ab)) (I + X(L + H + μ Φ''(θ*_ab) S_ab))^{-1} X e_ab.
Vector sensitivity_append(const SensitivitySetup& setup, const FitResult& fit_at_mu, std::size_t a,
                          std::size_t b, double r);

/// Dispatches on setup.op.
Vector sensitivity(const SensitivitySetup& setup, const FitResult& fit_at_mu);

/// ∫₀¹ dθ*_λ/dλ dλ by composite Simpson over `points` equally spaced μ
/// (odd, ≥ 3), re-solving the smoothened problem at each node.
Vector path_integral(const SensitivitySetup& setup, std::size_t points = 21, const SolverOptions& solver = {});

/// Same integral by adaptive Simpson: panels are halved until the Richardson
/// estimate drops below tolerance * |integral| (or max_depth is reached).
/// Stiff instances (large σ, binary law) move θ* mostly near μ = 0 and need it.
Vector path_integral_adaptive(const SensitivitySetup& setup, double tolerance = 1e-6, int max_depth = 20,
                              const SolverOptions& solver = {});

// ---------------------------------------------------------------------------
// Violation search
// ---------------------------------------------------------------------------

struct MonotonicityInstance {
  ModelConfig cfg;
  Dataset data;
  std::size_t target = 0;
};

using InstanceGenerator = std::function<MonotonicityInstance(RngStream&)>;

/// One-step witness: applying `op` to `data` lowers θ*_target by `drop`.
struct ViolationWitness {
  ModelConfig cfg;
  Dataset data;
  Operation op;
  std::size_t target = 0;
  double drop = 0.0;
  std::size_t trial = 0;
};

/// Re-fits the witness and returns θ*_target(op(D)) - θ*_target(D).
double replay_witness(const ViolationWitness& w, const SolverOptions& solver = {});

/// Trial t draws an instance and a favoring trace from rng.split(t). Returns
/// the lowest failing trial, shrunk greedily (dropping samples, zeroing
/// embedding entries, removing Laplacian edges) while the failure persists.
std::optional<ViolationWitness> hunt_violation(const InstanceGenerator& generator, const RngStream& rng,
                                               std::size_t budget, double slack = kMonotonicitySlack,
                                               Execution exec = Execution::serial);

struct AuditSummary {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::optional<std::size_t> first_failing_trial;
  std::optional<OperationTrace> first_failing_trace;
  std::optional<MonotonicityFailure> first_failure;
  double worst_change = 0.0;
};

/// Runs `trials` random favoring traces (random target per trial) from `data`.
AuditSummary run_monotonicity_audit(const ModelConfig& cfg, const Dataset& data, std::size_t trials,
                                    const RngStream& rng, double slack = kMonotonicitySlack,
                                    Execution exec = Execution::serial);

// Instance families for hunt_violation and the monotonicity suites.

/// Random comparisons among `num_alternatives` with random true scores.
Dataset random_dataset(std::size_t num_alternatives, std::size_t size, RootLaw law, RngStream& rng);

/// x = I, L = 0, random law, σ and dataset.
InstanceGenerator classic_family(RootLaw law, std::size_t max_alternatives = 8);
/// One-hot classes stacked over sI with a random Laplacian prior.
InstanceGenerator one_hot_family(std::size_t max_alternatives = 8);
/// Embeddings whose Gram is the inverse of a random super-Laplacian (possibly
/// padded by sI), kept only if they pass is_diffusion_embedding.
InstanceGenerator diffusion_family(std::size_t max_alternatives = 8);
/// Two alternatives embedded at (1, 0) and (2, 0) plus random extras.
InstanceGenerator intro_family(std::size_t max_alternatives = 4);
/// I.i.d. standard Gaussian D×A embeddings.
InstanceGenerator gaussian_family(std::size_t num_alternatives, std::size_t dims);

}  // namespace lgbt
