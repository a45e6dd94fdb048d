#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lgbt/embedding.hpp"
#include "lgbt/laplacian.hpp"
#include "lgbt/parallel.hpp"
#include "lgbt/rng.hpp"

namespace lgbt {

// ---------------------------------------------------------------------------
// Diffusion embeddings
// ---------------------------------------------------------------------------

/// 50 log-spaced points in [1e-6, 1e6].
std::vector<double> default_lambda_grid();

struct DiffusionReport {
  bool pass = true;
  std::optional<double> violating_lambda;
  /// Smallest row-sum margin of (X + λI)^{-1} over the grid, relative to its
  /// largest entry.
  double min_relative_margin = 0.0;
};

/// Checks that (X + λI)^{-1} is super-Laplacian for every λ in the grid. This
/// is a sampled necessary condition: a PASS does not prove the embedding is a
/// diffusion embedding, a FAIL disproves it.
DiffusionReport is_diffusion_embedding(const Embedding& x, std::span<const double> lambda_grid,
                                       double tol = kPredicateTol);

/// Closed-form inverse of blockdiag(J_{A_i}) + μI for the class structure in
/// `labels`: blockwise (1/μ)(I - J/(A_i + μ)).
Matrix one_hot_gram_inverse(std::span<const std::size_t> labels, double mu);

// ---------------------------------------------------------------------------
// Good embeddings
// ---------------------------------------------------------------------------

/// M = (I + XY)^{-1} X. x is Y-good iff M is max-diagonally dominant.
Matrix goodness_matrix(const Matrix& gram, const Matrix& y);

/// Exact criterion for two alternatives: -√(ab) ≤ c ≤ min(a, b) for
/// X = [[a, c], [c, b]].
bool good_check_exact_A2(const Matrix& gram, double tol = kPredicateTol);

/// Exact criterion for a single feature: positive entries share a value u,
/// negative entries share a value -v (zeros allowed).
bool good_check_exact_D1(std::span<const double> row, double tol = kPredicateTol);

enum class GoodnessVerdict { good, not_good, undetermined };
const char* verdict_name(GoodnessVerdict v);

struct GoodnessWitness {
  Matrix y;  // the Laplacian (already scaled) on which dominance fails
  std::size_t a;
  std::size_t b;
  double margin;  // M_aa - M_ab < 0
  std::size_t trial;
};

struct GoodnessReport {
  GoodnessVerdict verdict = GoodnessVerdict::undetermined;
  std::optional<GoodnessWitness> witness;
  std::size_t trials = 0;  // (Laplacian, scale) pairs evaluated
  bool exact = false;      // verdict comes from a closed-form criterion
  double min_margin = 0.0;
};

struct GoodnessOptions {
  std::size_t n_laplacians = 2000;
  std::vector<double> scales{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  double edge_probability = 0.5;
  double tol = kPredicateTol;
  /// Laplacians evaluated (at every scale) before the random ones.
  std::vector<Matrix> injected;
  bool use_exact_shortcuts = true;
};

/// Monte Carlo falsifier of goodness. Trial k = (Laplacian i, scale j) with
/// k = i·|scales| + j; Laplacian i is drawn from rng.split(i). The witness is
/// the lowest failing trial index, so serial and parallel runs agree.
GoodnessReport good_check_monte_carlo(const Embedding& x, const GoodnessOptions& options, const RngStream& rng,
                                      Execution exec = Execution::serial);

/// λ_min = 3√A ‖xᵀx‖_F / DiagDom(σ²Y). [I ; x/λ] is Y-good for λ > λ_min.
double identity_padding_bound(const Embedding& x, const Matrix& y, double sigma);

}  // namespace lgbt
