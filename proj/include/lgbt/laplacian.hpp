#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "lgbt/rng.hpp"
#include "lgbt/root_law.hpp"

namespace lgbt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Dataset;

/// Default relative tolerance for matrix predicates (scaled by max |entry|).
inline constexpr double kPredicateTol = 1e-9;

/// Raised when a factorization that should succeed does not.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double max_abs_entry(const Matrix& m);
bool is_symmetric(const Matrix& m, double tol = 1e-10);

/// Off-diagonals ≤ 0 and zero row sums. Throws std::invalid_argument on an
/// asymmetric or non-square input.
bool is_laplacian(const Matrix& m, double tol = kPredicateTol);

/// Off-diagonals ≤ 0 and Δ_aa > -Σ_{b≠a} Δ_ab strictly.
bool is_super_laplacian(const Matrix& m, double tol = kPredicateTol);

/// Smallest M_aa - M_ab over ordered pairs a ≠ b, with the arg-min pair.
struct DominanceMargin {
  double margin;
  std::size_t a;
  std::size_t b;
};
DominanceMargin max_diag_margin(const Matrix& m);

/// M_aa ≥ M_ab - tol·scale for every a ≠ b.
bool max_diag_dominant(const Matrix& m, double tol = kPredicateTol);

/// Laplacian S_ab of the graph with the single edge (a, b) of weight w.
Matrix single_edge_laplacian(std::size_t n, std::size_t a, std::size_t b, double w = 1.0);

/// Laplacian of the complete graph with unit weights, n·I - J.
Matrix complete_graph_laplacian(std::size_t n);

/// Hessian in θ of Σ_D Φ(θ_a - θ_b): H_ab = -N_ab Φ''(θ_ab), rows summing to 0.
Matrix hessian_of_dataset(const Dataset& data, const Vector& theta, RootLaw law);

/// DiagDom(Y) = min_{a≠b} (I+Y)^{-1}_aa - (I+Y)^{-1}_ab.
///
/// The padding bound applies this to σ²Y; callers pass the scaled matrix.
double diag_dom(const Matrix& y);

/// Whether Δ^{-1} is max-diagonally dominant (a test oracle; expected true
/// for every super-Laplacian).
bool inverse_dominance_check(const Matrix& delta, double tol = kPredicateTol);

/// Inverse of a symmetric positive definite matrix via Cholesky.
Matrix spd_inverse(const Matrix& m);

/// Erdős–Rényi mask with edge probability p, weights |N(0,1)|.
Matrix random_laplacian(std::size_t n, RngStream& rng, double edge_probability = 0.5);

/// random_laplacian + κ·I with κ ~ U(0.1, 2).
Matrix random_super_laplacian(std::size_t n, RngStream& rng);

}  // namespace lgbt
