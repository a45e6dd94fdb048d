#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "lgbt/dataset.hpp"
#include "lgbt/embedding.hpp"
#include "lgbt/laplacian.hpp"
#include "lgbt/root_law.hpp"

namespace lgbt {

/// Linear GBT model parameters (f, σ, x, L).
struct ModelConfig {
  RootLaw law;
  double sigma = 1.0;
  Embedding embedding;
  Matrix laplacian;

  std::size_t alternatives() const { return embedding.alternatives(); }
  std::size_t dims() const { return embedding.dims(); }

  /// Throws std::invalid_argument when σ ≤ 0, L is not a Laplacian, or the
  /// shapes disagree.
  void validate() const;

  /// x = I, L = 0: classic generalized Bradley–Terry.
  static ModelConfig classic(RootLaw law, double sigma, std::size_t num_alternatives);
};

struct FitResult {
  Vector beta_star;
  Vector theta_star;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
};

struct SolverOptions {
  /// Stop once ‖∇𝓛‖ ≤ tolerance · max(1, ‖∇𝓛(β₀)‖), or once the Newton step
  /// is below roundoff in β.
  double tolerance = 1e-10;
  std::size_t max_iterations = 200;
  double armijo_c = 1e-4;
  std::optional<Vector> start;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations, double grad_norm)
      : std::runtime_error(what), iterations(iterations), grad_norm(grad_norm) {}
  std::size_t iterations;
  double grad_norm;
};

/// λ-weighted extra term of the smoothened loss:
///   append(a, b, r):  λ (Φ(θ_ab) - r θ_ab)
///   update(n, r):    -λ (r - r_n) θ_{a_n b_n}
/// At λ = 1 the smoothened loss equals the loss on op(D).
struct Deformation {
  enum class Kind { append, update };
  Kind kind;
  std::size_t a;
  std::size_t b;
  double r;       // appended value, or r - r_n for updates
  double weight;  // λ

  static Deformation from_append(const Append& op, double weight);
  /// `data` supplies (a_n, b_n, r_n); the position must exist.
  static Deformation from_update(const Update& op, const Dataset& data, double weight);
};

/// 𝓛(β | D) = ‖β‖²/2σ² + ½θᵀLθ + Σ_D Φ(θ_ab) - r θ_ab, θ = xᵀβ.
double loss(const ModelConfig& cfg, const Dataset& data, const Vector& beta);
Vector gradient(const ModelConfig& cfg, const Dataset& data, const Vector& beta);
/// I/σ² + x(L + H)xᵀ.
Matrix hessian(const ModelConfig& cfg, const Dataset& data, const Vector& beta);

double loss(const ModelConfig& cfg, const Dataset& data, const Vector& beta, const Deformation& extra);
Vector gradient(const ModelConfig& cfg, const Dataset& data, const Vector& beta, const Deformation& extra);
Matrix hessian(const ModelConfig& cfg, const Dataset& data, const Vector& beta, const Deformation& extra);

/// β* = argmin 𝓛(·|D) by damped Newton with Armijo backtracking.
FitResult fit(const ModelConfig& cfg, const Dataset& data, const SolverOptions& options = {});

/// Minimizer of the smoothened loss 𝓛_λ(·|D, o).
FitResult fit(const ModelConfig& cfg, const Dataset& data, const Deformation& extra,
              const SolverOptions& options = {});

FitResult fit_classic_gbt(RootLaw law, double sigma, const Dataset& data, const SolverOptions& options = {});

}  // namespace lgbt
