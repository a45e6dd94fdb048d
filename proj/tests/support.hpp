#pragma once

#include <chrono>
#include <cmath>

#include "lgbt/embedding.hpp"
#include "lgbt/laplacian.hpp"
#include "lgbt/model.hpp"
#include "lgbt/monotonicity.hpp"
#include "lgbt/rng.hpp"

namespace lgbt::testing {

inline RootLaw random_law(RngStream& rng) {
  static constexpr RootLawKind kinds[] = {RootLawKind::uniform, RootLawKind::binary, RootLawKind::gaussian};
  return RootLaw(kinds[rng.below(3)]);
}

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  Matrix m(rows, cols);
  for (auto& v : m.reshaped()) v = rng.normal();
  return m;
}

inline std::size_t between(std::size_t lo, std::size_t hi, RngStream& rng) { return lo + rng.below(hi - lo + 1); }

// Random linear GBT model: Gaussian embedding, optional random Laplacian prior.
inline ModelConfig random_config(RngStream& rng, std::size_t max_alternatives = 8, std::size_t max_dims = 8) {
  const std::size_t n = between(2, max_alternatives, rng);
  const std::size_t d = between(1, max_dims, rng);
  Matrix l = Matrix::Zero(n, n);
  if (rng.below(2)) l = rng.uniform(0.0, 2.0) * random_laplacian(n, rng);
  return ModelConfig{random_law(rng), rng.uniform(0.3, 3.0),
                     Embedding(gaussian_matrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n), rng)),
                     l};
}

inline double relative_error(const Matrix& got, const Matrix& want, double floor = 1e-6) {
  return (got - want).norm() / std::max(want.norm(), floor);
}

// Central differences of the gradient, one column per coordinate.
template <typename Fn>
Matrix fd_jacobian(Fn&& f, const Vector& at, double h) {
  const Vector f0 = f(at);
  Matrix j(f0.size(), at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Vector up = at, down = at;
    up(i) += h;
    down(i) -= h;
    j.col(i) = (f(up) - f(down)) / (2 * h);
  }
  return j;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace lgbt::testing
