#include "lgbt/laplacian.hpp"

#include <cmath>
#include <limits>

#include "lgbt/dataset.hpp"

namespace lgbt {

namespace {

void require_square_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  if (!is_symmetric(m))
    throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
}

}  // namespace

double max_abs_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * max_abs_entry(m);
}

bool is_laplacian(const Matrix& m, double tol) {
  require_square_symmetric(m, "is_laplacian");
  const double slack = tol * max_abs_entry(m);
  const auto n = m.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b)
      if (a != b && m(a, b) > slack) return false;
    if (std::abs(m.row(a).sum()) > slack * static_cast<double>(n)) return false;
  }
  return true;
}

bool is_super_laplacian(const Matrix& m, double tol) {
  require_square_symmetric(m, "is_super_laplacian");
  const double slack = tol * max_abs_entry(m);
  const auto n = m.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b)
      if (a != b && m(a, b) > slack) return false;
    if (!(m.row(a).sum() > slack)) return false;
  }
  return true;
}

DominanceMargin max_diag_margin(const Matrix& m) {
  DominanceMargin best{std::numeric_limits<double>::infinity(), 0, 0};
  const auto n = m.rows();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a == b) continue;
      const double gap = m(a, a) - m(a, b);
      if (gap < best.margin) best = {gap, static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
    }
  return best;
}

bool max_diag_dominant(const Matrix& m, double tol) {
  if (m.rows() < 2) return true;
  return max_diag_margin(m).margin >= -tol * max_abs_entry(m);
}

Matrix single_edge_laplacian(std::size_t n, std::size_t a, std::size_t b, double w) {
  if (a >= n || b >= n || a == b) throw std::invalid_argument("single_edge_laplacian: bad pair");
  Matrix s = Matrix::Zero(n, n);
  s(a, a) = s(b, b) = w;
  s(a, b) = s(b, a) = -w;
  return s;
}

Matrix complete_graph_laplacian(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return static_cast<double>(n) * Matrix::Identity(k, k) - Matrix::Ones(k, k);
}

Matrix hessian_of_dataset(const Dataset& data, const Vector& theta, RootLaw law) {
  const auto n = static_cast<Eigen::Index>(data.num_alternatives());
  if (theta.size() != n) throw std::invalid_argument("hessian_of_dataset: theta has wrong length");
  Matrix h = Matrix::Zero(n, n);
  for (const auto& s : data.samples()) {
    const double w = phi_second(law, theta(s.a) - theta(s.b));
    h(s.a, s.b) -= w;
    h(s.b, s.a) -= w;
    h(s.a, s.a) += w;
    h(s.b, s.b) += w;
  }
  return h;
}

Matrix spd_inverse(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed");
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

double diag_dom(const Matrix& y) {
  if (y.rows() < 2) throw std::invalid_argument("diag_dom: needs at least two alternatives");
  const Matrix inv = spd_inverse(Matrix::Identity(y.rows(), y.cols()) + y);
  return max_diag_margin(inv).margin;
}

bool inverse_dominance_check(const Matrix& delta, double tol) {
  return max_diag_dominant(spd_inverse(delta), tol);
}

Matrix random_laplacian(std::size_t n, RngStream& rng, double edge_probability) {
  Matrix y = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (rng.uniform() >= edge_probability) continue;
      const double w = std::abs(rng.normal());
      y(a, b) = y(b, a) = -w;
      y(a, a) += w;
      y(b, b) += w;
    }
  return y;
}

Matrix random_super_laplacian(std::size_t n, RngStream& rng) {
  Matrix delta = random_laplacian(n, rng);
  const double kappa = rng.uniform(0.1, 2.0);
  delta.diagonal().array() += kappa;
  return delta;
}

}  // namespace lgbt
