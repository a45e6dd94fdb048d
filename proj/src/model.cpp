#include "lgbt/model.hpp"

#include <cmath>
#include <limits>

namespace lgbt {

namespace {

// Shared evaluation of the (possibly smoothened) objective.
struct Objective {
  const ModelConfig& cfg;
  const Dataset& data;
  const Deformation* extra;

  Vector scores(const Vector& beta) const { return cfg.embedding.matrix().transpose() * beta; }

  double value(const Vector& beta) const {
    const Vector theta = scores(beta);
    const double s2 = cfg.sigma * cfg.sigma;
    double total = beta.squaredNorm() / (2.0 * s2) + 0.5 * theta.dot(cfg.laplacian * theta);
    for (const auto& s : data.samples()) {
      const double t = theta(s.a) - theta(s.b);
      total += phi(cfg.law, t) - s.r * t;
    }
    if (extra) {
      const double t = theta(extra->a) - theta(extra->b);
      if (extra->kind == Deformation::Kind::append)
        total += extra->weight * (phi(cfg.law, t) - extra->r * t);
      else
        total -= extra->weight * extra->r * t;
    }
    return total;
  }

  Vector grad(const Vector& beta) const {
    const Vector theta = scores(beta);
    Vector g_theta = cfg.laplacian * theta;
    for (const auto& s : data.samples()) {
      const double d = phi_prime(cfg.law, theta(s.a) - theta(s.b)) - s.r;
      g_theta(s.a) += d;
      g_theta(s.b) -= d;
    }
    if (extra) {
      double d = -extra->weight * extra->r;
      if (extra->kind == Deformation::Kind::append)
        d = extra->weight * (phi_prime(cfg.law, theta(extra->a) - theta(extra->b)) - extra->r);
      g_theta(extra->a) += d;
      g_theta(extra->b) -= d;
    }
    return beta / (cfg.sigma * cfg.sigma) + cfg.embedding.matrix() * g_theta;
  }

  Matrix hess(const Vector& beta) const {
    const Vector theta = scores(beta);
    Matrix m = cfg.laplacian + hessian_of_dataset(data, theta, cfg.law);
    if (extra && extra->kind == Deformation::Kind::append) {
      const double w = extra->weight * phi_second(cfg.law, theta(extra->a) - theta(extra->b));
      m(extra->a, extra->a) += w;
      m(extra->b, extra->b) += w;
      m(extra->a, extra->b) -= w;
      m(extra->b, extra->a) -= w;
    }
    const Matrix& x = cfg.embedding.matrix();
    Matrix h = x * m * x.transpose();
    h.diagonal().array() += 1.0 / (cfg.sigma * cfg.sigma);
    return h;
  }
};

void check_shapes(const ModelConfig& cfg, const Dataset& data, const Vector& beta) {
  if (data.num_alternatives() != cfg.alternatives())
    throw std::invalid_argument("dataset and embedding disagree on the number of alternatives");
  if (static_cast<std::size_t>(beta.size()) != cfg.dims())
    throw std::invalid_argument("β has length " + std::to_string(beta.size()) + ", expected " +
                                std::to_string(cfg.dims()));
}

FitResult newton(const Objective& obj, const SolverOptions& opt) {
  obj.cfg.validate();
  const auto dims = static_cast<Eigen::Index>(obj.cfg.dims());
  Vector beta = opt.start ? *opt.start : Vector::Zero(dims);
  check_shapes(obj.cfg, obj.data, beta);

  Vector g = obj.grad(beta);
  const double threshold = opt.tolerance * std::max(1.0, g.norm());
  constexpr double eps = std::numeric_limits<double>::epsilon();

  std::size_t iter = 0;
  bool stalled = false;
  for (; iter < opt.max_iterations; ++iter) {
    if (g.norm() <= threshold) break;

    Eigen::LLT<Matrix> llt(obj.hess(beta));
    if (llt.info() != Eigen::Success) throw NumericalError("Newton system is not positive definite");
    const Vector step = -llt.solve(g);
    // The step no longer moves β in floating point: the gradient is at its
    // roundoff floor, so a tighter tolerance is unreachable.
    if (step.norm() <= 64.0 * eps * (1.0 + beta.norm())) {
      stalled = true;
      break;
    }
    const double f = obj.value(beta);
    const double slope = g.dot(step);

    Vector next = beta + step;
    // Below loss roundoff the Armijo test is noise; the full Newton step is
    // inside the quadratic-convergence region there.
    if (-slope > 64.0 * eps * (1.0 + std::abs(f))) {
      double t = 1.0;
      while (obj.value(next) > f + opt.armijo_c * t * slope) {
        t *= 0.5;
        if (t < 1e-12) {
          throw ConvergenceError("line search failed to find a descent step", iter, g.norm());
        }
        next = beta + t * step;
      }
    }
    beta = std::move(next);
    g = obj.grad(beta);
  }

  const double gn = g.norm();
  if (gn > threshold && !stalled)
    throw ConvergenceError("Newton solver hit the iteration cap (" + std::to_string(opt.max_iterations) +
                               ") with gradient norm " + std::to_string(gn),
                           iter, gn);
  FitResult result;
  result.theta_star = obj.scores(beta);
  result.beta_star = std::move(beta);
  result.grad_norm = gn;
  result.iterations = iter;
  return result;
}

}  // namespace

void ModelConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("σ must be a positive finite number");
  const auto n = static_cast<Eigen::Index>(alternatives());
  if (laplacian.rows() != n || laplacian.cols() != n)
    throw std::invalid_argument("Laplacian is " + std::to_string(laplacian.rows()) + "×" +
                                std::to_string(laplacian.cols()) + " but the embedding has " +
                                std::to_string(n) + " alternatives");
  if (!is_laplacian(laplacian)) throw std::invalid_argument("L is not a Laplacian matrix");
}

ModelConfig ModelConfig::classic(RootLaw law, double sigma, std::size_t num_alternatives) {
  const auto n = static_cast<Eigen::Index>(num_alternatives);
  return ModelConfig{law, sigma, Embedding::identity(num_alternatives), Matrix::Zero(n, n)};
}

Deformation Deformation::from_append(const Append& op, double weight) {
  return {Kind::append, op.a, op.b, op.r, weight};
}

Deformation Deformation::from_update(const Update& op, const Dataset& data, double weight) {
  if (op.n >= data.size()) throw std::invalid_argument("update position is outside the dataset");
  const auto& s = data[op.n];
  return {Kind::update, s.a, s.b, op.r - s.r, weight};
}

double loss(const ModelConfig& cfg, const Dataset& data, const Vector& beta) {
  check_shapes(cfg, data, beta);
  return Objective{cfg, data, nullptr}.value(beta);
}

Vector gradient(const ModelConfig& cfg, const Dataset& data, const Vector& beta) {
  check_shapes(cfg, data, beta);
  return Objective{cfg, data, nullptr}.grad(beta);
}

Matrix hessian(const ModelConfig& cfg, const Dataset& data, const Vector& beta) {
  check_shapes(cfg, data, beta);
  return Objective{cfg, data, nullptr}.hess(beta);
}

double loss(const ModelConfig& cfg, const Dataset& data, const Vector& beta, const Deformation& extra) {
  check_shapes(cfg, data, beta);
  return Objective{cfg, data, &extra}.value(beta);
}

Vector gradient(const ModelConfig& cfg, const Dataset& data, const Vector& beta, const Deformation& extra) {
  check_shapes(cfg, data, beta);
  return Objective{cfg, data, &extra}.grad(beta);
}

Matrix hessian(const ModelConfig& cfg, const Dataset& data, const Vector& beta, const Deformation& extra) {
  check_shapes(cfg, data, beta);
  return Objective{cfg, data, &extra}.hess(beta);
}

FitResult fit(const ModelConfig& cfg, const Dataset& data, const SolverOptions& options) {
  return newton(Objective{cfg, data, nullptr}, options);
}

FitResult fit(const ModelConfig& cfg, const Dataset& data, const Deformation& extra,
              const SolverOptions& options) {
  return newton(Objective{cfg, data, &extra}, options);
}

FitResult fit_classic_gbt(RootLaw law, double sigma, const Dataset& data, const SolverOptions& options) {
  return fit(ModelConfig::classic(law, sigma, data.num_alternatives()), data, options);
}

}  // namespace lgbt
