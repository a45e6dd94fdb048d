#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lgbt/model.hpp"
#include "support.hpp"

using namespace lgbt;

namespace {

const RootLaw kUniform(RootLawKind::uniform);

// Written out here rather than taken from the library.
double uniform_phi(double t) { return std::abs(t) < 1e-6 ? t * t / 6 : std::log(std::sinh(t) / t); }
double uniform_phi_prime(double t) { return 1.0 / std::tanh(t) - 1.0 / t; }

template <typename Fn>
double bisect(Fn f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) < 0) == (f(mid) < 0) ? lo = mid : hi = mid;
  }
  return 0.5 * (lo + hi);
}

template <typename Fn>
double golden_section(Fn f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  for (int i = 0; i < 200; ++i) {
    if (f(c) < f(d))
      hi = d;
    else
      lo = c;
    c = hi - g * (hi - lo);
    d = lo + g * (hi - lo);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("two alternatives, one comparison") {
  const auto cfg = ModelConfig::classic(kUniform, 1.0, 2);
  const Dataset data(2, {{0, 1, 1.0}});
  const FitResult r = fit(cfg, data);
  const double t = bisect([](double t) { return t + uniform_phi_prime(2 * t) - 1; }, 1e-3, 1.0);
  CHECK(r.theta_star(0) == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.theta_star(0) == doctest::Approx(0.62243466496375317200).epsilon(1e-12));
  CHECK(r.theta_star(1) == doctest::Approx(-r.theta_star(0)).epsilon(1e-14));
  CHECK(r.grad_norm <= 1e-10);
  CHECK(fit_classic_gbt(kUniform, 1.0, data).theta_star.isApprox(r.theta_star));
}

TEST_CASE("empty dataset gives zero scores") {
  RngStream rng(1);
  const auto cfg = testing::random_config(rng);
  const FitResult r = fit(cfg, Dataset(cfg.alternatives()));
  CHECK(r.theta_star.norm() == 0.0);
  CHECK(r.iterations == 0);
}

TEST_CASE("one-dimensional embedding matches golden-section search") {
  // x = (1, 2), one comparison (1, 2, +1): θ_a = β, minimise β²/2 + Φ(-β) + β.
  const ModelConfig cfg{kUniform, 1.0, Embedding(Matrix{{1.0, 2.0}}), Matrix::Zero(2, 2)};
  const Dataset data(2, {{0, 1, 1.0}});
  const FitResult r = fit(cfg, data);
  const double beta = golden_section([](double b) { return b * b / 2 + uniform_phi(-b) + b; }, -3.0, 3.0);
  CHECK(r.theta_star(0) == doctest::Approx(beta).epsilon(1e-7));
  CHECK(r.theta_star(0) == doctest::Approx(-0.75685289994191164906).epsilon(1e-12));
  CHECK(r.theta_star(1) == doctest::Approx(2 * r.theta_star(0)));
}

TEST_CASE("loss value by hand") {
  Matrix x(1, 3);
  x << 1, 0, -1;
  Matrix l = single_edge_laplacian(3, 0, 2, 0.5);
  const ModelConfig cfg{RootLaw(RootLawKind::gaussian), 2.0, Embedding(x), l};
  const Dataset data(3, {{0, 2, 1.5}});
  Vector beta(1);
  beta << 0.7;
  // θ = (0.7, 0, -0.7); θ_02 = 1.4
  const double want = 0.49 / 8 + 0.5 * 0.5 * 1.4 * 1.4 + (1.4 * 1.4 / 2 - 1.5 * 1.4);
  CHECK(loss(cfg, data, beta) == doctest::Approx(want));
  CHECK_THROWS_AS(loss(cfg, data, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("gradient and Hessian match finite differences") {
  RngStream rng(17);
  for (int i = 0; i < 50; ++i) {
    RngStream s = rng.split(i);
    const auto cfg = testing::random_config(s);
    const Dataset data = random_dataset(cfg.alternatives(), testing::between(0, 15, s), cfg.law, s);
    const Vector beta = testing::gaussian_matrix(static_cast<Eigen::Index>(cfg.dims()), 1, s);
    const Matrix g_fd =
        testing::fd_jacobian([&](const Vector& b) { return Vector::Constant(1, loss(cfg, data, b)); }, beta, 1e-6);
    CHECK(testing::relative_error(gradient(cfg, data, beta), g_fd.transpose()) < 1e-6);
    const Matrix h_fd = testing::fd_jacobian([&](const Vector& b) { return gradient(cfg, data, b); }, beta, 1e-5);
    CHECK(testing::relative_error(hessian(cfg, data, beta), h_fd) < 1e-5);
  }
}

TEST_CASE("fitted gradient vanishes and the minimum is global") {
  RngStream rng(23);
  for (int i = 0; i < 40; ++i) {
    RngStream s = rng.split(i);
    const auto cfg = testing::random_config(s);
    const Dataset data = random_dataset(cfg.alternatives(), testing::between(1, 20, s), cfg.law, s);
    const FitResult r = fit(cfg, data);
    CHECK(gradient(cfg, data, r.beta_star).norm() <= 1e-8);
    CHECK(r.theta_star.isApprox(cfg.embedding.matrix().transpose() * r.beta_star));
    const double best = loss(cfg, data, r.beta_star);
    for (int k = 0; k < 5; ++k) {
      const Vector probe = r.beta_star + 0.1 * testing::gaussian_matrix(r.beta_star.size(), 1, s);
      CHECK(loss(cfg, data, probe) >= best);
    }
  }
}

TEST_CASE("solver options") {
  const auto cfg = ModelConfig::classic(kUniform, 1.0, 2);
  const Dataset data(2, {{0, 1, 1.0}});
  SolverOptions opt;
  opt.max_iterations = 1;
  opt.tolerance = 1e-300;
  CHECK_THROWS_AS(fit(cfg, data, opt), ConvergenceError);

  SolverOptions warm;
  warm.start = fit(cfg, data).beta_star;
  CHECK(fit(cfg, data, warm).iterations == 0);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ModelConfig::classic(kUniform, 0.0, 3).validate(), std::invalid_argument);
  ModelConfig cfg = ModelConfig::classic(kUniform, 1.0, 3);
  cfg.laplacian(0, 1) = 1.0;
  cfg.laplacian(1, 0) = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  ModelConfig shape = ModelConfig::classic(kUniform, 1.0, 3);
  shape.laplacian = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(shape.validate(), std::invalid_argument);
  CHECK_THROWS_AS(fit(ModelConfig::classic(kUniform, 1.0, 3), Dataset(2)), std::invalid_argument);
}

TEST_CASE("smoothened loss interpolates between D and op(D)") {
  RngStream rng(31);
  for (int i = 0; i < 20; ++i) {
    RngStream s = rng.split(i);
    const auto cfg = testing::random_config(s);
    const Dataset data = random_dataset(cfg.alternatives(), testing::between(1, 10, s), cfg.law, s);
    const Update up{s.below(data.size()), sample_comparison(cfg.law, 0.3, s)};
    const Append ap{0, 1, sample_comparison(cfg.law, -0.2, s)};

    CHECK(fit(cfg, data, Deformation::from_update(up, data, 0.0)).theta_star.isApprox(fit(cfg, data).theta_star));
    CHECK(fit(cfg, data, Deformation::from_update(up, data, 1.0))
              .theta_star.isApprox(fit(cfg, update(data, up.n, up.r, cfg.law)).theta_star, 1e-9));
    CHECK(fit(cfg, data, Deformation::from_append(ap, 1.0))
              .theta_star.isApprox(fit(cfg, append(data, ap.a, ap.b, ap.r, cfg.law)).theta_star, 1e-9));

    const Deformation def = Deformation::from_append(ap, 0.4);
    const Vector beta = testing::gaussian_matrix(static_cast<Eigen::Index>(cfg.dims()), 1, s);
    const Matrix g_fd = testing::fd_jacobian(
        [&](const Vector& b) { return Vector::Constant(1, loss(cfg, data, b, def)); }, beta, 1e-6);
    CHECK(testing::relative_error(gradient(cfg, data, beta, def), g_fd.transpose()) < 1e-6);
    const Matrix h_fd =
        testing::fd_jacobian([&](const Vector& b) { return gradient(cfg, data, b, def); }, beta, 1e-5);
    CHECK(testing::relative_error(hessian(cfg, data, beta, def), h_fd) < 1e-5);
  }
  CHECK_THROWS(Deformation::from_update(Update{4, 0.0}, Dataset(2, {{0, 1, 0.0}}), 1.0));
}
