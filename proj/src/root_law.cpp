#include "lgbt/root_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lgbt {

namespace {

constexpr double kLinearSamplerThreshold = 1e-6;

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw std::domain_error(std::string(what) + ": argument is not finite");
}

// Below |t| = 1 the closed forms cancel catastrophically (coth t - 1/t loses
// about log10(1/t²) digits), so series and continued fractions are used there.
constexpr double kSmall = 1.0;

double uniform_phi(double t) {
  const double a = std::abs(t);
  if (a < kSmall) {
    // sinh(a)/a - 1 = Σ_{k≥1} a^{2k} / (2k+1)!
    const double a2 = a * a;
    double term = a2 / 6.0, sum = 0.0;
    for (int k = 1; k <= 12 && term != 0.0; ++k) {
      sum += term;
      term *= a2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return std::log1p(sum);
  }
  // log(sinh a / a) = a + log(1 - e^{-2a}) - log(2a)
  return a + std::log(-std::expm1(-2.0 * a)) - std::log(2.0 * a);
}

double uniform_phi_prime(double t) {
  if (std::abs(t) < kSmall) {
    // Lambert: coth t - 1/t = t / (3 + t² / (5 + t² / (7 + ...)))
    const double t2 = t * t;
    double d = 3.0 + 2.0 * 16;
    for (int k = 15; k >= 1; --k) d = (2.0 * k + 1.0) + t2 / d;
    return t / d;
  }
  return 1.0 / std::tanh(t) - 1.0 / t;
}

double uniform_phi_second(double t) {
  if (t == 0.0) return 1.0 / 3.0;
  if (std::abs(t) < kSmall) {
    // d/dt (coth t - 1/t) = 1 - L² - 2L/t with L = coth t - 1/t
    const double l = uniform_phi_prime(t);
    return 1.0 - l * l - 2.0 * l / t;
  }
  const double s = std::sinh(t);
  return 1.0 / (t * t) - 1.0 / (s * s);
}

// Inverse CDF of the tilted uniform law for θ ≥ 0.
double tilted_uniform_inverse_cdf(double theta, double u) {
  if (theta < kLinearSamplerThreshold) {
    const double r0 = 2.0 * u - 1.0;
    const double r = r0 + 0.5 * theta * (1.0 - r0 * r0);
    return std::clamp(r, -1.0, 1.0);
  }
  // -1 + log(1 + u(e^{2θ} - 1)) / θ, rewritten to avoid overflow.
  const double r = 1.0 + std::log1p((1.0 - u) * std::expm1(-2.0 * theta)) / theta;
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

RootLaw RootLaw::parse(std::string_view name) {
  if (name == "uniform") return RootLaw(RootLawKind::uniform);
  if (name == "binary") return RootLaw(RootLawKind::binary);
  if (name == "gaussian") return RootLaw(RootLawKind::gaussian);
  throw std::invalid_argument("unknown root law '" + std::string(name) +
                              "' (expected uniform, binary or gaussian)");
}

std::string RootLaw::name() const {
  switch (kind_) {
    case RootLawKind::uniform: return "uniform";
    case RootLawKind::binary: return "binary";
    case RootLawKind::gaussian: return "gaussian";
  }
  return "unknown";
}

double RootLaw::range_sup() const {
  return kind_ == RootLawKind::gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

bool RootLaw::has_max() const { return kind_ != RootLawKind::gaussian; }

bool RootLaw::in_range(double r) const {
  switch (kind_) {
    case RootLawKind::uniform: return r >= -1.0 && r <= 1.0;
    case RootLawKind::binary: return r == 1.0 || r == -1.0;
    case RootLawKind::gaussian: return std::isfinite(r);
  }
  return false;
}

double RootLaw::variance() const { return kind_ == RootLawKind::uniform ? 1.0 / 3.0 : 1.0; }

double phi(RootLaw law, double t) {
  require_finite(t, "phi");
  switch (law.kind()) {
    case RootLawKind::uniform: return uniform_phi(t);
    case RootLawKind::binary: {
      const double a = std::abs(t);
      return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    }
    case RootLawKind::gaussian: return 0.5 * t * t;
  }
  return 0.0;
}

double phi_prime(RootLaw law, double t) {
  require_finite(t, "phi_prime");
  switch (law.kind()) {
    case RootLawKind::uniform: return uniform_phi_prime(t);
    case RootLawKind::binary: return std::tanh(t);
    case RootLawKind::gaussian: return t;
  }
  return 0.0;
}

double phi_second(RootLaw law, double t) {
  require_finite(t, "phi_second");
  switch (law.kind()) {
    case RootLawKind::uniform: return uniform_phi_second(t);
    case RootLawKind::binary: {
      const double c = std::cosh(t);
      return 1.0 / (c * c);
    }
    case RootLawKind::gaussian: return 1.0;
  }
  return 0.0;
}

double sample_comparison(RootLaw law, double theta, RngStream& rng) {
  require_finite(theta, "sample_comparison");
  switch (law.kind()) {
    case RootLawKind::uniform: {
      const double u = rng.uniform();
      return theta >= 0.0 ? tilted_uniform_inverse_cdf(theta, u)
                          : -tilted_uniform_inverse_cdf(-theta, u);
    }
    case RootLawKind::binary: {
      const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * theta));
      return rng.uniform() < p_plus ? 1.0 : -1.0;
    }
    case RootLawKind::gaussian: return theta + rng.normal();
  }
  return 0.0;
}

}  // namespace lgbt
