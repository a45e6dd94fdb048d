#pragma once

#include <string>
#include <string_view>

#include "lgbt/rng.hpp"

namespace lgbt {

enum class RootLawKind { uniform, binary, gaussian };

/// Comparison noise distribution f, symmetric around zero.
///
///   uniform   f = U[-1, 1],        range [-1, 1]
///   binary    f = {-1, +1} w.p. ½, range {-1, +1}
///   gaussian  f = N(0, 1),         range ℝ (no maximum)
class RootLaw {
 public:
  constexpr explicit RootLaw(RootLawKind kind = RootLawKind::uniform) : kind_(kind) {}

  static RootLaw parse(std::string_view name);

  constexpr RootLawKind kind() const { return kind_; }
  std::string name() const;

  /// sup of the comparison range; +inf for the gaussian law.
  double range_sup() const;
  bool has_max() const;
  bool in_range(double r) const;
  /// Variance of f, i.e. Φ''(0).
  double variance() const;

  friend constexpr bool operator==(RootLaw, RootLaw) = default;

 private:
  RootLawKind kind_;
};

/// Cumulant-generating function Φ_f(t) = log E_f[e^{rt}].
double phi(RootLaw law, double t);
double phi_prime(RootLaw law, double t);
double phi_second(RootLaw law, double t);

/// Exact draw from p(r | θ) ∝ f(r) e^{rθ}.
double sample_comparison(RootLaw law, double theta, RngStream& rng);

}  // namespace lgbt
