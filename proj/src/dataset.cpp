#include "lgbt/dataset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lgbt {

namespace {

void require_in_range(double r, RootLaw law) {
  if (!law.in_range(r))
    throw std::domain_error("comparison value " + std::to_string(r) + " is outside the range of the " +
                            law.name() + " root law");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool equivalent(const ComparisonSample& lhs, const ComparisonSample& rhs) {
  if (lhs.a == rhs.a && lhs.b == rhs.b) return lhs.r == rhs.r;
  return lhs.a == rhs.b && lhs.b == rhs.a && lhs.r == -rhs.r;
}

Dataset::Dataset(std::size_t num_alternatives, std::vector<ComparisonSample> samples)
    : num_alternatives_(num_alternatives), samples_(std::move(samples)) {
  for (const auto& s : samples_) {
    if (s.a >= num_alternatives_ || s.b >= num_alternatives_)
      throw std::invalid_argument("comparison references an alternative outside [0, " +
                                  std::to_string(num_alternatives_) + ")");
    if (s.a == s.b) throw std::invalid_argument("comparison of an alternative with itself");
  }
}

void Dataset::validate(RootLaw law) const {
  for (const auto& s : samples_) require_in_range(s.r, law);
}

bool Dataset::equivalent_to(const Dataset& other) const {
  if (num_alternatives_ != other.num_alternatives_ || size() != other.size()) return false;
  for (std::size_t n = 0; n < size(); ++n)
    if (!equivalent(samples_[n], other.samples_[n])) return false;
  return true;
}

Dataset exchange(const Dataset& data, std::size_t n) {
  auto samples = data.samples();
  if (n < samples.size()) samples[n] = {samples[n].b, samples[n].a, -samples[n].r};
  return Dataset(data.num_alternatives(), std::move(samples));
}

Dataset shuffle(const Dataset& data, std::size_t count, const std::vector<std::size_t>& perm) {
  if (data.size() < count) return data;
  if (perm.size() != count) throw std::invalid_argument("shuffle: permutation length differs from count");
  std::vector<bool> seen(count, false);
  for (auto p : perm) {
    if (p >= count || seen[p]) throw std::invalid_argument("shuffle: not a permutation");
    seen[p] = true;
  }
  auto samples = data.samples();
  for (std::size_t i = 0; i < count; ++i) samples[i] = data[perm[i]];
  return Dataset(data.num_alternatives(), std::move(samples));
}

Dataset append(const Dataset& data, std::size_t a, std::size_t b, double r, RootLaw law) {
  require_in_range(r, law);
  auto samples = data.samples();
  samples.push_back({a, b, r});
  return Dataset(data.num_alternatives(), std::move(samples));
}

Dataset update(const Dataset& data, std::size_t n, double r, RootLaw law) {
  require_in_range(r, law);
  auto samples = data.samples();
  if (n < samples.size()) samples[n].r = r;
  return Dataset(data.num_alternatives(), std::move(samples));
}

Dataset apply(const Operation& op, const Dataset& data, RootLaw law) {
  return std::visit(overloaded{
                        [&](const Exchange& e) { return exchange(data, e.n); },
                        [&](const Shuffle& s) { return shuffle(data, s.count, s.perm); },
                        [&](const Append& p) { return append(data, p.a, p.b, p.r, law); },
                        [&](const Update& u) { return update(data, u.n, u.r, law); },
                    },
                    op);
}

bool op_favors(const Operation& op, std::size_t a, std::size_t b, const Dataset& data, RootLaw law) {
  return std::visit(overloaded{
                        [](const Exchange&) { return true; },
                        [](const Shuffle&) { return true; },
                        [&](const Append& p) {
                          if (!law.has_max()) return false;
                          return equivalent({p.a, p.b, p.r}, {a, b, law.range_sup()});
                        },
                        [&](const Update& u) {
                          if (u.n >= data.size()) return true;  // identity
                          const auto& s = data[u.n];
                          if (s.a == a && s.b == b) return u.r >= s.r;
                          if (s.a == b && s.b == a) return u.r <= s.r;
                          return false;
                        },
                    },
                    op);
}

bool op_favors_alternative(const Operation& op, std::size_t a, const Dataset& data, RootLaw law) {
  if (const auto* p = std::get_if<Append>(&op)) {
    if (p->a == a) return op_favors(op, a, p->b, data, law);
    if (p->b == a) return op_favors(op, a, p->a, data, law);
    return false;
  }
  if (const auto* u = std::get_if<Update>(&op)) {
    if (u->n >= data.size()) return true;
    const auto& s = data[u->n];
    if (s.a == a) return op_favors(op, a, s.b, data, law);
    if (s.b == a) return op_favors(op, a, s.a, data, law);
    return false;
  }
  return true;
}

const char* operation_name(const Operation& op) {
  return std::visit(overloaded{
                        [](const Exchange&) { return "exchange"; },
                        [](const Shuffle&) { return "shuffle"; },
                        [](const Append&) { return "append"; },
                        [](const Update&) { return "update"; },
                    },
                    op);
}

}  // namespace lgbt
