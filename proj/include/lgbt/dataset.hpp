#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "lgbt/root_law.hpp"

namespace lgbt {

/// Judgment r of alternative a relative to b. Ids are 0-based in memory
/// (the CSV format is 1-based).
struct ComparisonSample {
  std::size_t a;
  std::size_t b;
  double r;

  friend bool operator==(const ComparisonSample&, const ComparisonSample&) = default;
};

/// (a, b, r) ≃ (b, a, -r).
bool equivalent(const ComparisonSample& lhs, const ComparisonSample& rhs);

/// Ordered list of comparisons over `num_alternatives` alternatives.
/// Duplicated pairs are allowed and accumulate in the loss.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t num_alternatives, std::vector<ComparisonSample> samples = {});

  std::size_t num_alternatives() const { return num_alternatives_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::vector<ComparisonSample>& samples() const { return samples_; }
  const ComparisonSample& operator[](std::size_t n) const { return samples_[n]; }

  /// Throws std::domain_error when a comparison lies outside the law's range.
  void validate(RootLaw law) const;

  /// Same multiset of samples up to the ≃ equivalence, in the same order.
  bool equivalent_to(const Dataset& other) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t num_alternatives_ = 0;
  std::vector<ComparisonSample> samples_;
};

// The four dataset operations. Positions are 0-based; an out-of-range
// position leaves the dataset unchanged.

struct Exchange {
  std::size_t n;
};
struct Shuffle {
  std::size_t count;
  std::vector<std::size_t> perm;  // result[i] = input[perm[i]] for i < count
};
struct Append {
  std::size_t a;
  std::size_t b;
  double r;
};
struct Update {
  std::size_t n;
  double r;
};

using Operation = std::variant<Exchange, Shuffle, Append, Update>;

/// Rewrites entry n as its equivalent (b, a, -r).
Dataset exchange(const Dataset& data, std::size_t n);
Dataset shuffle(const Dataset& data, std::size_t count, const std::vector<std::size_t>& perm);
Dataset append(const Dataset& data, std::size_t a, std::size_t b, double r, RootLaw law);
Dataset update(const Dataset& data, std::size_t n, double r, RootLaw law);

Dataset apply(const Operation& op, const Dataset& data, RootLaw law);

/// Whether `op`, applied to `data`, favors a over b. Exchange and shuffle are
/// neutral and always qualify; an append must be ≃ (a, b, max 𝓡); an update
/// must act on an (a, b) sample and move r toward a.
bool op_favors(const Operation& op, std::size_t a, std::size_t b, const Dataset& data, RootLaw law);

/// Whether `op` favors a over some other alternative (or is neutral).
bool op_favors_alternative(const Operation& op, std::size_t a, const Dataset& data, RootLaw law);

const char* operation_name(const Operation& op);

}  // namespace lgbt
