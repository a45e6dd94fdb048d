#include "lgbt/rng.hpp"

namespace lgbt {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : key_(splitmix64(seed)) {}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGamma);
}

RngStream RngStream::split(std::uint64_t index) const {
  RngStream child;
  child.key_ = splitmix64(key_ ^ splitmix64(index ^ 0xa0761d6478bd642fULL));
  return child;
}

double RngStream::uniform() {
  // 53 random bits, shifted half a ulp off zero.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() { return normal_(*this); }

std::uint64_t RngStream::below(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(*this);
}

}  // namespace lgbt
