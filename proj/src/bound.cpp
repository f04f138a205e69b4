#include "ehs/bound.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace ehs {

BigBound BigBound::from_log2(long double l2) {
  if (!std::isfinite(l2)) return tower();
  BigBound b;
  b.state_ = State::Log2;
  b.log2_ = l2;
  return b;
}

long double BigBound::log2() const {
  switch (state_) {
    case State::Tower: return std::numeric_limits<long double>::infinity();
    case State::Log2: return log2_;
    case State::Exact: break;
  }
  if (exact_ == 0) return -std::numeric_limits<long double>::infinity();
  std::size_t msb = boost::multiprecision::msb(exact_);
  if (msb < 62) return std::log2(static_cast<long double>(exact_.convert_to<std::uint64_t>()));
  Int top = exact_ >> (msb - 61);
  return std::log2(static_cast<long double>(top.convert_to<std::uint64_t>())) + static_cast<long double>(msb - 61);
}

std::optional<std::uint64_t> BigBound::to_u64() const {
  if (!exact() || exact_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return exact_.convert_to<std::uint64_t>();
}

bool BigBound::exceeds(std::uint64_t n) const {
  if (!exact()) return true;  // only non-exact once far beyond 64 bits
  return exact_ > n;
}

BigBound BigBound::operator+(const BigBound& o) const {
  if (exact() && o.exact()) return BigBound(exact_ + o.exact_);
  if (state_ == State::Tower || o.state_ == State::Tower) return tower();
  long double a = log2(), b = o.log2();
  long double hi = std::max(a, b), lo = std::min(a, b);
  return from_log2(hi + std::log2(1.0L + std::exp2(lo - hi)));
}

BigBound BigBound::shifted(const Int& base, const BigBound& exponent) {
  if (base == 0) return BigBound(Int(0));
  if (exponent.exact()) {
    std::size_t base_bits = boost::multiprecision::msb(base) + 1;
    if (exponent.exact_ + base_bits <= kExactBits) return BigBound(base << exponent.exact_.convert_to<std::size_t>());
  }
  if (exponent.state_ == State::Tower) return tower();
  long double e = exponent.exact() ? exponent.exact_.convert_to<long double>() : std::exp2(exponent.log2_);
  return from_log2(BigBound(base).log2() + e);
}

std::string BigBound::to_string() const {
  if (state_ == State::Tower) return "astronomical (beyond 2^(2^16000))";
  if (exact() && exact_ < Int("100000000000000000000")) return exact_.str();
  long double l10 = log2() * std::log10(2.0L);
  long double e = std::floor(l10);
  long double mant = std::pow(10.0L, l10 - e);
  if (mant >= 9.9995L) {
    mant /= 10;
    e += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3Lfe+%.0Lf", mant, e);
  return buf;
}

}  // namespace ehs
