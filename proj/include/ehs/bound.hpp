#pragma once

// Non-negative integers that may be far too large to write down. Values are
// exact while they have at most kExactBits bits; beyond that only log2 is
// kept, and beyond long double range only the fact that it is astronomical.

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ehs {

class BigBound {
 public:
  using Int = boost::multiprecision::cpp_int;
  static constexpr std::size_t kExactBits = std::size_t{1} << 20;

  BigBound() = default;
  BigBound(Int v) : exact_(std::move(v)) {}  // NOLINT: implicit by design
  static BigBound from_log2(long double l2);
  static BigBound tower() {
    BigBound b;
    b.state_ = State::Tower;
    return b;
  }

  bool exact() const noexcept { return state_ == State::Exact; }
  const Int& value() const { return exact_; }
  // +inf for tower values.
  long double log2() const;
  std::optional<std::uint64_t> to_u64() const;
  bool exceeds(std::uint64_t n) const;

  BigBound operator+(const BigBound& o) const;
  // base * 2^exponent
  static BigBound shifted(const Int& base, const BigBound& exponent);

  // Decimal when short, otherwise scientific ("1.432e+89").
  std::string to_string() const;

 private:
  enum class State { Exact, Log2, Tower };
  State state_ = State::Exact;
  Int exact_ = 0;
  long double log2_ = 0;
};

}  // namespace ehs
