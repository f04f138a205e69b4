#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace ehs {

using ConfigId = std::uint32_t;

// An interval in canonical form: its sequence of global configurations.
// Ordered by length first, then lexicographically.
class Interval {
 public:
  Interval() = default;
  explicit Interval(std::vector<ConfigId> configs) : configs_(std::move(configs)) {}
  Interval(std::initializer_list<ConfigId> configs) : configs_(configs) {}

  std::size_t size() const noexcept { return configs_.size(); }
  bool empty() const noexcept { return configs_.empty(); }
  bool is_point() const noexcept { return configs_.size() == 1; }
  ConfigId first() const { return configs_.front(); }
  ConfigId last() const { return configs_.back(); }
  ConfigId operator[](std::size_t i) const { return configs_[i]; }
  const std::vector<ConfigId>& configs() const noexcept { return configs_; }
  std::span<const ConfigId> word() const noexcept { return configs_; }
  auto begin() const noexcept { return configs_.begin(); }
  auto end() const noexcept { return configs_.end(); }

  Interval slice(std::size_t from, std::size_t len) const {
    return Interval(std::vector<ConfigId>(configs_.begin() + static_cast<std::ptrdiff_t>(from),
                                          configs_.begin() + static_cast<std::ptrdiff_t>(from + len)));
  }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend std::strong_ordering operator<=>(const Interval& a, const Interval& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.configs_ <=> b.configs_;
  }

 private:
  std::vector<ConfigId> configs_;
};

// An interval together with the configurations leading to it from the
// initial configuration (excluding the interval's first configuration).
struct AnchoredInterval {
  std::vector<ConfigId> history;
  Interval interval;

  std::size_t total_length() const noexcept { return history.size() + interval.size(); }
};

}  // namespace ehs
