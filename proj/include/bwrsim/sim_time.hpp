#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

namespace bwrsim {

// Fatal violation of a model precondition or invariant.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Bad scenario configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Simulation clock value, integer microseconds since simulation start.
// One LTE subframe is 1000 ticks; every model constant is an exact
// multiple of a tick, so time arithmetic never touches floating point.
class SimTime {
 public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}

  static constexpr SimTime from_us(std::int64_t us) { return SimTime(us); }
  static constexpr SimTime from_ms(std::int64_t ms) { return SimTime(ms * 1000); }

  constexpr std::int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1000.0; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
  SimTime& operator+=(SimTime o) { us_ += o.us_; return *this; }

 private:
  std::int64_t us_ = 0;
};

constexpr std::int64_t kSubframeUs = 1000;

// Scheduling instant of subframe `sf` on an LTE grid with sub-subframe
// offset `offset_us` (default grid offset is the SR offset, 500 us).
constexpr SimTime subframe_tick(std::int64_t sf, std::int64_t offset_us) {
  return SimTime(sf * kSubframeUs + offset_us);
}

}  // namespace bwrsim
