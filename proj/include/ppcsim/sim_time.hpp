#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace ppcsim {

// Simulation clock value: integer day (one period = one day) plus an
// intra-day offset in minutes. Ordering is lexicographic (day, minute).
struct SimTime {
  int32_t day = 0;
  double minute = 0.0;

  static constexpr SimTime day_start(int32_t d) { return SimTime{d, 0.0}; }

  double as_days(double minutes_per_day) const {
    return static_cast<double>(day) + minute / minutes_per_day;
  }

  double total_minutes(double minutes_per_day) const {
    return static_cast<double>(day) * minutes_per_day + minute;
  }

  // t + delta minutes, normalized so that 0 <= minute < minutes_per_day.
  SimTime plus_minutes(double delta, double minutes_per_day) const {
    double m = minute + delta;
    int32_t d = day;
    if (m >= minutes_per_day) {
      double carry = std::floor(m / minutes_per_day);
      d += static_cast<int32_t>(carry);
      m -= carry * minutes_per_day;
      if (m >= minutes_per_day) {  // FP edge after the subtraction
        m -= minutes_per_day;
        ++d;
      }
    }
    return SimTime{d, m};
  }

  friend constexpr bool operator==(const SimTime&, const SimTime&) = default;
  friend constexpr auto operator<=>(const SimTime&, const SimTime&) = default;
};

}  // namespace ppcsim
