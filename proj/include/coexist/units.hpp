#pragma once

#include <cmath>
#include <numbers>

namespace coexist {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

inline constexpr double kDefaultDbFloor = -250.0;

/// dB with a floor for zero (or sub-floor) values, so outputs never carry -inf.
inline double to_db_floored(double linear, double floor_db = kDefaultDbFloor) {
  if (!(linear > 0.0)) return floor_db;
  const double db = linear_to_db(linear);
  return db < floor_db ? floor_db : db;
}

}  // namespace coexist
