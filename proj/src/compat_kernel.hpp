#pragma once

#include <cmath>

#include "turboreg/types.hpp"

namespace turboreg::detail {

/// Length-consistency test shared by every graph builder so all paths agree
/// bit-for-bit. Closed threshold on non-squared distances.
inline bool compatible(const Correspondence& a, const Correspondence& b, double tau) {
  const double ds = (a.source - b.source).norm();
  const double dt = (a.target - b.target).norm();
  return std::abs(ds - dt) <= tau;
}

}  // namespace turboreg::detail
