#pragma once

#include <string>
#include <vector>

#include "fams/types.hpp"

namespace fams {

struct Perforation {
  Medium medium = Medium::Matrix;  ///< Matrix or Fracture
  int network = -1;                ///< fracture network id when medium == Fracture
  int cell = 0;                    ///< matrix cell, or local cell index within the network
  double pi = 1.0;                 ///< productivity index (m^3)
};

enum class WellControl { Pressure, Rate };

struct Well {
  std::string name;
  std::vector<Perforation> perforations;
  WellControl control = WellControl::Pressure;
  double value = 0.0;  ///< bottom-hole pressure (Pa) or total rate (m^3/s, positive = injection)
};

/// Throws InputError unless the well has >= 1 perforation with PI > 0.
void validate_well(const Well& well);

}  // namespace fams
