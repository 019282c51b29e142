/**
 * @file types.hpp
 * @brief Small vocabulary types shared across the library.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace fams {

/// Raised on malformed user input (geometry, scenario files, configuration).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class Medium : std::uint8_t { Matrix, Fracture, Well };

/// Wirebasket classes, ordered by rank (Interior lowest, Vertex highest).
enum class CellClass : std::uint8_t { Interior = 0, Face = 1, Edge = 2, Vertex = 3 };

constexpr int rank(CellClass c) { return static_cast<int>(c); }

constexpr std::string_view to_string(Medium m) {
  switch (m) {
    case Medium::Matrix: return "matrix";
    case Medium::Fracture: return "fracture";
    case Medium::Well: return "well";
  }
  return "?";
}

constexpr std::string_view to_string(CellClass c) {
  switch (c) {
    case CellClass::Interior: return "I";
    case CellClass::Face: return "F";
    case CellClass::Edge: return "E";
    case CellClass::Vertex: return "V";
  }
  return "?";
}

}  // namespace fams
