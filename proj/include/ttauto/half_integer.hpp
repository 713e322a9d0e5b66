#pragma once

#include <compare>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ttauto {

// Exact element of (1/2)Z, stored as twice its value.
struct HalfInteger {
  int twice = 0;

  static constexpr HalfInteger from_twice(int t) { return HalfInteger{t}; }
  static constexpr HalfInteger from_int(int v) { return HalfInteger{2 * v}; }

  constexpr bool is_integer() const { return twice % 2 == 0; }
  constexpr double value() const { return twice / 2.0; }

  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return {a.twice + b.twice}; }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return {a.twice - b.twice}; }
  friend constexpr HalfInteger operator-(HalfInteger a) { return {-a.twice}; }
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

  std::string to_string() const {
    if (is_integer()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
  }

  static HalfInteger parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return from_int(std::stoi(s));
    if (s.substr(slash + 1) != "2") throw std::invalid_argument("half-integer denominator must be 2: " + s);
    return from_twice(std::stoi(s.substr(0, slash)));
  }

  friend std::ostream& operator<<(std::ostream& os, HalfInteger h) { return os << h.to_string(); }
};

}  // namespace ttauto
