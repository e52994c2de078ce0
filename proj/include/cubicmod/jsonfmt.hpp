#pragma once

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "cubicmod/numkit/scalar.hpp"

namespace cubicmod {

using Json = nlohmann::ordered_json;

/// Float rendered with 17 significant digits (kept as a string so the digit
/// count survives serialization).
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Json to_json_value(const Rational& q) { return to_string(q); }
inline Json to_json_value(double x) { return format_double(x); }
inline Json to_json_value(const Complex& z) {
  if (z.imag() == 0.0) return format_double(z.real());
  return Json::array({format_double(z.real()), format_double(z.imag())});
}

template <class S>
Json to_json_value(const Vec<S>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json_value(x));
  return a;
}

}  // namespace cubicmod
