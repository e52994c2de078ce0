#pragma once

#include <string>
#include <stdexcept>

namespace cubicmod {

enum class Precision { Double, Extended };

inline Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw std::invalid_argument("unknown precision '" + s + "' (expected double|extended)");
}

inline const char* to_string(Precision p) { return p == Precision::Double ? "double" : "extended"; }

/// Process-wide numeric settings. Set once before a run, read-only afterwards.
struct NumericContext {
  Precision precision = Precision::Double;
};

inline NumericContext& numeric_context() {
  static NumericContext ctx;
  return ctx;
}

/// Restores the previous precision on scope exit (tests and CLI setup only).
class ScopedPrecision {
 public:
  explicit ScopedPrecision(Precision p) : saved_(numeric_context().precision) { numeric_context().precision = p; }
  ~ScopedPrecision() { numeric_context().precision = saved_; }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  Precision saved_;
};

}  // namespace cubicmod
