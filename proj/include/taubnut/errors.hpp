#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace taubnut {

enum class ErrorKind {
  Domain,        // r <= n, non-finite input, stencil leaves the chart
  Axis,          // theta inside the guarded band around 0 or pi
  Degenerate,    // a family constant makes a closed form singular
  Range,         // affine parameter outside a branch's attained range
  Config,        // invalid tolerances, flags or JSON
  NotAGeodesic,  // constancy pattern incompatible with the geodesic system
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define TAUBNUT_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

TAUBNUT_DEFINE_ERROR(DomainError, Domain)
TAUBNUT_DEFINE_ERROR(AxisError, Axis)
TAUBNUT_DEFINE_ERROR(DegenerateError, Degenerate)
TAUBNUT_DEFINE_ERROR(RangeError, Range)
TAUBNUT_DEFINE_ERROR(ConfigError, Config)
TAUBNUT_DEFINE_ERROR(NotAGeodesic, NotAGeodesic)

#undef TAUBNUT_DEFINE_ERROR

}  // namespace taubnut
