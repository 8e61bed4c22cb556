#pragma once

#include <stdexcept>
#include <string>

namespace hyperflow {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HYPERFLOW_DEFINE_ERROR(Name)            \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

HYPERFLOW_DEFINE_ERROR(InvalidArgument);
HYPERFLOW_DEFINE_ERROR(NonFiniteEntry);
HYPERFLOW_DEFINE_ERROR(DimensionMismatch);
HYPERFLOW_DEFINE_ERROR(NonConvergence);
HYPERFLOW_DEFINE_ERROR(NotHermitian);
HYPERFLOW_DEFINE_ERROR(ConjugacyViolation);
HYPERFLOW_DEFINE_ERROR(NotHyperbolic);
HYPERFLOW_DEFINE_ERROR(ShiftTooSmall);
HYPERFLOW_DEFINE_ERROR(InvalidClass);
HYPERFLOW_DEFINE_ERROR(NonAscendingGrid);
HYPERFLOW_DEFINE_ERROR(UnsupportedDimension);
HYPERFLOW_DEFINE_ERROR(ParseError);

#undef HYPERFLOW_DEFINE_ERROR

}  // namespace hyperflow
