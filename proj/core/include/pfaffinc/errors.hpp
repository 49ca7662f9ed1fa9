#pragma once

#include <stdexcept>
#include <string>

namespace pfaffinc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PFAFFINC_DEFINE_ERROR(Name)                  \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what)           \
        : Error(std::string(#Name ": ") + what) {}   \
  }

PFAFFINC_DEFINE_ERROR(EmptyTrace);
PFAFFINC_DEFINE_ERROR(SingularMatrix);
PFAFFINC_DEFINE_ERROR(NotComposable);
PFAFFINC_DEFINE_ERROR(InvalidArgument);
PFAFFINC_DEFINE_ERROR(DomainViolation);
PFAFFINC_DEFINE_ERROR(NotUnivariateForm);
PFAFFINC_DEFINE_ERROR(SharedComponent);
PFAFFINC_DEFINE_ERROR(DegenerateEvent);
PFAFFINC_DEFINE_ERROR(CuttingFailed);
PFAFFINC_DEFINE_ERROR(InconsistentScene);
PFAFFINC_DEFINE_ERROR(ComplexityGuard);
PFAFFINC_DEFINE_ERROR(DegenerateDual);
PFAFFINC_DEFINE_ERROR(RotationFailed);
PFAFFINC_DEFINE_ERROR(ChainMismatch);
PFAFFINC_DEFINE_ERROR(DuplicateCurve);
PFAFFINC_DEFINE_ERROR(FormatError);

#undef PFAFFINC_DEFINE_ERROR

}  // namespace pfaffinc
