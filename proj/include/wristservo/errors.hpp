#pragma once

#include <stdexcept>
#include <string>

namespace wristservo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WRISTSERVO_DEFINE_ERROR(Name)          \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

WRISTSERVO_DEFINE_ERROR(InvalidArgument);
WRISTSERVO_DEFINE_ERROR(JointLimitViolation);
WRISTSERVO_DEFINE_ERROR(BehindCamera);
WRISTSERVO_DEFINE_ERROR(NothingVisible);
WRISTSERVO_DEFINE_ERROR(EmptyMask);
WRISTSERVO_DEFINE_ERROR(EmptyInput);
WRISTSERVO_DEFINE_ERROR(NonPositiveDepth);
WRISTSERVO_DEFINE_ERROR(NoGraspLabel);
WRISTSERVO_DEFINE_ERROR(Unreachable);
WRISTSERVO_DEFINE_ERROR(ChainGap);
WRISTSERVO_DEFINE_ERROR(MeshMissing);
WRISTSERVO_DEFINE_ERROR(SamplingExhausted);
WRISTSERVO_DEFINE_ERROR(FormatError);

#undef WRISTSERVO_DEFINE_ERROR

}  // namespace wristservo
