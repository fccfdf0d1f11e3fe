#pragma once

#include <stdexcept>
#include <string>

namespace morp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MORP_DEFINE_ERROR(Name)                 \
  struct Name : Error {                         \
    using Error::Error;                         \
  }

MORP_DEFINE_ERROR(UnknownPixelValue);
MORP_DEFINE_ERROR(MalformedImage);
MORP_DEFINE_ERROR(ShapeMismatch);
MORP_DEFINE_ERROR(DegenerateRegion);
MORP_DEFINE_ERROR(DegenerateNormal);
MORP_DEFINE_ERROR(EmptyReferenceSet);
MORP_DEFINE_ERROR(OutOfCanvas);
MORP_DEFINE_ERROR(AllEmpty);
MORP_DEFINE_ERROR(DegenerateScene);
MORP_DEFINE_ERROR(TooSmall);
MORP_DEFINE_ERROR(SceneTooSmall);
MORP_DEFINE_ERROR(ManifestParse);
MORP_DEFINE_ERROR(SplitLeakage);
MORP_DEFINE_ERROR(DuplicateOutput);
MORP_DEFINE_ERROR(UnpairedFile);
MORP_DEFINE_ERROR(ConfigError);

#undef MORP_DEFINE_ERROR

}  // namespace morp
