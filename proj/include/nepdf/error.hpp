#pragma once

#include <stdexcept>
#include <string>

namespace nepdf {

//! Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define NEPDF_DEFINE_ERROR(Name)                                               \
  struct Name : Error {                                                        \
    using Error::Error;                                                        \
  };

// pair cleaning / histogram construction
NEPDF_DEFINE_ERROR(LengthMismatch)
NEPDF_DEFINE_ERROR(EmptyPair)
NEPDF_DEFINE_ERROR(EmptyInput)
NEPDF_DEFINE_ERROR(NonPositiveForLog)
NEPDF_DEFINE_ERROR(InvalidK)
NEPDF_DEFINE_ERROR(InvalidLabel)

// simulation
NEPDF_DEFINE_ERROR(InvalidParams)
NEPDF_DEFINE_ERROR(OutOfSupport)

// network
NEPDF_DEFINE_ERROR(BadArchitecture)
NEPDF_DEFINE_ERROR(ShapeMismatch)
NEPDF_DEFINE_ERROR(EmptyDataset)
NEPDF_DEFINE_ERROR(LabelOutOfRange)

// serialization
NEPDF_DEFINE_ERROR(IoError)
NEPDF_DEFINE_ERROR(FormatVersionMismatch)
NEPDF_DEFINE_ERROR(CorruptChecksum)

// metrics
NEPDF_DEFINE_ERROR(DegenerateLabels)
NEPDF_DEFINE_ERROR(OutOfRange)
NEPDF_DEFINE_ERROR(ZeroWeightMass)
NEPDF_DEFINE_ERROR(TooFewGroups)
NEPDF_DEFINE_ERROR(ZeroVariance)
NEPDF_DEFINE_ERROR(NotADistribution)
NEPDF_DEFINE_ERROR(SingularFit)

// configuration / CLI
NEPDF_DEFINE_ERROR(ConfigError)

#undef NEPDF_DEFINE_ERROR

}  // namespace nepdf
