#pragma once

#include <stdexcept>
#include <string>

namespace gcikit {

/// Base class for every domain or ingestion failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GCIKIT_DEFINE_ERROR(Name)                 \
    class Name : public Error {                   \
    public:                                       \
        using Error::Error;                       \
    }

// index model
GCIKIT_DEFINE_ERROR(CycleError);
GCIKIT_DEFINE_ERROR(WeightSumError);
GCIKIT_DEFINE_ERROR(DanglingChildError);
GCIKIT_DEFINE_ERROR(InvalidObservationError);
GCIKIT_DEFINE_ERROR(DuplicateKeyError);
GCIKIT_DEFINE_ERROR(MissingClassError);

// aggregation
GCIKIT_DEFINE_ERROR(DegenerateRangeError);
GCIKIT_DEFINE_ERROR(MissingLeafError);
GCIKIT_DEFINE_ERROR(OutOfScaleError);
GCIKIT_DEFINE_ERROR(YearNotFoundError);
GCIKIT_DEFINE_ERROR(UnknownNodeError);

// ranking
GCIKIT_DEFINE_ERROR(MissingNodeError);
GCIKIT_DEFINE_ERROR(EmptyIntersectionError);

// stats
GCIKIT_DEFINE_ERROR(LengthMismatchError);
GCIKIT_DEFINE_ERROR(NonPositiveExpectedError);
GCIKIT_DEFINE_ERROR(DegenerateAbscissaError);
GCIKIT_DEFINE_ERROR(ZeroVarianceError);
GCIKIT_DEFINE_ERROR(DomainError);

// what-if
GCIKIT_DEFINE_ERROR(UnknownCountryError);
GCIKIT_DEFINE_ERROR(OverrideOutOfScaleError);
GCIKIT_DEFINE_ERROR(NotAnAncestorPathError);

// ingestion and reporting
GCIKIT_DEFINE_ERROR(ParseError);
GCIKIT_DEFINE_ERROR(SchemaError);
GCIKIT_DEFINE_ERROR(IoError);
GCIKIT_DEFINE_ERROR(UnsupportedFormatError);

#undef GCIKIT_DEFINE_ERROR

}  // namespace gcikit
