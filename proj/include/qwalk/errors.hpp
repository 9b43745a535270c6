#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define QWALK_ERROR(Name)                                              \
    struct Name : Error {                                              \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return #Name; }   \
    }

QWALK_ERROR(InvalidArgument);
QWALK_ERROR(NotAnAutomorphism);
QWALK_ERROR(CommutationFailure);
QWALK_ERROR(DimensionLimit);
QWALK_ERROR(MeasurementSymmetryViolation);
QWALK_ERROR(NotOrbitCompatible);
QWALK_ERROR(NumericalFailure);

#undef QWALK_ERROR

}  // namespace qwalk
