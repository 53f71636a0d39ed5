#pragma once

#include <stdexcept>
#include <string>

namespace drlids {

// Base for every failure the library reports. Callers that only need a
// message can catch this; the CLI maps subclasses to exit-code families.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DRLIDS_DECLARE_ERROR(Name)          \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

DRLIDS_DECLARE_ERROR(SchemaError);
DRLIDS_DECLARE_ERROR(ParseError);
DRLIDS_DECLARE_ERROR(UnknownCategory);
DRLIDS_DECLARE_ERROR(EmptyDataset);
DRLIDS_DECLARE_ERROR(DimensionMismatch);
DRLIDS_DECLARE_ERROR(LengthMismatch);
DRLIDS_DECLARE_ERROR(UntrainedModel);
DRLIDS_DECLARE_ERROR(EmptyAntecedent);
DRLIDS_DECLARE_ERROR(InvalidDistribution);
DRLIDS_DECLARE_ERROR(AllNodesDead);
DRLIDS_DECLARE_ERROR(ZeroDenominator);
DRLIDS_DECLARE_ERROR(ConfigError);
DRLIDS_DECLARE_ERROR(ArtifactError);

#undef DRLIDS_DECLARE_ERROR

}  // namespace drlids
