#pragma once

#include <stdexcept>
#include <string>

namespace zml {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ZML_DEFINE_ERROR(Name)                  \
    struct Name : Error {                       \
        using Error::Error;                     \
    }

ZML_DEFINE_ERROR(SymmetryViolation);
ZML_DEFINE_ERROR(InvalidExponent);
ZML_DEFINE_ERROR(NegativeTime);
ZML_DEFINE_ERROR(NonPositiveTime);
ZML_DEFINE_ERROR(OrderTooHigh);
ZML_DEFINE_ERROR(InvalidBeta);
ZML_DEFINE_ERROR(NonZeroMass);
ZML_DEFINE_ERROR(WidthTooLarge);
ZML_DEFINE_ERROR(SupportTooLarge);
ZML_DEFINE_ERROR(InconsistentShells);
ZML_DEFINE_ERROR(Blowup);
ZML_DEFINE_ERROR(NoContraction);
ZML_DEFINE_ERROR(DenominatorBreach);
ZML_DEFINE_ERROR(UnsupportedKind);
ZML_DEFINE_ERROR(WindowTooNarrow);
ZML_DEFINE_ERROR(GridMismatch);
ZML_DEFINE_ERROR(ParseError);
ZML_DEFINE_ERROR(UnknownKey);
ZML_DEFINE_ERROR(MissingRequired);

#undef ZML_DEFINE_ERROR

}  // namespace zml
