#pragma once

#include <stdexcept>
#include <string>

namespace lrn {

// Base of every error raised by the library. The CLI turns these into
// structured diagnostics.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define LRN_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        using Error::Error;                                                 \
        const char* kind() const noexcept override { return #Name; }        \
    }

LRN_DEFINE_ERROR(ParityError);
LRN_DEFINE_ERROR(MixedFieldError);
LRN_DEFINE_ERROR(NotRamifiedError);
LRN_DEFINE_ERROR(UncertifiedPrimeError);
LRN_DEFINE_ERROR(RationalElementError);
LRN_DEFINE_ERROR(InvalidLucasPairError);
LRN_DEFINE_ERROR(UnsupportedIndexError);
LRN_DEFINE_ERROR(RuleScopeError);
LRN_DEFINE_ERROR(ScopeError);
LRN_DEFINE_ERROR(ConstraintError);
LRN_DEFINE_ERROR(IdentityError);
LRN_DEFINE_ERROR(NotASolutionError);
LRN_DEFINE_ERROR(NegativeInputError);
LRN_DEFINE_ERROR(ReplayMismatch);
LRN_DEFINE_ERROR(FormatError);

#undef LRN_DEFINE_ERROR

}  // namespace lrn
