#pragma once

#include <stdexcept>
#include <string>

namespace ec {

// Every numeric failure carries a stable name, used by the CLI on stderr.
class NumericError : public std::runtime_error {
public:
    NumericError(const char* name, const std::string& what)
        : std::runtime_error(what), name_(name) {}
    const char* name() const noexcept { return name_; }

private:
    const char* name_;
};

#define EC_NUMERIC_ERROR(Name)                                              \
    class Name : public NumericError {                                      \
    public:                                                                 \
        explicit Name(const std::string& what) : NumericError(#Name, what) {} \
    };

EC_NUMERIC_ERROR(TruncationFailure)
EC_NUMERIC_ERROR(PoleAtLattice)
EC_NUMERIC_ERROR(ReductionStalled)
EC_NUMERIC_ERROR(CountMismatch)
EC_NUMERIC_ERROR(BoundaryZero)
EC_NUMERIC_ERROR(PhaseStepFailure)
EC_NUMERIC_ERROR(Diverged)
EC_NUMERIC_ERROR(BranchJump)
EC_NUMERIC_ERROR(DivideByZero)
EC_NUMERIC_ERROR(DomainEscape)
EC_NUMERIC_ERROR(RootBracketFailure)
EC_NUMERIC_ERROR(ConsistencyFailure)
EC_NUMERIC_ERROR(ExcludedPoint)
EC_NUMERIC_ERROR(SkippedChar)
EC_NUMERIC_ERROR(Unclassified)

#undef EC_NUMERIC_ERROR

// Bad arguments from the command line; not a numeric failure.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ec
