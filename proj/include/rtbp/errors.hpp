#pragma once

#include <stdexcept>
#include <string>

namespace rtbp {

// Every numerical failure carries the name of the failing condition so the CLI can
// report it verbatim (exit code 3).
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define RTBP_DEFINE_ERROR(Cls)                                                  \
    class Cls : public NumericalError {                                         \
    public:                                                                     \
        explicit Cls(const std::string& what) : NumericalError(#Cls, what) {}   \
    };

RTBP_DEFINE_ERROR(CollisionError)
RTBP_DEFINE_ERROR(NoConvergence)
RTBP_DEFINE_ERROR(DomainError)
RTBP_DEFINE_ERROR(StepSizeUnderflow)
RTBP_DEFINE_ERROR(PanelBudgetExceeded)
RTBP_DEFINE_ERROR(NoSignChange)
RTBP_DEFINE_ERROR(MaxIterExceeded)
RTBP_DEFINE_ERROR(DomainEscape)
RTBP_DEFINE_ERROR(IndexError)

#undef RTBP_DEFINE_ERROR

}  // namespace rtbp
