#pragma once
#include <stdexcept>
#include <string>

namespace subspectra {

// Exit-code family for the command line: config problems, solver problems,
// and rejection by the time-stepping oracle.
enum class ErrorFamily { Config, Solver, Oracle };

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what, ErrorFamily family = ErrorFamily::Solver)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), family_(family) {}
    const std::string& kind() const noexcept { return kind_; }
    ErrorFamily family() const noexcept { return family_; }

private:
    std::string kind_;
    ErrorFamily family_;
};

#define SUBSPECTRA_ERROR(Name, Family)                                            \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& what) : Error(#Name, what, Family) {}    \
    };

SUBSPECTRA_ERROR(BranchViolation, ErrorFamily::Solver)
SUBSPECTRA_ERROR(ConvergenceFailure, ErrorFamily::Solver)
SUBSPECTRA_ERROR(RootFindingFailure, ErrorFamily::Solver)
SUBSPECTRA_ERROR(DegenerateInput, ErrorFamily::Solver)
SUBSPECTRA_ERROR(DegenerateQuadratic, ErrorFamily::Solver)
SUBSPECTRA_ERROR(NotTuringCapable, ErrorFamily::Solver)
SUBSPECTRA_ERROR(ContourExtractionFailure, ErrorFamily::Solver)
SUBSPECTRA_ERROR(EmptyIntersection, ErrorFamily::Solver)
SUBSPECTRA_ERROR(WindowTooNarrow, ErrorFamily::Solver)
SUBSPECTRA_ERROR(StepSizeRejected, ErrorFamily::Oracle)
SUBSPECTRA_ERROR(ConfigError, ErrorFamily::Config)

#undef SUBSPECTRA_ERROR

}  // namespace subspectra
