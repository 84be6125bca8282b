#pragma once

#include <stdexcept>
#include <string>

namespace transit {

// Every failure carries a short stable name; the CLI prints it on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define TRANSIT_ERROR(Cls)                                          \
    class Cls : public Error {                                      \
    public:                                                         \
        explicit Cls(const std::string& what) : Error(#Cls, what) {} \
    }

TRANSIT_ERROR(ContractError);
TRANSIT_ERROR(ZeroDivisor);
TRANSIT_ERROR(InvalidRescale);
TRANSIT_ERROR(NoIdempotents);
TRANSIT_ERROR(InvalidPoint);
TRANSIT_ERROR(AmbiguousRank);
TRANSIT_ERROR(NotInfinitesimal);
TRANSIT_ERROR(NotAxial);
TRANSIT_ERROR(StepTooLarge);
TRANSIT_ERROR(NoRealPath);
TRANSIT_ERROR(RightAngleImpossible);
TRANSIT_ERROR(ConstructionFailed);
TRANSIT_ERROR(SmoothnessGateFailed);
TRANSIT_ERROR(NoParabolicAngle);
TRANSIT_ERROR(InputError);

#undef TRANSIT_ERROR

// Newton failure that keeps the best residual it reached.
class Obstructed : public Error {
public:
    Obstructed(const std::string& what, double residual)
        : Error("Obstructed", what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace transit
