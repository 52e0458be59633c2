#pragma once

#include <stdexcept>
#include <string>

namespace hlg {

// Domain errors carry the name used throughout the docs; all derive from
// std::runtime_error so callers can catch coarsely.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HLG_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                               \
        explicit Name(const std::string& msg = #Name) : Error(msg) {}   \
    }

// jet algebra
HLG_DEFINE_ERROR(SourceTargetMismatch);
HLG_DEFINE_ERROR(OrderMismatch);
HLG_DEFINE_ERROR(BaseMismatch);
HLG_DEFINE_ERROR(SingularLinearPart);
HLG_DEFINE_ERROR(StepTooSmall);

// group models
HLG_DEFINE_ERROR(ModelMismatch);
HLG_DEFINE_ERROR(NotADiffeomorphism);
HLG_DEFINE_ERROR(NotInvertible);
HLG_DEFINE_ERROR(FlowDiverged);
HLG_DEFINE_ERROR(InsufficientModes);
HLG_DEFINE_ERROR(StepRejected);

// riemannian core / bvp
HLG_DEFINE_ERROR(SingularInertia);
HLG_DEFINE_ERROR(BlowUp);
HLG_DEFINE_ERROR(ChartBoundary);
HLG_DEFINE_ERROR(NotConverged);

// curvature lab
HLG_DEFINE_ERROR(DomainBoundary);
HLG_DEFINE_ERROR(DegeneratePlane);

// harness
HLG_DEFINE_ERROR(ConfigError);

#undef HLG_DEFINE_ERROR

} // namespace hlg
