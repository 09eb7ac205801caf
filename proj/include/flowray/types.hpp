#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace flowray {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
    InvalidInput,
    VanishingField,
    AllCoefficientsVanish,
    NonpositiveWeight,
    NoInteriorRoot,
    QuadratureNearSingular,
    MethodDisagreement,
    SignUndetermined,
    Trapped,
    MultiComponentInflow,
    OutOfChart,
    NonDecayingRow,
    KernelBlowup,
    ImaginaryResidual,
    EmptyWindow,
    InsufficientNonzeroPairs,
    NoAdmissibleWindow,
    QuadratureSingular,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::string stage = {})
        : std::runtime_error(std::string(error_name(code)) + ": " + what),
          code_(code), stage_(std::move(stage)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& stage() const noexcept { return stage_; }
    Error with_stage(const std::string& s) const {
        Error e = *this;
        e.stage_ = s;
        return e;
    }

private:
    ErrorCode code_;
    std::string stage_;
};

}  // namespace flowray
