#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowray/field.hpp"

namespace flowray {

class Chart;

// Coefficients of lambda^r at a fixed z.
struct LaurentPoly {
    std::map<int, cplx> terms;
    cplx z{0.0};

    cplx operator()(cplx lambda) const;
    int min_exponent() const { return terms.empty() ? 0 : terms.begin()->first; }
    int max_exponent() const { return terms.empty() ? 0 : terms.rbegin()->first; }
    // ascending coefficients of lambda^{-min_exponent} * this
    std::vector<cplx> as_poly() const;
};

struct Complexified {
    bool rescaled = false;
    LaurentPoly first;   // xi, or the numerator of a
    LaurentPoly second;  // rho, or the numerator of b
    LaurentPoly denom;   // 2 lambda^m - z^m - zbar^m lambda^{2m} (rescaled only)
};

Complexified complexified_coeffs(const PolyField& f, cplx z, bool rescaled);

// xi(z, lambda) and rho(z, lambda) evaluated directly.
cplx xi_at(const PolyField& f, cplx z, cplx lambda);
cplx rho_at(const PolyField& f, cplx z, cplx lambda);

struct RootsResult {
    int count = 0;              // argument-principle count
    std::vector<cplx> roots;    // eigenvalue roots with |r| < 1 - 1e-9
    std::vector<cplx> all_roots;
    double min_circle_distance = 0.0;
};

// poly: ascending coefficients c0 + c1 x + ... ; the last one must be nonzero.
RootsResult roots_in_disc(const std::vector<cplx>& poly);
std::vector<cplx> polynomial_roots(const std::vector<cplx>& poly);

// Interior roots of the a-numerator at z, including lambda = 0 when it is a root.
std::vector<cplx> lambda_candidates(const PolyField& f, cplx z);
// smallest modulus, ties by smallest principal argument in [0, 2pi)
cplx select_root(const std::vector<cplx>& roots);
cplx find_lambda_i(const PolyField& f, cplx z);

struct JensenMargins {
    double cond1 = 0.0;
    double cond2 = 0.0;
    bool vacuous = false;
    int nodes_used = 0;
};

JensenMargins jensen_criteria(const PolyField& f, cplx z, int quad_n = 512);

enum class Verdict { Pass, Fail, Vacuous, Assumed };
const char* verdict_name(Verdict v);

struct HnessSample {
    cplx z;
    int k = 0, l = 0;
    Verdict cond1 = Verdict::Fail;
    cplx lambda_i{0.0};
    double cond1_margin = 0.0;
    int cond1_root_count = 0;
    bool cond1_agree = true;
    Verdict cond2 = Verdict::Fail;
    double cond2_margin = 0.0;
    std::vector<cplx> cond2_zeros;
    bool cond2_agree = true;
    Verdict cond3 = Verdict::Fail;
    double cond3_margin = 0.0;
    std::vector<cplx> denominator_zeros;  // interior, off lambda = 0
    Verdict cond4 = Verdict::Assumed;
    std::string note;

    bool passes() const;
};

struct HnessReport {
    std::vector<HnessSample> samples;
    bool rescaled = false;
    Verdict aggregate = Verdict::Fail;  // conditions 1-3
    bool denominator_ok = true;         // no interior zeros of the complexified weight
    bool jensen_agree = true;
};

HnessReport hness_check(const PolyField& f, const std::vector<cplx>& samples, int quad_n = 512,
                        int threads = 0);

struct OrthCoeffs {
    cplx alpha, beta;  // X_perp = alpha d + beta dbar

    // applied to a real function with gradient (sx, sy)
    cplx apply(double sx, double sy) const {
        const cplx d(0.5 * sx, -0.5 * sy), db(0.5 * sx, 0.5 * sy);
        return alpha * d + beta * db;
    }
};

// (-i xi, i rho) at lambda = e^{i theta}, sign-flipped by orientation (+1 or -1).
OrthCoeffs orthogonal_coeffs(const PolyField& f, cplx z, double theta, int orientation);
OrthCoeffs orthogonal_coeffs(const PolyField& f, cplx z, double theta, const Chart& chart);

}  // namespace flowray
