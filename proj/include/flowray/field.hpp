#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowray/types.hpp"

namespace flowray {

// mu(z, zbar) = sum a_pq z^p zbar^q over a finite table.
class PolyField {
public:
    struct Term {
        int p, q;
        cplx a;
    };

    PolyField() = default;
    // zero_tol <= 0 selects the default 1e-12 * max|a_pq|.
    explicit PolyField(const std::map<std::pair<int, int>, cplx>& coeffs, double zero_tol = 0.0,
                       bool check_nonvanishing = true);

    static PolyField constant(cplx a);

    const std::vector<Term>& terms() const { return terms_; }
    std::map<std::pair<int, int>, cplx> coeff_map() const;
    cplx coeff(int p, int q) const;
    int degree() const { return degree_; }
    double zero_tol() const { return zero_tol_; }
    int k_global() const { return k_glob_; }
    int l_global() const { return l_glob_; }
    bool empty() const { return terms_.empty(); }

    cplx operator()(cplx z) const;
    // d mu / dz and d mu / dzbar, used by the variational flow.
    void eval_with_derivs(cplx z, cplx& mu, cplx& mu_z, cplx& mu_zb) const;

    // roles of mu and conj(mu) swapped: coefficient (q,p) <- conj(a_pq), so the result is conj(mu(z))
    PolyField mirrored() const;
    // e^{i th} mu(z e^{-i th}), the rotated field X_theta at lambda = e^{i th}
    PolyField rotated(double theta) const;

    // min |mu| over a polar grid on the closed disc
    double min_abs_on_disc(int n_r = 48, int n_phi = 96) const;

    // Tail bound carried along by truncations of analytic families.
    std::optional<double> tail_bound;
    std::string name;

private:
    std::vector<Term> terms_;
    int degree_ = 0;
    int max_p_ = 0, max_q_ = 0;
    int k_glob_ = 0, l_glob_ = 0;
    double zero_tol_ = 1e-12;
};

struct Exponents {
    int k, l;
};

cplx eval_mu(const PolyField& f, cplx z);
cplx laurent_coeff(const PolyField& f, int r, cplx z);
// All c_r(z) for r in [k_global, l_global]; index r - k_global.
std::vector<cplx> laurent_coeffs(const PolyField& f, cplx z);
Exponents exponents(const PolyField& f, cplx z);
Exponents exponents_global(const PolyField& f);
double rescale_weight(const PolyField& f, cplx z);

struct MembershipViolation {
    cplx z;
    std::string condition;
    double margin;
};

struct MembershipReport {
    bool global_ok = false;      // k_mu < -1 and l_mu >= 0
    bool no_rescaling = false;   // k_mu >= -1: w = 1, no rescaling path needed
    bool local_exponents_ok = true;
    bool coeff_ratio_ok = true;
    bool nonvanishing_ok = true;
    std::vector<MembershipViolation> violations;
    std::size_t n_samples = 0;

    bool in_G() const { return global_ok && local_exponents_ok && coeff_ratio_ok && nonvanishing_ok; }
    // In G, or the trivially complexifiable case k_mu >= -1.
    bool admissible() const {
        return in_G() || (no_rescaling && nonvanishing_ok);
    }
};

MembershipReport membership_check(const PolyField& f, const std::vector<cplx>& samples);

}  // namespace flowray
