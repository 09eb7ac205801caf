#include "flowray/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace flowray {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::VanishingField: return "VanishingField";
        case ErrorCode::AllCoefficientsVanish: return "AllCoefficientsVanish";
        case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorCode::NoInteriorRoot: return "NoInteriorRoot";
        case ErrorCode::QuadratureNearSingular: return "QuadratureNearSingular";
        case ErrorCode::MethodDisagreement: return "MethodDisagreement";
        case ErrorCode::SignUndetermined: return "SignUndetermined";
        case ErrorCode::Trapped: return "Trapped";
        case ErrorCode::MultiComponentInflow: return "MultiComponentInflow";
        case ErrorCode::OutOfChart: return "OutOfChart";
        case ErrorCode::NonDecayingRow: return "NonDecayingRow";
        case ErrorCode::KernelBlowup: return "KernelBlowup";
        case ErrorCode::ImaginaryResidual: return "ImaginaryResidual";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::InsufficientNonzeroPairs: return "InsufficientNonzeroPairs";
        case ErrorCode::NoAdmissibleWindow: return "NoAdmissibleWindow";
        case ErrorCode::QuadratureSingular: return "QuadratureSingular";
    }
    return "Unknown";
}

namespace {
constexpr int kMaxDeg = 192;

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}
}  // namespace

PolyField::PolyField(const std::map<std::pair<int, int>, cplx>& coeffs, double zero_tol,
                     bool check_nonvanishing) {
    double amax = 0.0;
    for (const auto& [pq, a] : coeffs) {
        if (pq.first < 0 || pq.second < 0)
            throw Error(ErrorCode::InvalidInput, "negative exponent in coefficient table");
        amax = std::max(amax, std::abs(a));
    }
    const double machine_zero = std::numeric_limits<double>::min() * 1e4;
    for (const auto& [pq, a] : coeffs) {
        if (std::abs(a) <= machine_zero) continue;
        terms_.push_back({pq.first, pq.second, a});
    }
    if (terms_.empty()) throw Error(ErrorCode::VanishingField, "all coefficients are zero");
    zero_tol_ = zero_tol > 0 ? zero_tol : 1e-12 * amax;
    k_glob_ = std::numeric_limits<int>::max();
    l_glob_ = std::numeric_limits<int>::min();
    for (const auto& t : terms_) {
        degree_ = std::max(degree_, t.p + t.q);
        max_p_ = std::max(max_p_, t.p);
        max_q_ = std::max(max_q_, t.q);
        k_glob_ = std::min(k_glob_, t.q - t.p);
        l_glob_ = std::max(l_glob_, t.q - t.p);
    }
    if (max_p_ >= kMaxDeg || max_q_ >= kMaxDeg)
        throw Error(ErrorCode::InvalidInput, "degree too large");
    if (check_nonvanishing) {
        double m = min_abs_on_disc();
        if (!(m > zero_tol_))
            throw Error(ErrorCode::VanishingField,
                        "|mu| <= zero_tol on the disc grid (min " + std::to_string(m) + ")");
    }
}

PolyField PolyField::constant(cplx a) {
    std::map<std::pair<int, int>, cplx> m;
    m[{0, 0}] = a;
    return PolyField(m);
}

std::map<std::pair<int, int>, cplx> PolyField::coeff_map() const {
    std::map<std::pair<int, int>, cplx> m;
    for (const auto& t : terms_) m[{t.p, t.q}] = t.a;
    return m;
}

cplx PolyField::coeff(int p, int q) const {
    for (const auto& t : terms_)
        if (t.p == p && t.q == q) return t.a;
    return 0.0;
}

cplx PolyField::operator()(cplx z) const {
    std::array<cplx, kMaxDeg> zp, zq;
    const cplx zb = std::conj(z);
    zp[0] = 1.0;
    for (int i = 1; i <= max_p_; ++i) zp[i] = zp[i - 1] * z;
    zq[0] = 1.0;
    for (int i = 1; i <= max_q_; ++i) zq[i] = zq[i - 1] * zb;
    cplx s = 0.0;
    for (const auto& t : terms_) s += t.a * zp[t.p] * zq[t.q];
    return s;
}

void PolyField::eval_with_derivs(cplx z, cplx& mu, cplx& mu_z, cplx& mu_zb) const {
    std::array<cplx, kMaxDeg> zp, zq;
    const cplx zb = std::conj(z);
    zp[0] = 1.0;
    for (int i = 1; i <= max_p_; ++i) zp[i] = zp[i - 1] * z;
    zq[0] = 1.0;
    for (int i = 1; i <= max_q_; ++i) zq[i] = zq[i - 1] * zb;
    mu = mu_z = mu_zb = 0.0;
    for (const auto& t : terms_) {
        mu += t.a * zp[t.p] * zq[t.q];
        if (t.p > 0) mu_z += t.a * double(t.p) * zp[t.p - 1] * zq[t.q];
        if (t.q > 0) mu_zb += t.a * double(t.q) * zp[t.p] * zq[t.q - 1];
    }
}

PolyField PolyField::mirrored() const {
    std::map<std::pair<int, int>, cplx> m;
    for (const auto& t : terms_) m[{t.q, t.p}] = std::conj(t.a);
    PolyField out(m, zero_tol_, false);
    out.tail_bound = tail_bound;
    out.name = name.empty() ? "" : name + "-mirrored";
    return out;
}

PolyField PolyField::rotated(double theta) const {
    // e^{i th} a_pq (z e^{-i th})^p (zbar e^{i th})^q = a_pq e^{i th (q - p + 1)} z^p zbar^q
    std::map<std::pair<int, int>, cplx> m;
    for (const auto& t : terms_) m[{t.p, t.q}] = t.a * std::polar(1.0, theta * (t.q - t.p + 1));
    PolyField out(m, zero_tol_, false);
    out.tail_bound = tail_bound;
    out.name = name;
    return out;
}

double PolyField::min_abs_on_disc(int n_r, int n_phi) const {
    std::vector<std::pair<double, cplx>> pts{{std::abs((*this)(0.0)), 0.0}};
    for (int i = 1; i <= n_r; ++i) {
        double r = double(i) / n_r;
        for (int j = 0; j < n_phi; ++j) {
            const cplx z = std::polar(r, 2 * kPi * j / n_phi);
            pts.push_back({std::abs((*this)(z)), z});
        }
    }
    const std::size_t keep = std::min<std::size_t>(12, pts.size());
    std::partial_sort(pts.begin(), pts.begin() + keep, pts.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    double m = pts.front().first;
    // Newton on (Re mu, Im mu) = 0 from the smallest grid values; zeros between nodes would slip through
    for (std::size_t k = 0; k < keep; ++k) {
        cplx z = pts[k].second;
        for (int it = 0; it < 40; ++it) {
            cplx mu, mz, mzb;
            eval_with_derivs(z, mu, mz, mzb);
            m = std::min(m, std::abs(mu));
            if (m == 0.0) return 0.0;
            const cplx a = mz + mzb, b = cplx(0, 1) * (mz - mzb);
            const double det = a.real() * b.imag() - b.real() * a.imag();
            if (std::abs(det) < 1e-300) break;
            const double dx = -(b.imag() * mu.real() - b.real() * mu.imag()) / det;
            const double dy = -(-a.imag() * mu.real() + a.real() * mu.imag()) / det;
            z += cplx(dx, dy);
            if (std::abs(z) > 1.0) z /= std::abs(z);
            if (std::hypot(dx, dy) < 1e-15) break;
        }
    }
    return m;
}

cplx eval_mu(const PolyField& f, cplx z) { return f(z); }

cplx laurent_coeff(const PolyField& f, int r, cplx z) {
    cplx s = 0.0;
    const cplx zb = std::conj(z);
    for (const auto& t : f.terms())
        if (t.q - t.p == r) s += t.a * ipow(z, t.p) * ipow(zb, t.q);
    return s;
}

std::vector<cplx> laurent_coeffs(const PolyField& f, cplx z) {
    const int k = f.k_global(), l = f.l_global();
    std::vector<cplx> c(l - k + 1, 0.0);
    const int P = f.degree();
    std::vector<cplx> zp(P + 1), zq(P + 1);
    const cplx zb = std::conj(z);
    zp[0] = zq[0] = 1.0;
    for (int i = 1; i <= P; ++i) {
        zp[i] = zp[i - 1] * z;
        zq[i] = zq[i - 1] * zb;
    }
    for (const auto& t : f.terms()) c[t.q - t.p - k] += t.a * zp[t.p] * zq[t.q];
    return c;
}

Exponents exponents(const PolyField& f, cplx z) {
    auto c = laurent_coeffs(f, z);
    int lo = -1, hi = -1;
    for (int i = 0; i < int(c.size()); ++i) {
        if (std::abs(c[i]) > f.zero_tol()) {
            if (lo < 0) lo = i;
            hi = i;
        }
    }
    if (lo < 0) throw Error(ErrorCode::AllCoefficientsVanish, "every |c_r(z)| <= zero_tol");
    return {lo + f.k_global(), hi + f.k_global()};
}

Exponents exponents_global(const PolyField& f) { return {f.k_global(), f.l_global()}; }

double rescale_weight(const PolyField& f, cplx z) {
    if (f.k_global() >= -1) return 1.0;
    const int m = -f.k_global() - 1;
    const double w = 2.0 - 2.0 * ipow(z, m).real();
    if (w <= 0.0 && std::abs(z) < 1.0)
        throw Error(ErrorCode::NonpositiveWeight, "w(z) <= 0 inside the disc");
    return w;
}

MembershipReport membership_check(const PolyField& f, const std::vector<cplx>& samples) {
    MembershipReport rep;
    rep.n_samples = samples.size();
    rep.global_ok = f.k_global() < -1 && f.l_global() >= 0;
    rep.no_rescaling = f.k_global() >= -1 && f.l_global() >= 0;
    for (cplx z : samples) {
        const double am = std::abs(f(z));
        if (!(am > f.zero_tol())) {
            rep.nonvanishing_ok = false;
            rep.violations.push_back({z, "nonvanishing", am - f.zero_tol()});
            continue;
        }
        Exponents e = exponents(f, z);
        const int m = e.l + 2 + e.k;
        if (m < 0) {
            rep.local_exponents_ok = false;
            rep.violations.push_back({z, "-k<=l+2", double(m)});
        }
        if (std::abs(z) > 0.0 && e.k < e.l) {
            const double ck = std::abs(laurent_coeff(f, e.k, z));
            const double cl = std::abs(laurent_coeff(f, e.l, z));
            if (!(ck > 0.0 && ck < cl)) {
                rep.coeff_ratio_ok = false;
                rep.violations.push_back({z, "|c_k|<|c_l|", cl - ck});
            }
        }
    }
    return rep;
}

}  // namespace flowray
