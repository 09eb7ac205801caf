#include "flowray/complexify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "flowray/flow.hpp"
#include "flowray/parallel.hpp"

namespace flowray {

namespace {

cplx horner(const std::vector<cplx>& c, cplx x) {
    cplx s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

constexpr double kDiscRadius = 1.0 - 1e-9;

// Winding number of poly around 0 along |x| = R; -1 if poly vanishes on a node.
int winding_count(const std::vector<cplx>& c, double R) {
    const int deg = int(c.size()) - 1;
    const int n0 = std::max(64, 16 * deg);
    double total = 0.0;
    bool bad = false;
    std::function<void(double, double, cplx, cplx, int)> seg = [&](double a, double b, cplx pa,
                                                                   cplx pb, int depth) {
        if (bad) return;
        const double m = 0.5 * (a + b);
        const cplx pm = horner(c, std::polar(R, m));
        if (pm == 0.0) {
            bad = true;
            return;
        }
        const double d = std::arg(pb / pa);
        const double d1 = std::arg(pm / pa), d2 = std::arg(pb / pm);
        const bool ok = std::abs(d) < kPi / 3 && std::abs(d1 + d2 - d) < 1e-9;
        if (ok || depth > 60) {
            if (!ok) bad = true;
            total += d1 + d2;
            return;
        }
        seg(a, m, pa, pm, depth + 1);
        seg(m, b, pm, pb, depth + 1);
    };
    std::vector<cplx> vals(n0 + 1);
    for (int j = 0; j <= n0; ++j) {
        vals[j] = horner(c, std::polar(R, 2 * kPi * j / n0));
        if (vals[j] == 0.0) return -1;
    }
    for (int j = 0; j < n0; ++j) seg(2 * kPi * j / n0, 2 * kPi * (j + 1) / n0, vals[j], vals[j + 1], 0);
    if (bad) return -1;
    return int(std::lround(total / (2 * kPi)));
}

}  // namespace

cplx LaurentPoly::operator()(cplx lambda) const {
    cplx s = 0.0;
    for (const auto& [r, c] : terms) s += c * std::pow(lambda, r);
    return s;
}

std::vector<cplx> LaurentPoly::as_poly() const {
    if (terms.empty()) return {};
    const int lo = min_exponent(), hi = max_exponent();
    std::vector<cplx> c(hi - lo + 1, 0.0);
    for (const auto& [r, v] : terms) c[r - lo] = v;
    return c;
}

Complexified complexified_coeffs(const PolyField& f, cplx z, bool rescaled) {
    Complexified out;
    out.rescaled = rescaled;
    out.first.z = out.second.z = out.denom.z = z;
    const auto c = laurent_coeffs(f, z);
    const int k0 = f.k_global();
    const int km = -f.k_global();
    for (int i = 0; i < int(c.size()); ++i) {
        const int r = i + k0;
        if (c[i] == 0.0) continue;
        if (!rescaled) {
            out.first.terms[r + 1] += c[i];
            out.second.terms[-r - 1] += std::conj(c[i]);
        } else {
            out.first.terms[r + km] += c[i];
            out.second.terms[km - r - 2] += std::conj(c[i]);
        }
    }
    if (rescaled) {
        const int m = km - 1;
        if (m >= 1) {
            out.denom.terms[0] = -ipow(z, m);
            out.denom.terms[m] += 2.0;
            out.denom.terms[2 * m] += -ipow(std::conj(z), m);
        } else {
            out.denom.terms[0] = 1.0;
        }
    }
    return out;
}

cplx xi_at(const PolyField& f, cplx z, cplx lambda) {
    // xi(z, lambda) = lambda * mu(z / lambda, lambda zbar); at |lambda| = 1 this is
    // e^{i th} mu(z e^{-i th}); in general use the Laurent sum.
    const auto c = laurent_coeffs(f, z);
    cplx s = 0.0;
    cplx lp = std::pow(lambda, f.k_global() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        s += c[i] * lp;
        lp *= lambda;
    }
    return s;
}

cplx rho_at(const PolyField& f, cplx z, cplx lambda) {
    const auto c = laurent_coeffs(f, z);
    cplx s = 0.0;
    const cplx inv = 1.0 / lambda;
    cplx lp = std::pow(inv, f.k_global() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        s += std::conj(c[i]) * lp;
        lp *= inv;
    }
    return s;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& poly) {
    std::vector<cplx> c = poly;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.empty()) throw Error(ErrorCode::InvalidInput, "zero polynomial");
    std::vector<cplx> roots;
    std::size_t lo = 0;
    while (lo < c.size() - 1 && c[lo] == 0.0) {
        roots.push_back(0.0);
        ++lo;
    }
    std::vector<cplx> d(c.begin() + lo, c.end());
    const int n = int(d.size()) - 1;
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-d[0] / d[1]);
        return roots;
    }
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -d[i] / d[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> dd(n);
    for (int i = 1; i <= n; ++i) dd[i - 1] = double(i) * d[i];
    for (int i = 0; i < n; ++i) {
        cplx r = es.eigenvalues()[i];
        // Newton polish on the original coefficients; keep only improvements
        for (int it = 0; it < 3; ++it) {
            const cplx pv = horner(d, r), dv = horner(dd, r);
            if (dv == 0.0) break;
            const cplx rn = r - pv / dv;
            if (std::abs(horner(d, rn)) < std::abs(pv)) r = rn;
            else break;
        }
        roots.push_back(r);
    }
    return roots;
}

RootsResult roots_in_disc(const std::vector<cplx>& poly) {
    if (poly.empty() || poly.back() == 0.0)
        throw Error(ErrorCode::InvalidInput, "leading coefficient must be nonzero");
    RootsResult res;
    res.all_roots = polynomial_roots(poly);
    res.min_circle_distance = 1e300;
    for (cplx r : res.all_roots) {
        res.min_circle_distance = std::min(res.min_circle_distance, std::abs(std::abs(r) - 1.0));
        if (std::abs(r) < kDiscRadius) res.roots.push_back(r);
    }
    if (poly.size() == 1) {
        res.count = 0;
        return res;
    }
    res.count = winding_count(poly, kDiscRadius);
    if (res.count != int(res.roots.size()))
        throw Error(ErrorCode::MethodDisagreement,
                    "winding count " + std::to_string(res.count) + " vs eigenvalue count " +
                        std::to_string(res.roots.size()) + " (closest root to circle at distance " +
                        std::to_string(res.min_circle_distance) + ")");
    return res;
}

namespace {

// Multiplicity of lambda = 0 in the a-numerator (rescaled) or in xi (k_mu >= -1).
int zero_multiplicity(const PolyField& f, int k_local) {
    return f.k_global() < -1 ? k_local - f.k_global() : k_local + 1;
}

std::vector<cplx> numerator_poly(const PolyField& f, cplx z, Exponents e) {
    std::vector<cplx> p(e.l - e.k + 1);
    for (int j = e.k; j <= e.l; ++j) p[j - e.k] = laurent_coeff(f, j, z);
    return p;
}

}  // namespace

std::vector<cplx> lambda_candidates(const PolyField& f, cplx z) {
    if (z == 0.0) return {0.0};
    const Exponents e = exponents(f, z);
    std::vector<cplx> cand;
    if (zero_multiplicity(f, e.k) > 0) cand.push_back(0.0);
    if (e.l > e.k) {
        auto rr = roots_in_disc(numerator_poly(f, z, e));
        cand.insert(cand.end(), rr.roots.begin(), rr.roots.end());
    }
    return cand;
}

cplx select_root(const std::vector<cplx>& roots) {
    if (roots.empty()) throw Error(ErrorCode::NoInteriorRoot, "no interior root");
    auto parg = [](cplx r) {
        double a = std::arg(r);
        return a < 0 ? a + 2 * kPi : a;
    };
    cplx best = roots[0];
    for (std::size_t i = 1; i < roots.size(); ++i) {
        const cplx r = roots[i];
        const double mb = std::abs(best), mr = std::abs(r);
        const double tie = 1e-9 * std::max(mb, mr);
        if (mr < mb - tie || (std::abs(mr - mb) <= tie && parg(r) < parg(best))) best = r;
    }
    return best;
}

cplx find_lambda_i(const PolyField& f, cplx z) {
    if (z == 0.0) return 0.0;
    return select_root(lambda_candidates(f, z));
}

JensenMargins jensen_criteria(const PolyField& f, cplx z, int quad_n) {
    if (z == 0.0) throw Error(ErrorCode::InvalidInput, "jensen_criteria requires z != 0");
    JensenMargins out;
    const Exponents e = exponents(f, z);
    if (e.k == e.l) {
        out.vacuous = true;
        return out;
    }
    const auto p = numerator_poly(f, z, e);
    const double ck = std::abs(p.front()), cl = std::abs(p.back());
    if (!(ck > f.zero_tol()) || !(cl > f.zero_tol()))
        throw Error(ErrorCode::InvalidInput, "extreme Laurent coefficient below zero_tol");
    // The cond2 integrand |sum conj(c_j) e^{i th (|k_mu| - j - 2)}| equals |p(e^{-i th})|,
    // so both margins come from the same mean of log|p| on the circle.
    quad_n = std::max(quad_n, 8);
    auto mean_log = [&](int n, double shift) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double av = std::abs(horner(p, std::polar(1.0, 2 * kPi * (j + shift) / n)));
            if (av < 1e-10) return std::nan("");
            s += std::log(av);
        }
        return s / n;
    };
    double shift = 0.0;
    int n = quad_n;
    double I = mean_log(n, shift);
    if (std::isnan(I)) {
        shift = 0.5;
        I = mean_log(n, shift);
        if (std::isnan(I))
            throw Error(ErrorCode::QuadratureNearSingular, "log integrand vanishes at a node");
    }
    for (; n < (1 << 22);) {
        // add the midpoints of the current grid
        double odd = 0.0;
        for (int j = 0; j < n; ++j) {
            const double av =
                std::abs(horner(p, std::polar(1.0, 2 * kPi * (j + shift + 0.5) / n)));
            if (av < 1e-10) throw Error(ErrorCode::QuadratureNearSingular, "log integrand vanishes at a node");
            odd += std::log(av);
        }
        const double I2 = 0.5 * (I + odd / n);
        n *= 2;
        shift *= 0.5;
        const bool done = std::abs(I2 - I) < 1e-10;
        I = I2;
        if (done) break;
    }
    out.nodes_used = n;
    out.cond1 = I - std::log(ck);
    out.cond2 = std::log(cl) - I;
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Vacuous: return "vacuous";
        case Verdict::Assumed: return "assumed";
    }
    return "fail";
}

bool HnessSample::passes() const {
    auto ok = [](Verdict v) { return v == Verdict::Pass || v == Verdict::Vacuous; };
    return ok(cond1) && ok(cond2) && ok(cond3);
}

namespace {

constexpr double kMarginGate = 1e-6;
constexpr double kCond2Tol = 1e-9;

HnessSample audit_sample(const PolyField& f, cplx z, int quad_n) {
    HnessSample s;
    s.z = z;
    if (z == 0.0) {
        s.cond1 = s.cond2 = s.cond3 = Verdict::Pass;
        s.lambda_i = 0.0;
        return s;
    }
    const Exponents e = exponents(f, z);
    s.k = e.k;
    s.l = e.l;
    const int z0 = zero_multiplicity(f, e.k);
    const auto p = numerator_poly(f, z, e);

    // condition 1
    std::vector<cplx> cand;
    if (z0 > 0) cand.push_back(0.0);
    if (e.l > e.k) {
        auto rr = roots_in_disc(p);
        cand.insert(cand.end(), rr.roots.begin(), rr.roots.end());
    }
    s.cond1_root_count = int(cand.size());
    if (e.k == e.l) {
        s.cond1 = cand.empty() ? Verdict::Fail : Verdict::Vacuous;
        s.cond2 = Verdict::Vacuous;
    } else {
        const auto jm = jensen_criteria(f, z, quad_n);
        s.cond1_margin = jm.cond1;
        s.cond2_margin = jm.cond2;
        s.cond1 = cand.empty() ? Verdict::Fail : Verdict::Pass;
        const bool j1 = z0 > 0 || jm.cond1 > 0;
        if (z0 > 0 || std::abs(jm.cond1) > kMarginGate) s.cond1_agree = (j1 == !cand.empty());

        // condition 2: q(lambda) = sum conj(c_j) lambda^{l-j}, q(0) = conj(c_l) != 0
        std::vector<cplx> q(p.size());
        for (std::size_t m = 0; m < p.size(); ++m) q[m] = std::conj(p[p.size() - 1 - m]);
        auto rq = roots_in_disc(q);
        s.cond2_zeros = rq.roots;
        s.cond2 = rq.roots.empty() ? Verdict::Pass : Verdict::Fail;
        const bool j2 = jm.cond2 >= -kCond2Tol;
        if (std::abs(jm.cond2) > kMarginGate) s.cond2_agree = (j2 == rq.roots.empty());
    }
    if (!cand.empty()) s.lambda_i = select_root(cand);

    // condition 3
    if (e.k == e.l) {
        s.cond3 = e.l + e.k + 2 >= 0 ? Verdict::Vacuous : Verdict::Fail;
        s.cond3_margin = e.l + e.k + 2;
    } else {
        const double ratio = std::abs(p.front()) / std::abs(p.back());
        s.cond3_margin = std::min(double(e.l + e.k + 2), 1.0 - ratio);
        s.cond3 = (e.l + e.k + 2 >= 0 && ratio < 1.0) ? Verdict::Pass : Verdict::Fail;
    }

    // rescaling denominator
    if (f.k_global() < -1) {
        const int m = -f.k_global() - 1;
        std::vector<cplx> d(2 * m + 1, 0.0);
        d[0] = -ipow(z, m);
        d[m] = 2.0;
        d[2 * m] = -ipow(std::conj(z), m);
        auto rd = roots_in_disc(d);
        for (cplx r : rd.roots)
            if (std::abs(r) > 1e-14) s.denominator_zeros.push_back(r);
    }
    return s;
}

}  // namespace

HnessReport hness_check(const PolyField& f, const std::vector<cplx>& samples, int quad_n, int threads) {
    HnessReport rep;
    rep.rescaled = f.k_global() < -1;
    rep.samples.resize(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        try {
            rep.samples[i] = audit_sample(f, samples[i], quad_n);
        } catch (const Error& e) {
            HnessSample s;
            s.z = samples[i];
            s.note = e.what();
            rep.samples[i] = s;
        }
    });
    bool all = true;
    for (const auto& s : rep.samples) {
        all = all && s.passes();
        rep.denominator_ok = rep.denominator_ok && s.denominator_zeros.empty();
        rep.jensen_agree = rep.jensen_agree && s.cond1_agree && s.cond2_agree;
    }
    rep.aggregate = all ? Verdict::Pass : Verdict::Fail;
    return rep;
}

OrthCoeffs orthogonal_coeffs(const PolyField& f, cplx z, double theta, int orientation) {
    const cplx lam = std::polar(1.0, theta);
    const cplx I(0.0, 1.0);
    const double sg = orientation < 0 ? -1.0 : 1.0;
    return {sg * (-I) * xi_at(f, z, lam), sg * I * rho_at(f, z, lam)};
}

OrthCoeffs orthogonal_coeffs(const PolyField& f, cplx z, double theta, const Chart& chart) {
    return orthogonal_coeffs(f, z, theta, chart.orientation());
}

}  // namespace flowray
