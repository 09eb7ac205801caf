#include <doctest.h>

#include "flowray/complexify.hpp"
#include "flowray/flow.hpp"
#include "oracles.hpp"

using namespace flowray;
using oracle_ref::cplx;

namespace {
PolyField mu_03() { return PolyField({{{0, 0}, 1.0}, {{2, 0}, 0.3}}); }
PolyField mixed() { return PolyField({{{0, 0}, 1.0}, {{2, 0}, 0.3}, {{0, 1}, cplx(0.2, -0.1)}, {{1, 1}, 0.15}}); }
}  // namespace

TEST_CASE("complexified coefficient examples") {
    const auto c = complexified_coeffs(mu_03(), 1.0, false);
    REQUIRE(c.first.terms.size() == 2);
    CHECK(std::abs(c.first.terms.at(1) - 1.0) < 1e-15);
    CHECK(std::abs(c.first.terms.at(-1) - 0.3) < 1e-15);

    const auto r = complexified_coeffs(mu_03(), 1.0, true);
    CHECK(std::abs(r.first.terms.at(2) - 1.0) < 1e-15);
    CHECK(std::abs(r.first.terms.at(0) - 0.3) < 1e-15);
    // 2 lambda - 1 - lambda^2
    CHECK(std::abs(r.denom.terms.at(0) + 1.0) < 1e-15);
    CHECK(std::abs(r.denom.terms.at(1) - 2.0) < 1e-15);
    CHECK(std::abs(r.denom.terms.at(2) + 1.0) < 1e-15);
}

TEST_CASE("lambda = 1 reproduces mu and its conjugate") {
    for (const auto& f : {mu_03(), mixed()})
        for (cplx z : oracle_ref::random_disc(1000, 1.0, 7)) {
            const auto c = complexified_coeffs(f, z, false);
            CHECK(std::abs(c.first(1.0) - f(z)) < 1e-13);
            CHECK(std::abs(c.second(1.0) - std::conj(f(z))) < 1e-13);
            CHECK(std::abs(xi_at(f, z, 1.0) - f(z)) < 1e-13);
        }
}

TEST_CASE("rescaled pair equals the weighted unrescaled pair") {
    // a = w xi / denom-free form: numerator / denominator times lambda powers
    const auto f = mu_03();
    for (cplx z : oracle_ref::random_disc(50, 0.9, 9)) {
        const auto r = complexified_coeffs(f, z, true);
        const cplx lam = std::polar(1.0, 0.4);
        // on |lambda| = 1 the weight is real: w(z, lambda) = 2 - z^m lambda^{-m} - zbar^m lambda^m, m = 1
        const cplx w = 2.0 - z / lam - std::conj(z) * lam;
        const cplx lhs = r.first(lam) / r.denom(lam);
        const cplx rhs = xi_at(f, z, lam) / w;
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("find_lambda_i examples") {
    CHECK(find_lambda_i(mu_03(), 0.0) == cplx(0.0));
    const cplx l = find_lambda_i(mu_03(), 0.5);
    CHECK(std::abs(l - cplx(0.0, std::sqrt(0.3) * 0.5)) < 1e-12);
    for (cplx z : oracle_ref::random_disc(20, 0.95, 13)) CHECK(find_lambda_i(PolyField::constant(1.0), z) == cplx(0.0));
    CHECK(find_lambda_i(mixed(), 0.0) == cplx(0.0));
}

TEST_CASE("lambda_i is a root of the complexified field") {
    for (const auto& f : {mu_03(), mixed()})
        for (cplx z : oracle_ref::random_disc(200, 0.95, 19)) {
            if (z == 0.0) continue;
            const cplx l = find_lambda_i(f, z);
            CHECK(std::abs(l) < 1.0);
            if (l == 0.0) continue;
            double scale = 0.0;
            for (const auto& [e, c] : complexified_coeffs(f, z, false).first.terms) scale += std::abs(c) * std::pow(std::abs(l), e);
            CHECK(std::abs(xi_at(f, z, l)) <= 1e-9 * scale);
        }
}

TEST_CASE("selection rule") {
    CHECK(select_root({cplx(0.0, -0.3), cplx(0.0, 0.3)}) == cplx(0.0, 0.3));
    CHECK(select_root({cplx(0.5, 0.0), cplx(0.0, 0.2)}) == cplx(0.0, 0.2));
    CHECK(select_root({cplx(-0.2, 0.0), cplx(0.2, 0.0)}) == cplx(0.2, 0.0));
}

TEST_CASE("jensen examples") {
    const auto jm = jensen_criteria(mu_03(), 0.5);
    CHECK(jm.cond1 == doctest::Approx(-std::log(0.075)).epsilon(1e-9));
    CHECK(std::abs(jm.cond2) < 1e-12);  // no roots of the reflected numerator inside
    CHECK(jensen_criteria(PolyField::constant(2.0), 0.3).vacuous);
}

TEST_CASE("roots_in_disc examples") {
    auto r = roots_in_disc({0.075, 0.0, 1.0});
    CHECK(r.count == 2);
    REQUIRE(r.roots.size() == 2);
    for (cplx x : r.roots) CHECK(std::abs(std::abs(x) - std::sqrt(0.075)) < 1e-12);
    r = roots_in_disc({-0.5, 2.0, -0.5});
    CHECK(r.count == 1);
    REQUIRE(r.roots.size() == 1);
    CHECK(std::abs(r.roots[0] - (2.0 - std::sqrt(3.0))) < 1e-12);
    r = roots_in_disc({0.0, 1.0});
    CHECK(r.count == 1);
    CHECK(std::abs(r.roots[0]) < 1e-15);
}

TEST_CASE("roots_in_disc count agrees with an independent winding count") {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i) {
        std::vector<cplx> c(2 + i % 5);
        for (auto& x : c) x = cplx(g(rng), g(rng));
        bool near = false;
        for (cplx x : polynomial_roots(c)) near = near || std::abs(std::abs(x) - 1.0) < 1e-4;
        if (near) continue;
        CHECK(roots_in_disc(c).count == oracle_ref::winding_count(c));
    }
}

TEST_CASE("hness examples") {
    const auto one = hness_check(PolyField::constant(1.0), {cplx(0.3, 0.2), cplx(-0.5, 0.1)});
    CHECK(one.aggregate == Verdict::Pass);
    CHECK_FALSE(one.rescaled);

    const auto r = hness_check(mu_03(), {cplx(0.25, 0.0)});
    const auto& s = r.samples[0];
    CHECK(s.cond1 == Verdict::Pass);
    CHECK(s.cond2 == Verdict::Pass);
    CHECK(s.cond3 == Verdict::Pass);
    CHECK(s.cond4 == Verdict::Assumed);
    // 2 lambda - 0.25 - 0.25 lambda^2 has the root 4 - sqrt(15)
    REQUIRE(s.denominator_zeros.size() == 1);
    CHECK(std::abs(s.denominator_zeros[0] - (4.0 - std::sqrt(15.0))) < 1e-12);
    CHECK_FALSE(r.denominator_ok);

    const PolyField bad({{{0, 0}, 1.0}, {{2, 0}, 2.0}}, 0.0, false);
    const auto b = hness_check(bad, {cplx(0.9, 0.0)});
    CHECK(b.samples[0].cond3 == Verdict::Fail);
    CHECK(std::abs(std::abs(laurent_coeff(bad, -2, 0.9)) - 1.62) < 1e-12);
}

TEST_CASE("hness report is ordered and thread independent") {
    const auto samples = oracle_ref::random_disc(40, 0.9, 3);
    const auto a = hness_check(mixed(), samples, 512, 1);
    const auto b = hness_check(mixed(), samples, 512, 4);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].z == samples[i]);
        CHECK(a.samples[i].cond1_margin == b.samples[i].cond1_margin);
        CHECK(a.samples[i].lambda_i == b.samples[i].lambda_i);
    }
}

TEST_CASE("holomorphy residual of the complexified numerator") {
    const auto f = mixed();
    const double h = 1e-4;
    for (cplx z : oracle_ref::random_disc(10, 0.9, 21)) {
        const auto a = complexified_coeffs(f, z, true).first;
        double amax = 0.0, worst = 0.0;
        for (int i = 0; i < 16; ++i) {
            const cplx l = std::polar(0.5, 2 * oracle_ref::pi * i / 16);
            amax = std::max(amax, std::abs(a(l)));
            const cplx dx = (a(l + h) - a(l - h)) / (2 * h);
            const cplx dy = (a(l + cplx(0, h)) - a(l - cplx(0, h))) / (2 * h);
            worst = std::max(worst, std::abs(0.5 * (dx + cplx(0, 1) * dy)));
        }
        CHECK(worst < 1e-6 * amax);
    }
}

TEST_CASE("orthogonal coefficients") {
    const auto one = PolyField::constant(1.0);
    // s = Im z: X_perp s = -orientation * d_y s
    auto c = orthogonal_coeffs(one, 0.2, 0.0, -1);
    CHECK(std::abs(c.apply(0.0, 1.0) - 1.0) < 1e-15);
    CHECK(std::abs(c.apply(0.0, 0.0)) == 0.0);

    const auto f = mixed();
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 2 * oracle_ref::pi);
    for (cplx z : oracle_ref::random_disc(100, 0.95, 25)) {
        const double th = u(rng);
        const cplx lam = std::polar(1.0, th);
        const cplx xi = xi_at(f, z, lam), rho = rho_at(f, z, lam);
        CHECK(std::abs(rho - std::conj(xi)) < 1e-13);
        const auto oc = orthogonal_coeffs(f, z, th, 1);
        // X . X_perp as real vectors
        CHECK(std::abs((xi * std::conj(oc.alpha)).real()) < 1e-13);
        CHECK(std::abs(oc.beta - std::conj(oc.alpha)) < 1e-13);
        CHECK(std::abs(oc.apply(0.3, -0.7).imag()) < 1e-13);
    }
}

TEST_CASE("chart orientation makes X_perp s positive") {
    const Chart ch(mu_03(), ChartOptions{Labeling::Flux, 0, 1024, 0, 1});
    for (cplx z : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.4, -0.3)}) CHECK(ch.xperp_s_exact(z) > 0.0);
}
