#include <doctest.h>

#include "flowray/oracle.hpp"
#include "oracles.hpp"

using namespace flowray;
using oracle_ref::cplx;

namespace {
Sinogram line_sinogram(const Phantom& f, int n_theta, int n_s) {
    // straight lines Im(e^{-i th} z) = rho, rho on [-1.25, 1.25]; Simpson along each chord
    Sinogram s;
    for (int j = 0; j < n_theta; ++j) s.theta.push_back(2 * oracle_ref::pi * j / n_theta);
    for (int m = 0; m < n_s; ++m) s.s.push_back(-1.25 + 2.5 * m / (n_s - 1));
    for (double th : s.theta)
        for (double rho : s.s) {
            const double half = std::sqrt(std::max(0.0, 1 - rho * rho));
            s.values.push_back(half == 0.0 ? 0.0 : oracle_ref::simpson([&](double t) { return f(std::polar(1.0, th) * cplx(t, rho)); }, -half, half, 2000));
        }
    return s;
}

Phantom centered_gauss() {
    Phantom p;
    p.bumps = {{0.0, 1.0, 0.2}};
    return p;
}
}  // namespace

TEST_CASE("line integrals") {
    for (double rho : {-0.3, 0.0, 0.5}) {
        const double th = 0.7;
        const double ref = oracle_ref::simpson([&](double t) { return three_bump_phantom()(std::polar(1.0, th) * cplx(t, rho)); }, -1, 1, 4000);
        CHECK(std::abs(line_integral(three_bump_phantom(), th, rho) - ref) < 1e-9);
    }
}

TEST_CASE("classical fbp on independent line data") {
    const auto sg = line_sinogram(centered_gauss(), 256, 257);
    const auto r = classical_fbp(sg, {0.0, 1.0}, 64);
    double rel, sup;
    grid_errors(r, sample_phantom(centered_gauss(), 64), rel, sup);
    CHECK(rel <= 1e-2);

    Sinogram zero = sg;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    for (double v : classical_fbp(zero, {0.0, 1.0}, 32).values)
        if (!std::isnan(v)) CHECK(v == 0.0);
}

TEST_CASE("classical fbp is linear") {
    Phantom a = centered_gauss(), b;
    b.bumps = {{cplx(0.3, -0.2), 0.5, 0.15}};
    Phantom ab = a;
    ab.bumps.push_back(b.bumps[0]);
    const auto ra = classical_fbp(line_sinogram(a, 64, 129), {0, 1}, 32);
    const auto rb = classical_fbp(line_sinogram(b, 64, 129), {0, 1}, 32);
    const auto rab = classical_fbp(line_sinogram(ab, 64, 129), {0, 1}, 32);
    for (std::size_t i = 0; i < ra.values.size(); ++i)
        if (!std::isnan(ra.values[i])) CHECK(std::abs(rab.values[i] - ra.values[i] - rb.values[i]) < 1e-10);
}

TEST_CASE("straight line chart") {
    const auto ch = straight_line_chart();
    for (cplx z : oracle_ref::random_disc(20, 1.0, 3)) {
        CHECK(std::abs(ch.s(z, 1.0) - z.imag()) < 1e-15);
        CHECK(std::abs(ch.t(z, 1.0) - z.real()) < 1e-15);
        const cplx l = std::polar(0.6, 0.4);
        CHECK(std::abs(ch.jacobian(z, l)) > 0.0);
        // s_z, s_zbar against finite differences
        const double h = 1e-6;
        const cplx sx = (ch.s(z + h, l) - ch.s(z - h, l)) / (2 * h), sy = (ch.s(z + cplx(0, h), l) - ch.s(z - cplx(0, h), l)) / (2 * h);
        CHECK(std::abs(ch.s_z(z, l) - 0.5 * (sx - cplx(0, 1) * sy)) < 1e-8);
        CHECK(std::abs(ch.s_zbar(z, l) - 0.5 * (sx + cplx(0, 1) * sy)) < 1e-8);
    }
}

TEST_CASE("green solution") {
    const auto ch = straight_line_chart();
    GreenOptions go;
    go.n = 200;
    go.frame_angle = 0.0;
    CHECK(green_solution_u(Phantom{}, ch, cplx(0.1, 0.2), 0.5, go) == cplx(0.0));

    const Phantom ph = three_bump_phantom();
    const cplx z(0.1, 0.2), l = std::polar(0.5, oracle_ref::pi / 3);
    const double h = 1e-3;
    const cplx u = green_solution_u(ph, ch, z, l, go);
    const cplx ux = (green_solution_u(ph, ch, z, l + h, go) - green_solution_u(ph, ch, z, l - h, go)) / (2 * h);
    const cplx uy = (green_solution_u(ph, ch, z, l + cplx(0, h), go) - green_solution_u(ph, ch, z, l - cplx(0, h), go)) / (2 * h);
    CHECK(std::abs(0.5 * (ux + cplx(0, 1) * uy)) < 1e-5 * std::abs(u));

    const cplx u2 = green_solution_u(ph.scaled(2.0), ch, z, l, go);
    CHECK(std::abs(u2 - 2.0 * u) < 1e-12 * std::abs(u));
}

TEST_CASE("green solution conjugate symmetry at real lambda") {
    Phantom sym;
    sym.bumps = {{cplx(0.2, 0.0), 1.0, 0.2}, {cplx(-0.3, 0.0), 0.5, 0.25}};
    const auto ch = straight_line_chart();
    GreenOptions go;
    go.n = 200;
    for (cplx z : {cplx(0.1, 0.3), cplx(-0.2, 0.15)}) {
        const cplx a = green_solution_u(sym, ch, z, 0.6, go), b = green_solution_u(sym, ch, std::conj(z), 0.6, go);
        CHECK(std::abs(b - std::conj(a)) < 1e-8);
    }
}

TEST_CASE("plemelj jump") {
    GreenOptions go;
    go.n = 300;
    const std::vector<cplx> zs{cplx(0.2, 0.1), cplx(-0.3, 0.25), cplx(0.0, -0.4)};
    const auto r = plemelj_check(three_bump_phantom(), 0.7, zs, {0.9, 0.99, 0.999}, go);
    CHECK(r.trend_ok);
    CHECK(r.max_rel_dev.back() <= 5e-2);
    // imaginary parts carry the Hilbert term
    for (const auto& s : r.samples)
        if (s.r == 0.999) CHECK(std::abs(s.u.imag() - s.rhs.imag()) <= 5e-2 * std::abs(s.rhs));

    const auto z = plemelj_check(Phantom{}, 0.7, zs, {0.9, 0.99}, go);
    for (const auto& s : z.samples) CHECK(s.dev == 0.0);
}
