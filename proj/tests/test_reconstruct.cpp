#include <doctest.h>

#include "flowray/oracle.hpp"
#include "flowray/reconstruct.hpp"
#include "oracles.hpp"

using namespace flowray;
using oracle_ref::cplx;

namespace {
PolyField mu_03() { return PolyField({{{0, 0}, 1.0}, {{2, 0}, 0.3}}); }

ChartOptions opts(int lookup = 129) {
    ChartOptions o;
    o.n_curves = 0;
    o.lookup_n = lookup;
    o.threads = 0;
    return o;
}

Phantom radial() {
    Phantom p;
    p.bumps = {{0.0, 1.0, 0.3}};
    return p;
}
}  // namespace

TEST_CASE("poisson kernel") {
    CHECK(poisson_kernel(0.0, 1.234) == doctest::Approx(1.0));
    CHECK(poisson_kernel(0.5, 0.0) == doctest::Approx(3.0));
    for (cplx l : oracle_ref::random_disc(20, 0.9, 3)) {
        double m = 0.0;
        for (int j = 0; j < 1024; ++j) m += poisson_kernel(l, 2 * oracle_ref::pi * j / 1024);
        CHECK(std::abs(m / 1024 - 1.0) < 1e-12);
        CHECK(poisson_kernel(l, 0.3) >= 0.0);
    }
    CHECK_THROWS_AS(poisson_kernel(1.0, 0.0), Error);
}

TEST_CASE("filtered term symmetry and linearity") {
    const auto one = PolyField::constant(1.0);
    const Chart ch(one, opts(0));
    const auto sg = ray_transform(radial(), one, ch, 32, 129);
    const auto fs = filter_sinogram(sg);
    const double t0 = filtered_term(fs, ch, one, 0.0, 0);
    for (std::size_t j = 1; j < 32; ++j) CHECK(std::abs(filtered_term(fs, ch, one, 0.0, j) - t0) < 1e-6);

    Sinogram zero = fs;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    CHECK(filtered_term(zero, ch, one, cplx(0.2, 0.1), 3) == 0.0);

    Sinogram twice = fs;
    for (auto& v : twice.values) v *= 2.0;
    const cplx z(0.3, -0.2);
    CHECK(filtered_term(twice, ch, one, z, 5) == doctest::Approx(2 * filtered_term(fs, ch, one, z, 5)));
}

TEST_CASE("unit field reduces to classical filtered backprojection") {
    const auto one = PolyField::constant(1.0);
    const Chart ch(one, opts());
    const auto sg = ray_transform(three_bump_phantom(), one, ch, 128, 129);
    const auto r = backproject(sg, ch, one, 64, 0.95);
    const auto fbp = classical_fbp(sg, {1.0, -1.0}, 64);
    double rel, sup;
    grid_errors(r.f, fbp, rel, sup);
    CHECK(rel <= 2e-2);
    grid_errors(r.f, sample_phantom(three_bump_phantom(), 64), rel, sup);
    CHECK(rel <= 2e-2);
    CHECK(r.no_root_pixels == 0);
    CHECK(r.max_imag_residual < 1e-6);

    BackprojectOptions plain;
    plain.plain_average = true;
    const auto p = backproject(sg, ch, one, 64, 0.95, plain);
    for (std::size_t i = 0; i < p.f.values.size(); ++i)
        if (!std::isnan(p.f.values[i])) CHECK(p.f.values[i] == r.f.values[i]);
}

TEST_CASE("zero phantom gives a zero grid") {
    const auto f = mu_03();
    const Chart ch(f, opts());
    Phantom zero;
    const auto sg = ray_transform(zero, f, ch, 32, 65);
    const auto r = backproject(sg, ch, f, 32, 0.95);
    for (double v : r.f.values)
        if (!std::isnan(v)) CHECK(v == 0.0);
}

TEST_CASE("mask and grid layout") {
    const auto g = make_grid(16, 0.95);
    CHECK(g.z(0, 0) == cplx(-1 + 1.0 / 16, -1 + 1.0 / 16));
    CHECK(std::isnan(g.at(0, 0)));
    CHECK(g.at(8, 8) == 0.0);
}

TEST_CASE("phantom to reconstruction map is linear") {
    const auto f = mu_03();
    const Chart ch(f, opts());
    Phantom a = three_bump_phantom(), b;
    b.bumps = {{cplx(0.1, 0.45), 0.5, 0.15}};
    Phantom ab = a;
    ab.bumps.push_back(b.bumps[0]);
    auto rec = [&](const Phantom& p) { return backproject(ray_transform(p, f, ch, 32, 65), ch, f, 32, 0.95).f; };
    const auto ra = rec(a), rb = rec(b), rab = rec(ab);
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < ra.values.size(); ++i) {
        if (std::isnan(ra.values[i])) continue;
        scale = std::max(scale, std::abs(rab.values[i]));
        worst = std::max(worst, std::abs(rab.values[i] - ra.values[i] - rb.values[i]));
    }
    CHECK(worst < 1e-8 * scale);
}

TEST_CASE("rotation equivariance for the unit field") {
    const auto one = PolyField::constant(1.0);
    const Chart ch(one, opts());
    const int n = 48;
    const Phantom ph = three_bump_phantom();
    const auto a = backproject(ray_transform(ph, one, ch, 64, 129), ch, one, n, 0.95).f;
    const auto b = backproject(ray_transform(ph.rotated(oracle_ref::pi / 2), one, ch, 64, 129), ch, one, n, 0.95).f;
    double worst = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (!a.in_mask(r, c)) continue;
            // z -> i z maps (r, c) to (c, n - 1 - r)
            worst = std::max(worst, std::abs(b.at(c, n - 1 - r) - a.at(r, c)));
        }
    CHECK(worst < 2e-3);
}

TEST_CASE("root map is continuous") {
    const auto f = mu_03();
    const int n = 64;
    const auto L = lambda_map(f, n, 0.95);
    const double px = 2.0 / n;
    double worst = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c + 1 < n; ++c)
            if (L.in_mask(r, c) && L.in_mask(r, c + 1)) worst = std::max(worst, std::abs(L.at(r, c + 1) - L.at(r, c)));
    CHECK(worst < 10 * px * std::sqrt(0.3));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (L.in_mask(r, c)) {
                const cplx ref = cplx(0, std::sqrt(0.3)) * L.z(r, c);
                CHECK(std::min(std::abs(L.at(r, c) - ref), std::abs(L.at(r, c) + ref)) < 1e-9);
            }
}

TEST_CASE("pipeline reports and refinement") {
    PipelineConfig cfg;
    cfg.n = 48;
    cfg.n_theta = 64;
    cfg.n_s = 129;
    cfg.hness_samples = 16;
    const auto a = reconstruct_end_to_end(three_bump_phantom(), mu_03(), cfg);
    cfg.n_theta = 128;
    const auto b = reconstruct_end_to_end(three_bump_phantom(), mu_03(), cfg);
    CHECK(b.report.rel_l2 <= 1.1 * a.report.rel_l2);
    CHECK(a.report.timings.count("backproject") == 1);
    CHECK(a.report.hness_aggregate == "pass");

    const auto z = reconstruct_end_to_end(Phantom{}, mu_03(), cfg);
    CHECK(z.report.sup_error == 0.0);
}

TEST_CASE("weight modes parse") {
    CHECK(parse_weight_mode("none") == WeightMode::None);
    CHECK(parse_weight_mode("rescaled") == WeightMode::Rescaled);
    CHECK_THROWS_AS(parse_weight_mode("x"), Error);
}
