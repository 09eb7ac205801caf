#include "flowray/oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "flowray/parallel.hpp"

namespace flowray {

ScalarGrid classical_fbp(const Sinogram& sino, const LineGeometry& geom, int n, double mask_radius, int threads) {
    const std::size_t nt = sino.n_theta(), ns = sino.n_s();
    const double dr = std::abs(geom.drho_ds) * sino.ds();
    // Ram-Lak kernel for the ramp |sigma| (angular frequency)
    std::vector<double> h(ns);
    h[0] = 1.0 / (4 * dr * dr);
    for (std::size_t k = 1; k < ns; ++k) h[k] = (k % 2) ? -1.0 / (kPi * kPi * double(k * k) * dr * dr) : 0.0;
    std::vector<double> q(nt * ns);
    parallel_for(nt, threads, [&](std::size_t j) {
        const double* p = sino.row(j);
        for (std::size_t i = 0; i < ns; ++i) {
            double a = 0.0;
            for (std::size_t k = 0; k < ns; ++k) a += h[i > k ? i - k : k - i] * p[k];
            q[j * ns + i] = 2 * kPi * dr * a;
        }
    });
    ScalarGrid g = make_grid(n, mask_radius);
    const double dth = 2 * kPi / nt;
    parallel_for(std::size_t(n), threads, [&](std::size_t r) {
        for (int c = 0; c < n; ++c) {
            if (!g.in_mask(int(r), c)) continue;
            const cplx z = g.z(int(r), c);
            double acc = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                const double rho = (z * std::polar(1.0, -sino.theta[j])).imag();
                const double u = ((rho - geom.rho0) / geom.drho_ds - sino.s[0]) / sino.ds();
                if (u < 0 || u > double(ns - 1)) continue;
                const std::size_t i = std::min<std::size_t>(ns - 2, std::size_t(u));
                const double w = u - i;
                acc += (1 - w) * q[j * ns + i] + w * q[j * ns + i + 1];
            }
            g.at(int(r), c) = acc * dth / (4 * kPi);
        }
    });
    g.meta["oracle"] = "ram-lak fbp";
    return g;
}

ExplicitChart straight_line_chart() {
    ExplicitChart c;
    c.name = "mu=1";
    c.field = PolyField::constant(1.0);
    const cplx I(0.0, 1.0);
    c.s = [I](cplx z, cplx l) { return (z / l - l * std::conj(z)) / (2.0 * I); };
    c.t = [](cplx z, cplx l) { return (z / l + l * std::conj(z)) / 2.0; };
    c.jacobian = [I](cplx, cplx) { return I / 2.0; };
    c.s_z = [I](cplx, cplx l) { return 1.0 / (2.0 * I * l); };
    c.s_zbar = [I](cplx, cplx l) { return -l / (2.0 * I); };
    return c;
}

cplx green_solution_u(const Phantom& f, const ExplicitChart& chart, cplx z, cplx lambda, const GreenOptions& opt) {
    const double al = std::abs(lambda);
    if (!(al > 0.0 && al < 1.0)) throw Error(ErrorCode::InvalidInput, "green_solution_u needs 0 < |lambda| < 1");
    const double phi = opt.frame_angle < 1e299 ? opt.frame_angle : std::arg(lambda);
    const cplx e = std::polar(1.0, phi);
    const double L = std::abs(z) + f.support_radius;
    const int n = opt.n + (opt.n % 2);
    const double h = 2 * L / n;
    const cplx sz = chart.s(z, lambda);
    const cplx A = chart.s_z(z, lambda), B = chart.s_zbar(z, lambda);
    // z - z0 = -e (p + i q);  s(z) - s(z0) ~ -(p C1 + i q C2)
    const cplx C1 = A * e + B * std::conj(e), C2 = A * e - B * std::conj(e);
    const cplx I(0.0, 1.0);
    const cplx Jz = chart.jacobian(z, lambda);
    std::vector<cplx> rows(n);
    parallel_for(std::size_t(n), opt.threads, [&](std::size_t a) {
        const double p = -L + (a + 0.5) * h;
        const cplx z00 = z + e * p;
        const double f0 = f(z00);
        cplx acc = 0.0;
        for (int b = 0; b < n; ++b) {
            const double q = -L + (b + 0.5) * h;
            const cplx z0 = z + e * cplx(p, q);
            const double fv = f(z0);
            const double lin = f0;
            if (fv == 0.0 && lin == 0.0) continue;
            const cplx ds = sz - chart.s(z0, lambda);
            if (std::abs(ds) < 1e-10) throw Error(ErrorCode::QuadratureSingular, "node on the singular locus");
            const cplx K = -chart.jacobian(z0, lambda) * fv / (kPi * ds);
            const cplx S = Jz * lin / (kPi * (p * C1 + I * q * C2));
            acc += (K - S) * h * h;
        }
        if (f0 != 0.0) {
            const cplx wp = p * C1 + I * L * C2, wm = p * C1 - I * L * C2;
            acc += h * Jz * f0 / kPi * std::log(wp / wm) / (I * C2);
        }
        rows[a] = acc;
    });
    cplx u = 0.0;
    for (const cplx& v : rows) u += v;
    return u;
}

namespace {
template <class F>
double gl_integral(F&& g, double a, double b, int pieces) {
    using G = boost::math::quadrature::gauss<double, 10>;
    if (b <= a) return 0.0;
    const double len = (b - a) / pieces;
    double s = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double c = a + (k + 0.5) * len;
        s += 0.5 * len * G::integrate([&](double x) { return g(c + 0.5 * len * x); }, -1.0, 1.0);
    }
    return s;
}
}  // namespace

double line_integral(const Phantom& f, double theta, double rho) {
    const double R = f.support_radius;
    if (std::abs(rho) >= R) return 0.0;
    const double T = std::sqrt(R * R - rho * rho);
    const cplx e = std::polar(1.0, theta);
    return gl_integral([&](double t) { return f(e * cplx(t, rho)); }, -T, T, 64);
}

double line_beam(const Phantom& f, double theta, cplx z) {
    const cplx zp = z * std::polar(1.0, -theta);
    const double R = f.support_radius, rho = zp.imag(), t0 = zp.real();
    if (std::abs(rho) >= R) return 0.0;
    const double T = std::sqrt(R * R - rho * rho);
    const cplx e = std::polar(1.0, theta);
    auto g = [&](double t) { return f(e * cplx(t, rho)); };
    const double tc = std::clamp(t0, -T, T);
    return 0.5 * (gl_integral(g, -T, tc, 64) - gl_integral(g, tc, T, 64));
}

PlemeljReport plemelj_check(const Phantom& f, double theta, const std::vector<cplx>& z_samples,
                            const std::vector<double>& r_list, const GreenOptions& opt) {
    PlemeljReport rep;
    rep.theta = theta;
    rep.r_list = r_list;
    const ExplicitChart ch = straight_line_chart();
    {
        const cplx sz = ch.s_z(0.0, 1.0);
        const double sx = 2 * sz.real(), sy = -2 * sz.imag();
        const cplx m = ch.field(0.0);
        rep.orientation = (m.imag() * sx - m.real() * sy) > 0 ? 1 : -1;
    }
    // I_theta f on a fine line-offset grid, then H in that variable
    const int N = 4097;
    const double span = 2.0;
    std::vector<double> rho(N), I(N);
    for (int m = 0; m < N; ++m) {
        rho[m] = -span + 2 * span * m / (N - 1);
        I[m] = line_integral(f, theta, rho[m]);
    }
    const auto HI = hilbert_s(I, 8, true);
    const double dr = rho[1] - rho[0];
    auto interp = [&](double x) {
        const double u = (x - rho[0]) / dr;
        const long i = std::clamp(long(std::floor(u)), 1L, long(N) - 3);
        const double t = u - i, t2 = t * t, t3 = t2 * t;
        return 0.5 * ((-t3 + 2 * t2 - t) * HI[i - 1] + (3 * t3 - 5 * t2 + 2) * HI[i] +
                      (-3 * t3 + 4 * t2 + t) * HI[i + 1] + (t3 - t2) * HI[i + 2]);
    };
    const cplx Iu(0.0, 1.0);
    std::vector<cplx> rhs(z_samples.size());
    double rhs_max = 0.0;
    for (std::size_t i = 0; i < z_samples.size(); ++i) {
        const cplx z = z_samples[i];
        const double s = ch.s(z, std::polar(1.0, theta)).real();
        rhs[i] = -double(rep.orientation) / (2.0 * Iu) * interp(s) + line_beam(f, theta, z);
        rhs_max = std::max(rhs_max, std::abs(rhs[i]));
    }
    for (double r : r_list) {
        double worst = 0.0;
        std::vector<PlemeljSample> part(z_samples.size());
        for (std::size_t i = 0; i < z_samples.size(); ++i) {
            const cplx u = green_solution_u(f, ch, z_samples[i], std::polar(r, theta), opt);
            PlemeljSample ps{z_samples[i], r, u, rhs[i], std::abs(u - rhs[i]), 0.0};
            ps.rel_dev = rhs_max > 0 ? ps.dev / rhs_max : ps.dev;
            worst = std::max(worst, ps.rel_dev);
            part[i] = ps;
        }
        rep.samples.insert(rep.samples.end(), part.begin(), part.end());
        rep.max_rel_dev.push_back(worst);
    }
    rep.trend_ok = true;
    for (std::size_t k = 1; k < rep.max_rel_dev.size(); ++k)
        rep.trend_ok = rep.trend_ok && rep.max_rel_dev[k] < rep.max_rel_dev[k - 1];
    return rep;
}

}  // namespace flowray
