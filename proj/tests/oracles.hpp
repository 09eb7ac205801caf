#pragma once
// Reference computations for the tests. Each one avoids the library code path it checks.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "flowray/field.hpp"

namespace oracle_ref {

using cplx = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

// c_r(z) from the angular spectrum: mu(e^{i phi} z) = sum_r c_r(z) e^{-i r phi}
inline cplx dft_laurent(const flowray::PolyField& f, int r, cplx z, int M = 256) {
    cplx acc = 0.0;
    for (int m = 0; m < M; ++m) {
        const double phi = 2 * pi * m / M;
        acc += f(std::polar(1.0, phi) * z) * std::polar(1.0, r * phi);
    }
    return acc / double(M);
}

// direct sum, no table lookups
inline cplx brute_mu(const std::vector<std::tuple<int, int, cplx>>& terms, cplx z) {
    cplx s = 0.0;
    for (auto [p, q, a] : terms) s += a * std::pow(z, p) * std::pow(std::conj(z), q);
    return s;
}

// winding count of an ascending-coefficient polynomial on |x| = R, fixed fine sampling
inline int winding_count(const std::vector<cplx>& c, double R = 1.0 - 1e-9, int M = 1 << 14) {
    auto ev = [&](cplx x) {
        cplx v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    double total = 0.0;
    cplx prev = ev(R);
    for (int m = 1; m <= M; ++m) {
        const cplx cur = ev(std::polar(R, 2 * pi * m / M));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2 * pi)));
}

// Hilbert transform (kernel 1/(x-y)) of 1/(1+y^2) restricted to [-L, L]
inline double hilbert_truncated_lorentzian(double x, double L) {
    return (std::log(std::abs((x + L) / (x - L))) + 2 * x * std::atan(L)) / (pi * (1 + x * x));
}

// fixed-step RK4 for dz/dt = dir * mu(z) until |z| crosses 1, linear exit interpolation
inline cplx rk4_exit(const std::function<cplx(cplx)>& mu, cplx z, int dir, double h, double* t_exit = nullptr) {
    double t = 0.0;
    for (int it = 0; it < 10000000; ++it) {
        const cplx k1 = double(dir) * mu(z), k2 = double(dir) * mu(z + 0.5 * h * k1),
                   k3 = double(dir) * mu(z + 0.5 * h * k2), k4 = double(dir) * mu(z + h * k3);
        const cplx zn = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::abs(zn) >= 1.0) {
            // bisect on a Hermite-free chord; h is tiny in the callers
            double a = 0.0, b = 1.0;
            for (int k = 0; k < 60; ++k) {
                const double c = 0.5 * (a + b);
                (std::abs(z + c * (zn - z)) < 1.0 ? a : b) = c;
            }
            if (t_exit) *t_exit = t + a * h;
            return z + a * (zn - z);
        }
        z = zn;
        t += h;
    }
    return z;
}

// composite Simpson along a straight line segment
inline double simpson(const std::function<double(double)>& g, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = g(a) + g(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    return s * h / 3.0;
}

inline std::vector<cplx> random_disc(int n, double radius, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), 2 * pi * u(rng)));
    return out;
}

}  // namespace oracle_ref
