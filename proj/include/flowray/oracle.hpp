#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowray/reconstruct.hpp"

namespace flowray {

// Straight-line geometry: line offset rho = rho0 + drho_ds * s, lines z = e^{i th}(t + i rho).
struct LineGeometry {
    double rho0 = 0.0;
    double drho_ds = 1.0;
};

// Ram-Lak filtered backprojection over lines (independent of the Hilbert filter).
ScalarGrid classical_fbp(const Sinogram& sino, const LineGeometry& geom, int n, double mask_radius = 0.95,
                         int threads = 0);

struct ExplicitChart {
    std::string name;
    PolyField field;
    std::function<cplx(cplx, cplx)> s, t, jacobian;  // jacobian = d(t,s)/d(z,zbar)
    std::function<cplx(cplx, cplx)> s_z, s_zbar;
};

// mu = 1: s = (z/l - l zbar)/(2i), t = (z/l + l zbar)/2, jacobian i/2
ExplicitChart straight_line_chart();

struct GreenOptions {
    int n = 400;                   // nodes per axis
    double frame_angle = 1e300;    // default: arg(lambda)
    int threads = 1;
};

// u(z, lambda) = int -J(z0) f(z0) / (pi (s(z) - s(z0))) dA(z0)
cplx green_solution_u(const Phantom& f, const ExplicitChart& chart, cplx z, cplx lambda,
                      const GreenOptions& opt = {});

struct PlemeljSample {
    cplx z;
    double r;
    cplx u, rhs;
    double dev;      // |u - rhs|
    double rel_dev;  // dev / max |rhs| over samples at this r
};

struct PlemeljReport {
    double theta = 0.0;
    std::vector<PlemeljSample> samples;
    std::vector<double> r_list;
    std::vector<double> max_rel_dev;  // per r
    bool trend_ok = false;
    int orientation = 1;
};

// Compares u(z, r e^{i th}) with -(eps/2i) H(I_th f)(s(z e^{-i th})) + D_th f(z), eps = sign of X_perp s.
PlemeljReport plemelj_check(const Phantom& f, double theta, const std::vector<cplx>& z_samples,
                            const std::vector<double>& r_list, const GreenOptions& opt = {});

// straight-line pieces used by plemelj_check, exposed for tests
double line_integral(const Phantom& f, double theta, double rho);
double line_beam(const Phantom& f, double theta, cplx z);

}  // namespace flowray
