#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "flowray/flow.hpp"

namespace flowray {

struct Bump {
    cplx center;
    double amplitude;
    double width;
};

// C-infinity cutoff: 1 on [0, 0.8], 0 on [1, inf)
double smooth_cutoff(double x);

struct Phantom {
    std::vector<Bump> bumps;
    double support_radius = 0.9;
    std::string name;

    double operator()(cplx z) const;
    // f(e^{-i theta} z)
    Phantom rotated(double theta) const;
    Phantom scaled(double a) const;
};

Phantom three_bump_phantom();

struct Sinogram {
    std::vector<double> theta;
    std::vector<double> s;
    std::vector<double> values;  // row-major, theta index first
    std::map<std::string, std::string> meta;

    std::size_t n_theta() const { return theta.size(); }
    std::size_t n_s() const { return s.size(); }
    double ds() const { return s.size() > 1 ? s[1] - s[0] : 1.0; }
    double& at(std::size_t j, std::size_t m) { return values[j * s.size() + m]; }
    double at(std::size_t j, std::size_t m) const { return values[j * s.size() + m]; }
    const double* row(std::size_t j) const { return values.data() + j * s.size(); }
};

struct RayOptions {
    double piece_h = 0.02;  // Gauss-Legendre piece length along t
    int gl_order = 6;
    double s_pad = 0.25;
    int threads = 0;
    TraceOptions trace;
    std::vector<double> s_nodes;  // explicit s-grid; empty: chart range padded by s_pad
};

std::vector<double> theta_grid(int n_theta);
std::vector<double> s_grid(const Chart& chart, int n_s, double pad = 0.25);

Sinogram ray_transform(const Phantom& f, const PolyField& field, const Chart& chart, int n_theta, int n_s,
                       const RayOptions& opt = {});
// I_theta f at one label s
double ray_integral(const Phantom& f, const Chart& chart, double s, double theta, const RayOptions& opt = {});

struct BeamOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h_max = 0.02;
};

double beam_transform(const Phantom& f, const PolyField& field, const Chart& chart, cplx z, double theta,
                      const BeamOptions& opt = {});

// Linear convolution with the discrete kernel 2/(pi m), m odd, through a padded FFT.
class HilbertFilter {
public:
    HilbertFilter(std::size_t n, int pad_factor = 8);
    ~HilbertFilter();
    HilbertFilter(const HilbertFilter&) = delete;
    HilbertFilter& operator=(const HilbertFilter&) = delete;

    std::size_t size() const { return n_; }
    void apply(const double* in, double* out, bool check_decay = true) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_;
};

std::vector<double> hilbert_s(const std::vector<double>& row, int pad_factor = 8, bool check_decay = true);
std::vector<double> s_derivative(const std::vector<double>& row, double ds = 1.0);

// d/ds H I_theta f for every row
Sinogram filter_sinogram(const Sinogram& sino, int pad_factor = 8, int threads = 0);

}  // namespace flowray
