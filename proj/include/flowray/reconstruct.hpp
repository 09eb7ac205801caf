#pragma once

#include <map>
#include <string>
#include <vector>

#include "flowray/complexify.hpp"
#include "flowray/transforms.hpp"

namespace flowray {

// n x n cell-centred grid on [-1,1]^2, row r <-> y ascending, column c <-> x ascending.
template <class T>
struct Grid {
    int n = 0;
    double mask_radius = 0.95;
    std::vector<T> values;
    std::map<std::string, std::string> meta;

    double coord(int i) const { return -1.0 + (i + 0.5) * 2.0 / n; }
    cplx z(int r, int c) const { return {coord(c), coord(r)}; }
    bool in_mask(int r, int c) const { return std::abs(z(r, c)) <= mask_radius; }
    T& at(int r, int c) { return values[std::size_t(r) * n + c]; }
    const T& at(int r, int c) const { return values[std::size_t(r) * n + c]; }
    double pixel() const { return 2.0 / n; }
};

using ScalarGrid = Grid<double>;
using RootGrid = Grid<cplx>;

ScalarGrid make_grid(int n, double mask_radius = 0.95);
ScalarGrid sample_phantom(const Phantom& f, int n, double mask_radius = 0.95);

double poisson_kernel(cplx lambda, double theta);

enum class WeightMode { None, Rescaled };
const char* weight_mode_name(WeightMode w);
WeightMode parse_weight_mode(const std::string& s);

// lambda_i on the masked grid; tracked by continuity from the pixel nearest 0, least ambiguous pixels first
RootGrid lambda_map(const PolyField& field, int n, double mask_radius, bool track = true);

// Chain-rule term d/ds[H I f](s(z')) * X_perp_theta[s(z e^{-i theta})] with exact chart gradients.
// fsino holds d/ds H I rows. Throws ImaginaryResidual if |Im| > 1e-6 |Re|.
double filtered_term(const Sinogram& fsino, const Chart& chart, const PolyField& field, cplx z, std::size_t j,
                     double* imag_residual = nullptr);

struct BackprojectOptions {
    WeightMode weight = WeightMode::None;
    int pad_factor = 8;
    int threads = 0;
    bool track_roots = true;
    bool use_lookup = true;
    // replace P by 1 and lambda_i by 0
    bool plain_average = false;
};

struct BackprojectResult {
    ScalarGrid f;
    RootGrid lambda;
    double max_imag_residual = 0.0;
    std::size_t no_root_pixels = 0;
};

// sino: raw ray-transform rows; filtering happens inside.
BackprojectResult backproject(const Sinogram& sino, const Chart& chart, const PolyField& field, int n,
                              double mask_radius, const BackprojectOptions& opt = {});

struct PipelineConfig {
    int n = 128;
    int n_theta = 256;
    int n_s = 257;
    double mask_radius = 0.95;
    int pad_factor = 8;
    int lookup_n = 0;  // 0: 2n + 1
    int n_curves = 64;
    Labeling labeling = Labeling::Flux;
    WeightMode weight = WeightMode::None;
    int threads = 0;
    RayOptions ray;
    int hness_samples = 64;
};

struct ErrorReport {
    double rel_l2 = 0.0;
    double sup_error = 0.0;
    double max_imag_residual = 0.0;
    std::size_t no_root_pixels = 0;
    bool empirical = false;  // denominator audit found interior zeros
    std::string hness_aggregate;
    std::map<std::string, double> timings;
};

struct PipelineResult {
    ScalarGrid f_hat;
    ScalarGrid truth;
    Sinogram sino;
    ErrorReport report;
};

PipelineResult reconstruct_end_to_end(const Phantom& phantom, const PolyField& field, const PipelineConfig& cfg);

// relative L2 and sup difference over the mask of a
void grid_errors(const ScalarGrid& a, const ScalarGrid& ref, double& rel_l2, double& sup);

}  // namespace flowray
