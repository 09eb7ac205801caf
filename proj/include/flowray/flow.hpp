#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "flowray/field.hpp"
#include "flowray/ode.hpp"

namespace flowray {

enum class Labeling { Flux, Arclength, Chord };
const char* labeling_name(Labeling l);
Labeling parse_labeling(const std::string& s);

struct TraceOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_max = 0.05;
    double t_max = 0.0;  // 0: 50 * diameter / min|mu|
};

struct Curve {
    cplx z0{0.0};
    int direction = 1;
    double t_end = 0.0;
    bool exited = false;
    std::vector<ode::Step<2>> steps;
    std::vector<double> t;  // samples at step boundaries
    std::vector<cplx> z;

    cplx at(double tq) const;
    cplx exit_point() const { return z.empty() ? z0 : z.back(); }
    // composite Gauss-Legendre nodes along the curve, pieces of length <= piece_h
    void quadrature(double piece_h, int order, std::vector<cplx>& nodes, std::vector<double>& weights) const;
};

double default_t_max(const PolyField& f);
Curve trace_curve(const PolyField& f, cplx z0, int direction, const TraceOptions& opt = {});

struct InflowArc {
    double phi0, phi1;  // counterclockwise, phi1 > phi0
    double s0, s1;      // label range
};

struct ChartOptions {
    Labeling labeling = Labeling::Flux;
    int n_curves = 64;
    int circle_samples = 4096;
    int lookup_n = 257;  // 0 disables the lookup grid
    int threads = 0;
    double rtol = 1e-11;  // back-traces for s(z)
    double atol = 1e-13;
};

class Chart {
public:
    Chart(const PolyField& f, const ChartOptions& opt = {});

    const PolyField& field() const { return field_; }
    const ChartOptions& options() const { return opt_; }
    const std::vector<InflowArc>& arcs() const { return arcs_; }
    const std::vector<Curve>& curves() const { return curves_; }
    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    double t_max() const { return t_max_; }
    int orientation() const { return orientation_; }

    double label(double phi) const;    // phi inside an inflow arc
    double label_slope(double phi) const;
    double foot_angle(double s) const; // inverse of label
    bool boundary_label(double phi, double& s) const;

    double s_exact(cplx z) const;
    double t_exact(cplx z) const;
    // s and its exact gradient via the variational equations
    void s_grad_exact(cplx z, double& s, double& sx, double& sy) const;
    // orthogonal derivative mu_i s_x - mu_r s_y, times orientation
    double xperp_s_exact(cplx z) const;

    bool has_lookup() const { return lookup_n_ > 0; }
    // interpolated s and oriented X_perp s; falls back to exact traces near the rim
    void lookup(cplx z, double& s, double& xs) const;

private:
    void locate_arcs();
    void build_lookup();
    double back_exit(cplx z, cplx& zf) const;

    PolyField field_;
    ChartOptions opt_;
    std::vector<InflowArc> arcs_;
    std::vector<cplx> flux_coef_;  // coefficients of e^{i n phi} in e^{-i phi} mu(e^{i phi}), n from flux_n0_
    int flux_n0_ = 0;
    cplx chord_dir_{1.0};
    double s_min_ = 0.0, s_max_ = 0.0;
    double t_max_ = 0.0;
    int orientation_ = 1;
    std::vector<Curve> curves_;
    int lookup_n_ = 0;
    double lookup_h_ = 0.0;
    std::vector<double> lu_s_, lu_x_;
    std::vector<unsigned char> lu_ok_;
};

double s_of_z(const Chart& c, cplx z);
double t_of_z(const Chart& c, cplx z);
// (d s, dbar s) by central differences of s_of_z
std::pair<cplx, cplx> grad_s(const Chart& c, cplx z, double h = 1e-4);

// CSV rows: curve_id, t, x, y, s
std::string chart_dump_csv(const Chart& c);

}  // namespace flowray
