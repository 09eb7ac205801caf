#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowray/reconstruct.hpp"

namespace flowray {

struct AnalyticFieldSpec {
    std::string name;
    std::function<cplx(int, int)> coeff;      // a_pq
    std::function<double(int)> tail;          // certified sum_{p+q>N} |a_pq|
    double radius = 1.0;
    int poly_degree = -1;                     // >= 0 when finitely supported

    bool is_polynomial() const { return poly_degree >= 0; }

    // a_pq = beta^{p+q}: mu = 1 / |1 - beta z|^2
    static AnalyticFieldSpec geometric(double beta);
    // a_00 = 1, a_{0q} = c / (q+1)^2: coefficients decay only polynomially
    static AnalyticFieldSpec harmonic_decay(double c);
    static AnalyticFieldSpec from_poly(const PolyField& f);
};

PolyField project_Pkl(const AnalyticFieldSpec& spec, int k, int l, int N);
PolyField project_Pkl(const PolyField& f, int k, int l, int N);

struct CHatReport {
    std::string verdict;                 // "pass", "fail", "not applicable (already polynomial)"
    std::vector<double> tail_sup;        // per sample
    std::vector<int> nonzero_pairs;      // per sample
    double margin = 0.05;
    bool empirical = true;
};

CHatReport c_hat_test(const AnalyticFieldSpec& spec, const std::vector<cplx>& samples, int j_max = 40,
                      double margin = 0.05);

struct Truncation {
    int k = 0, l = 0, N = 0;
    PolyField field;
    double tail = 0.0;  // certified sup tail on the samples
};

Truncation choose_truncation(const AnalyticFieldSpec& spec, double eps, const std::vector<cplx>& samples,
                             int j_max = 24);
// sup over samples of |mu - P_{k,l,N} mu| plus the certified reference tail
double window_tail(const AnalyticFieldSpec& spec, int k, int l, int N, const std::vector<cplx>& samples);

struct StabilityConfig {
    int n = 64;
    int n_theta = 128;
    int n_s = 129;
    int lookup_n = 0;
    double mask_radius = 0.95;
    double ref_eps_factor = 0.02;  // reference truncation at min(eps) * factor
    int j_max = 24;
    int threads = 0;
    int n_samples = 400;
};

struct StabilityEntry {
    double epsilon = 0.0;
    int k = 0, l = 0, N = 0;
    std::map<std::string, double> sino_distance;  // "1", "2", ..., "inf"
    double schwartz_sup = 0.0;                   // sup |H(I~ - I)|
    double schwartz_d1 = 0.0;                    // sup |d/ds H(I~ - I)|
    double recon_sup_gap = 0.0;                  // vs reference reconstruction
    double recon_sup_err = 0.0;                  // vs phantom
    double runtime_s = 0.0;
};

struct StabilityReport {
    std::string spec_name;
    int ref_k = 0, ref_l = 0, ref_N = 0;
    double ref_recon_sup_err = 0.0;
    std::vector<StabilityEntry> entries;
    double slope_inf = 0.0;  // log-log fit of sino L^inf distance vs eps
    double fitted_C = 0.0;
};

std::vector<cplx> disc_samples(int n, double radius, unsigned seed = 7);

StabilityReport stability_report(const AnalyticFieldSpec& spec, const Phantom& phantom,
                                 const std::vector<double>& eps_list, const std::vector<double>& q_list,
                                 const StabilityConfig& cfg = {},
                                 const std::optional<PolyField>& reference = std::nullopt);

}  // namespace flowray
