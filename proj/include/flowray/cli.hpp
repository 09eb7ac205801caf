#pragma once

#include <string>
#include <vector>

namespace flowray::cli {

enum Exit { Ok = 0, Usage = 1, Numerical = 2, ValidationFailed = 3 };

struct RunConfig {
    std::string field, phantom, sinogram, spec;
    std::string out = "out";
    int n = 128;
    int n_theta = 256;
    int n_s = 257;
    double mask_radius = 0.95;
    int threads = 0;
    int quad_n = 512;
    int samples = 64;
    int n_curves = 64;
    int lookup_n = 0;
    unsigned seed = 7;
    std::string labeling = "flux";
    std::string weight = "none";
    std::vector<double> eps;
    std::vector<double> q;
    double rtol = 1e-9, atol = 1e-12;
};

// throws std::invalid_argument describing the first bad parameter
void validate_config(const RunConfig& c);

std::string sha256_hex(const std::string& bytes);

int run_command(int argc, char** argv);
int run_command(const std::vector<std::string>& args);

}  // namespace flowray::cli
