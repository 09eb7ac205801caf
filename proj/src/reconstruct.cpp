#include "flowray/reconstruct.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <limits>

#include "flowray/parallel.hpp"

namespace flowray {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Catmull-Rom interpolation on a uniform grid; zero outside.
double interp_row(const double* row, std::size_t n, double s0, double ds, double s) {
    const double u = (s - s0) / ds;
    if (!(u >= 0.0) || u > double(n - 1)) return 0.0;
    const long i = std::min(long(n) - 2, long(std::floor(u)));
    const double t = u - i;
    auto v = [&](long k) { return (k < 0 || k >= long(n)) ? 0.0 : row[k]; };
    const double t2 = t * t, t3 = t2 * t;
    return 0.5 * ((-t3 + 2 * t2 - t) * v(i - 1) + (3 * t3 - 5 * t2 + 2) * v(i) + (-3 * t3 + 4 * t2 + t) * v(i + 1) +
                  (t3 - t2) * v(i + 2));
}
}  // namespace

ScalarGrid make_grid(int n, double mask_radius) {
    if (n < 2) throw Error(ErrorCode::InvalidInput, "grid size must be >= 2");
    ScalarGrid g;
    g.n = n;
    g.mask_radius = mask_radius;
    g.values.assign(std::size_t(n) * n, kNaN);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (g.in_mask(r, c)) g.at(r, c) = 0.0;
    return g;
}

ScalarGrid sample_phantom(const Phantom& f, int n, double mask_radius) {
    ScalarGrid g = make_grid(n, mask_radius);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (g.in_mask(r, c)) g.at(r, c) = f(g.z(r, c));
    return g;
}

double poisson_kernel(cplx lambda, double theta) {
    const double a = std::abs(lambda);
    if (a >= 1.0 - 1e-12) throw Error(ErrorCode::KernelBlowup, "|lambda| >= 1 - 1e-12");
    return (1.0 - a * a) / std::norm(1.0 - std::polar(1.0, -theta) * lambda);
}

const char* weight_mode_name(WeightMode w) { return w == WeightMode::Rescaled ? "rescaled" : "none"; }

WeightMode parse_weight_mode(const std::string& s) {
    if (s == "none") return WeightMode::None;
    if (s == "rescaled") return WeightMode::Rescaled;
    throw Error(ErrorCode::InvalidInput, "unknown weight mode '" + s + "'");
}

RootGrid lambda_map(const PolyField& field, int n, double mask_radius, bool track) {
    RootGrid g;
    g.n = n;
    g.mask_radius = mask_radius;
    g.values.assign(std::size_t(n) * n, cplx(kNaN, kNaN));
    std::vector<std::vector<cplx>> cand(std::size_t(n) * n);
    std::vector<unsigned char> valid(std::size_t(n) * n, 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (!g.in_mask(r, c)) continue;
            const std::size_t idx = std::size_t(r) * n + c;
            try {
                cand[idx] = lambda_candidates(field, g.z(r, c));
            } catch (const Error&) {
                cand[idx].clear();
            }
            valid[idx] = 1;
        }
    if (!track) {
        for (std::size_t idx = 0; idx < cand.size(); ++idx)
            if (valid[idx] && !cand[idx].empty()) g.values[idx] = select_root(cand[idx]);
        return g;
    }
    // flood from the pixel closest to z = 0. Frontier pixels whose nearest candidate is the least
    // ambiguous go first, so near-collisions (ties) are settled last and cannot seed a seam.
    std::size_t start = 0;
    double best = 1e300;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const double a = std::abs(g.z(r, c));
            if (valid[std::size_t(r) * n + c] && a < best) {
                best = a;
                start = std::size_t(r) * n + c;
            }
        }
    struct Item {
        double margin;
        std::size_t idx;
        cplx ref;
        bool operator<(const Item& o) const { return margin != o.margin ? margin < o.margin : idx > o.idx; }
    };
    auto margin_of = [&](std::size_t j, cplx ref) {
        if (std::isnan(ref.real()) || cand[j].size() < 2) return 1e300;
        double d1 = 1e300, d2 = 1e300;
        for (cplx c : cand[j]) {
            const double d = std::abs(c - ref);
            if (d < d1) {
                d2 = d1;
                d1 = d;
            } else if (d < d2) d2 = d;
        }
        return d2 - d1;
    };
    std::vector<unsigned char> seen(cand.size(), 0);
    std::priority_queue<Item> queue;
    queue.push({1e300, start, cplx(kNaN, kNaN)});
    while (!queue.empty()) {
        const Item it = queue.top();
        queue.pop();
        const std::size_t idx = it.idx;
        if (seen[idx]) continue;
        seen[idx] = 1;
        const auto& cs = cand[idx];
        if (!cs.empty()) {
            if (std::isnan(it.ref.real())) {
                g.values[idx] = select_root(cs);
            } else {
                cplx pick = cs[0];
                for (cplx c : cs)
                    if (std::abs(c - it.ref) < std::abs(pick - it.ref)) pick = c;
                g.values[idx] = pick;
            }
        }
        const cplx ref = std::isnan(g.values[idx].real()) ? it.ref : g.values[idx];
        const int r = int(idx / n), c = int(idx % n);
        const int dr[4] = {0, 1, 0, -1}, dc[4] = {1, 0, -1, 0};
        for (int k = 0; k < 4; ++k) {
            const int rr = r + dr[k], cc = c + dc[k];
            if (rr < 0 || cc < 0 || rr >= n || cc >= n) continue;
            const std::size_t j = std::size_t(rr) * n + cc;
            if (!valid[j] || seen[j]) continue;
            queue.push({margin_of(j, ref), j, ref});
        }
    }
    // pixels not connected to the start component
    for (std::size_t idx = 0; idx < cand.size(); ++idx)
        if (valid[idx] && !seen[idx] && !cand[idx].empty()) g.values[idx] = select_root(cand[idx]);
    return g;
}

double filtered_term(const Sinogram& fsino, const Chart& chart, const PolyField& field, cplx z, std::size_t j,
                     double* imag_residual) {
    const double th = fsino.theta[j];
    const cplx zp = z * std::polar(1.0, -th);
    double s, sx, sy;
    chart.s_grad_exact(zp, s, sx, sy);
    const cplx ds(0.5 * sx, -0.5 * sy), dbs = std::conj(ds);
    const auto oc = orthogonal_coeffs(field, z, th, chart);
    const cplx xs = oc.alpha * std::polar(1.0, -th) * ds + oc.beta * std::polar(1.0, th) * dbs;
    if (imag_residual) *imag_residual = std::abs(xs.imag());
    if (std::abs(xs.imag()) > 1e-6 * std::abs(xs.real()) && std::abs(xs.imag()) > 1e-13)
        throw Error(ErrorCode::ImaginaryResidual, "X_perp s has a non-negligible imaginary part");
    const double g = interp_row(fsino.row(j), fsino.n_s(), fsino.s[0], fsino.ds(), s);
    return g * xs.real();
}

BackprojectResult backproject(const Sinogram& sino, const Chart& chart, const PolyField& field, int n,
                              double mask_radius, const BackprojectOptions& opt) {
    BackprojectResult res;
    res.f = make_grid(n, mask_radius);
    const Sinogram fs = filter_sinogram(sino, opt.pad_factor, opt.threads);
    const std::size_t nt = fs.n_theta(), ns = fs.n_s();
    if (opt.plain_average) {
        res.lambda.n = n;
        res.lambda.mask_radius = mask_radius;
        res.lambda.values.assign(std::size_t(n) * n, 0.0);
    } else {
        res.lambda = lambda_map(field, n, mask_radius, opt.track_roots);
    }
    std::vector<cplx> rot(nt);
    for (std::size_t j = 0; j < nt; ++j) rot[j] = std::polar(1.0, -fs.theta[j]);
    const bool rescaled = opt.weight == WeightMode::Rescaled && field.k_global() < -1;
    const double dth = 2 * kPi / double(nt);

    parallel_for(std::size_t(n), opt.threads, [&](std::size_t r) {
        for (int c = 0; c < n; ++c) {
            if (!res.f.in_mask(int(r), c)) continue;
            const cplx z = res.f.z(int(r), c);
            const cplx lam = res.lambda.at(int(r), c);
            if (std::isnan(lam.real())) {
                res.f.at(int(r), c) = kNaN;  // no interior root, flagged
                continue;
            }
            double acc = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                const cplx zp = z * rot[j];
                double s, xs;
                if (opt.use_lookup) chart.lookup(zp, s, xs);
                else {
                    double sx, sy;
                    chart.s_grad_exact(zp, s, sx, sy);
                    const cplx m = field(zp);
                    xs = chart.orientation() * (m.imag() * sx - m.real() * sy);
                }
                if (rescaled) xs /= rescale_weight(field, zp);
                const double g = interp_row(fs.row(j), ns, fs.s[0], fs.ds(), s);
                const double P = opt.plain_average ? 1.0 : poisson_kernel(lam, fs.theta[j]);
                acc += P * g * xs;
            }
            double v = acc * dth / (4 * kPi);
            if (rescaled) v *= rescale_weight(field, z);
            res.f.at(int(r), c) = v;
        }
    });
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (res.f.in_mask(r, c) && std::isnan(res.lambda.at(r, c).real())) ++res.no_root_pixels;

    // sanity signal on a sparse subset: imaginary part of the complex X_perp combination
    const int step = std::max(1, n / 16);
    const std::size_t tstep = std::max<std::size_t>(1, nt / 16);
    double worst = 0.0;
    for (int r = step / 2; r < n; r += step)
        for (int c = step / 2; c < n; c += step) {
            if (!res.f.in_mask(r, c)) continue;
            for (std::size_t j = 0; j < nt; j += tstep) {
                double im = 0.0;
                try {
                    filtered_term(fs, chart, field, res.f.z(r, c), j, &im);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::ImaginaryResidual) throw;
                }
                worst = std::max(worst, im);
            }
        }
    res.max_imag_residual = worst;
    res.f.meta["weight"] = weight_mode_name(opt.weight);
    return res;
}

void grid_errors(const ScalarGrid& a, const ScalarGrid& ref, double& rel_l2, double& sup) {
    double num = 0.0, den = 0.0, na = 0.0;
    sup = 0.0;
    for (int r = 0; r < a.n; ++r)
        for (int c = 0; c < a.n; ++c) {
            if (!a.in_mask(r, c)) continue;
            const double x = a.at(r, c), y = ref.at(r, c);
            if (std::isnan(x) || std::isnan(y)) continue;
            num += (x - y) * (x - y);
            den += y * y;
            na += x * x;
            sup = std::max(sup, std::abs(x - y));
        }
    rel_l2 = den > 0 ? std::sqrt(num / den) : std::sqrt(na);
}

PipelineResult reconstruct_end_to_end(const Phantom& phantom, const PolyField& field, const PipelineConfig& cfg) {
    PipelineResult out;
    auto stage = [&](const char* name, auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn();
        } catch (const Error& e) {
            throw e.with_stage(name);
        }
        out.report.timings[name] = seconds_since(t0);
    };
    HnessReport hr;
    stage("hness", [&] {
        std::vector<cplx> samples{0.0};
        for (int k = 1; k <= 4; ++k)
            for (int a = 0; a < cfg.hness_samples / 4; ++a)
                samples.push_back(std::polar(cfg.mask_radius * k / 4.0, 2 * kPi * (a + 0.5 * k) / (cfg.hness_samples / 4)));
        hr = hness_check(field, samples, 512, cfg.threads);
    });
    out.report.hness_aggregate = verdict_name(hr.aggregate);
    out.report.empirical = !hr.denominator_ok;

    std::unique_ptr<Chart> chart;
    stage("chart", [&] {
        ChartOptions co;
        co.labeling = cfg.labeling;
        co.n_curves = cfg.n_curves;
        co.lookup_n = cfg.lookup_n > 0 ? cfg.lookup_n : 2 * cfg.n + 1;
        co.threads = cfg.threads;
        chart = std::make_unique<Chart>(field, co);
    });
    stage("forward", [&] {
        RayOptions ro = cfg.ray;
        ro.threads = cfg.threads;
        out.sino = ray_transform(phantom, field, *chart, cfg.n_theta, cfg.n_s, ro);
    });
    BackprojectResult bp;
    stage("backproject", [&] {
        BackprojectOptions bo;
        bo.weight = cfg.weight;
        bo.pad_factor = cfg.pad_factor;
        bo.threads = cfg.threads;
        bp = backproject(out.sino, *chart, field, cfg.n, cfg.mask_radius, bo);
    });
    out.f_hat = std::move(bp.f);
    out.truth = sample_phantom(phantom, cfg.n, cfg.mask_radius);
    grid_errors(out.f_hat, out.truth, out.report.rel_l2, out.report.sup_error);
    out.report.max_imag_residual = bp.max_imag_residual;
    out.report.no_root_pixels = bp.no_root_pixels;
    out.f_hat.meta["empirical"] = out.report.empirical ? "true" : "false";
    return out;
}

}  // namespace flowray
