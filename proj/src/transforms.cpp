#include "flowray/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "flowray/parallel.hpp"

namespace flowray {

double smooth_cutoff(double x) {
    if (x <= 0.8) return 1.0;
    if (x >= 1.0) return 0.0;
    const double t = (x - 0.8) / 0.2;
    const double a = std::exp(-1.0 / (1.0 - t)), b = std::exp(-1.0 / t);
    return a / (a + b);
}

double Phantom::operator()(cplx z) const {
    const double r = std::abs(z);
    if (r >= support_radius) return 0.0;
    double v = 0.0;
    for (const auto& b : bumps) v += b.amplitude * std::exp(-std::norm(z - b.center) / (b.width * b.width));
    return v * smooth_cutoff(r / support_radius);
}

Phantom Phantom::rotated(double theta) const {
    Phantom p = *this;
    for (auto& b : p.bumps) b.center *= std::polar(1.0, theta);
    return p;
}

Phantom Phantom::scaled(double a) const {
    Phantom p = *this;
    for (auto& b : p.bumps) b.amplitude *= a;
    return p;
}

Phantom three_bump_phantom() {
    Phantom p;
    p.name = "three-bump";
    p.support_radius = 0.9;
    p.bumps = {{{0.3, 0.2}, 1.0, 0.25}, {{-0.35, 0.1}, 0.8, 0.2}, {{0.05, -0.4}, 0.6, 0.15}};
    return p;
}

std::vector<double> theta_grid(int n_theta) {
    std::vector<double> t(n_theta);
    for (int j = 0; j < n_theta; ++j) t[j] = 2 * kPi * j / n_theta;
    return t;
}

std::vector<double> s_grid(const Chart& chart, int n_s, double pad) {
    if (n_s < 3 || n_s % 2 == 0) throw Error(ErrorCode::InvalidInput, "n_s must be odd and >= 3");
    const double c = 0.5 * (chart.s_min() + chart.s_max());
    const double half = (1.0 + pad) * 0.5 * (chart.s_max() - chart.s_min());
    std::vector<double> s(n_s);
    const int mid = n_s / 2;
    for (int m = 0; m < n_s; ++m) s[m] = c + half * double(m - mid) / mid;
    return s;
}

namespace {

void curve_nodes(const Phantom& f, const Chart& chart, double s, const RayOptions& opt, std::vector<cplx>& zn,
                 std::vector<double>& wn) {
    zn.clear();
    wn.clear();
    if (!(s > chart.s_min() && s < chart.s_max())) return;
    TraceOptions to = opt.trace;
    if (to.t_max <= 0) to.t_max = chart.t_max();
    const Curve c = trace_curve(chart.field(), std::polar(1.0, chart.foot_angle(s)), +1, to);
    std::vector<cplx> z;
    std::vector<double> w;
    c.quadrature(opt.piece_h, opt.gl_order, z, w);
    // rotations preserve |z|, so nodes outside the support never contribute
    for (std::size_t k = 0; k < z.size(); ++k)
        if (std::abs(z[k]) < f.support_radius) {
            zn.push_back(z[k]);
            wn.push_back(w[k]);
        }
}

}  // namespace

Sinogram ray_transform(const Phantom& f, const PolyField& field, const Chart& chart, int n_theta, int n_s,
                       const RayOptions& opt) {
    (void)field;
    if (n_theta < 1) throw Error(ErrorCode::InvalidInput, "n_theta must be positive");
    Sinogram sg;
    sg.theta = theta_grid(n_theta);
    sg.s = opt.s_nodes.empty() ? s_grid(chart, n_s, opt.s_pad) : opt.s_nodes;
    n_s = int(sg.s.size());
    sg.values.assign(std::size_t(n_theta) * n_s, 0.0);
    std::vector<cplx> rot(n_theta);
    for (int j = 0; j < n_theta; ++j) rot[j] = std::polar(1.0, sg.theta[j]);
    parallel_for(n_s, opt.threads, [&](std::size_t m) {
        std::vector<cplx> zn;
        std::vector<double> wn;
        curve_nodes(f, chart, sg.s[m], opt, zn, wn);
        if (zn.empty()) return;
        for (int j = 0; j < n_theta; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < zn.size(); ++k) acc += wn[k] * f(rot[j] * zn[k]);
            sg.values[std::size_t(j) * n_s + m] = acc;
        }
    });
    sg.meta["labeling"] = labeling_name(chart.options().labeling);
    sg.meta["piece_h"] = std::to_string(opt.piece_h);
    sg.meta["gl_order"] = std::to_string(opt.gl_order);
    sg.meta["phantom"] = f.name;
    sg.meta["field"] = field.name;
    return sg;
}

double ray_integral(const Phantom& f, const Chart& chart, double s, double theta, const RayOptions& opt) {
    std::vector<cplx> zn;
    std::vector<double> wn;
    curve_nodes(f, chart, s, opt, zn, wn);
    const cplx r = std::polar(1.0, theta);
    double acc = 0.0;
    for (std::size_t k = 0; k < zn.size(); ++k) acc += wn[k] * f(r * zn[k]);
    return acc;
}

double beam_transform(const Phantom& f, const PolyField& field, const Chart& chart, cplx z, double theta,
                      const BeamOptions& opt) {
    if (std::abs(z) >= 1.0) throw Error(ErrorCode::OutOfChart, "beam_transform needs |z| < 1");
    const cplx zp = z * std::polar(1.0, -theta);
    const cplx rot = std::polar(1.0, theta);
    ode::Options o;
    o.rtol = opt.rtol;
    o.atol = opt.atol;
    o.h_max = opt.h_max;
    o.t_max = chart.t_max();
    auto ev = [](const ode::State<3>& y) { return y[0] * y[0] + y[1] * y[1] - 1.0; };
    double part[2];
    for (int d = 0; d < 2; ++d) {
        const double dir = d == 0 ? -1.0 : 1.0;
        auto rhs = [&](double, const ode::State<3>& y, ode::State<3>& dy) {
            const cplx w(y[0], y[1]);
            const cplx m = field(w);
            dy[0] = dir * m.real();
            dy[1] = dir * m.imag();
            dy[2] = f(rot * w);
        };
        auto r = ode::integrate<3>(rhs, {zp.real(), zp.imag(), 0.0}, ev, o);
        if (r.status != ode::Status::Event) throw Error(ErrorCode::OutOfChart, "beam trace did not exit");
        part[d] = r.y_end[2];
    }
    // upstream part enters with sign +1, downstream with -1
    return 0.5 * (part[0] - part[1]);
}

// ---------------------------------------------------------------------------

namespace {
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct HilbertFilter::Impl {
    std::size_t N = 0;
    fftw_plan fwd = nullptr, inv = nullptr;
    fftw_complex* kernel = nullptr;  // spectrum of the kernel, scaled by 1/N
};

HilbertFilter::HilbertFilter(std::size_t n, int pad_factor) : impl_(std::make_unique<Impl>()), n_(n) {
    if (pad_factor < 4) throw Error(ErrorCode::InvalidInput, "pad_factor must be >= 4");
    if (n == 0) throw Error(ErrorCode::InvalidInput, "empty row");
    const std::size_t N = n * pad_factor;
    impl_->N = N;
    const std::size_t nc = N / 2 + 1;
    double* buf = fftw_alloc_real(N);
    fftw_complex* spec = fftw_alloc_complex(nc);
    impl_->kernel = fftw_alloc_complex(nc);
    {
        std::lock_guard<std::mutex> lk(fftw_mutex());
        impl_->fwd = fftw_plan_dft_r2c_1d(int(N), buf, spec, FFTW_ESTIMATE);
        impl_->inv = fftw_plan_dft_c2r_1d(int(N), spec, buf, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < N; ++i) buf[i] = 0.0;
    const long half = long(N / 2);
    for (long m = 1; m < half; m += 2) {
        const double v = 2.0 / (kPi * m);
        buf[m] = v;
        buf[N - m] = -v;
    }
    fftw_execute_dft_r2c(impl_->fwd, buf, impl_->kernel);
    for (std::size_t i = 0; i < nc; ++i) {
        impl_->kernel[i][0] /= double(N);
        impl_->kernel[i][1] /= double(N);
    }
    fftw_free(buf);
    fftw_free(spec);
}

HilbertFilter::~HilbertFilter() {
    if (!impl_) return;
    std::lock_guard<std::mutex> lk(fftw_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->inv) fftw_destroy_plan(impl_->inv);
    if (impl_->kernel) fftw_free(impl_->kernel);
}

void HilbertFilter::apply(const double* in, double* out, bool check_decay) const {
    const std::size_t n = n_, N = impl_->N, nc = N / 2 + 1;
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) amax = std::max(amax, std::abs(in[i]));
    if (amax == 0.0) {
        std::fill(out, out + n, 0.0);
        return;
    }
    if (check_decay && std::max(std::abs(in[0]), std::abs(in[n - 1])) > 1e-8 * amax)
        throw Error(ErrorCode::NonDecayingRow, "row does not decay at the grid ends");
    double* buf = fftw_alloc_real(N);
    fftw_complex* spec = fftw_alloc_complex(nc);
    std::copy(in, in + n, buf);
    std::fill(buf + n, buf + N, 0.0);
    fftw_execute_dft_r2c(impl_->fwd, buf, spec);
    for (std::size_t i = 0; i < nc; ++i) {
        const double a = spec[i][0], b = spec[i][1];
        const double c = impl_->kernel[i][0], d = impl_->kernel[i][1];
        spec[i][0] = a * c - b * d;
        spec[i][1] = a * d + b * c;
    }
    fftw_execute_dft_c2r(impl_->inv, spec, buf);
    std::copy(buf, buf + n, out);
    fftw_free(buf);
    fftw_free(spec);
}

std::vector<double> hilbert_s(const std::vector<double>& row, int pad_factor, bool check_decay) {
    HilbertFilter h(row.size(), pad_factor);
    std::vector<double> out(row.size());
    h.apply(row.data(), out.data(), check_decay);
    return out;
}

std::vector<double> s_derivative(const std::vector<double>& f, double ds) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            if (n < 2) break;
            const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 < n ? i + 1 : n - 1;
            d[i] = (f[b] - f[a]) / (double(b - a) * ds);
        }
        return d;
    }
    const double c = 1.0 / (12.0 * ds);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (-f[i + 2] + 8 * f[i + 1] - 8 * f[i - 1] + f[i - 2]);
    d[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
    d[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
    d[n - 1] = -c * (-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]);
    d[n - 2] = -c * (-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]);
    return d;
}

Sinogram filter_sinogram(const Sinogram& sino, int pad_factor, int threads) {
    Sinogram out = sino;
    const std::size_t ns = sino.n_s();
    HilbertFilter h(ns, pad_factor);
    parallel_for(sino.n_theta(), threads, [&](std::size_t j) {
        std::vector<double> hr(ns);
        h.apply(sino.row(j), hr.data(), true);
        auto d = s_derivative(hr, sino.ds());
        std::copy(d.begin(), d.end(), out.values.begin() + j * ns);
    });
    out.meta["filtered"] = "d/ds H";
    return out;
}

}  // namespace flowray
