#include "flowray/flow.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "flowray/parallel.hpp"

namespace flowray {

const char* labeling_name(Labeling l) {
    switch (l) {
        case Labeling::Flux: return "flux";
        case Labeling::Arclength: return "arclength";
        case Labeling::Chord: return "chord";
    }
    return "flux";
}

Labeling parse_labeling(const std::string& s) {
    if (s == "flux") return Labeling::Flux;
    if (s == "arclength") return Labeling::Arclength;
    if (s == "chord") return Labeling::Chord;
    throw Error(ErrorCode::InvalidInput, "unknown labeling '" + s + "'");
}

namespace {

double wrap_from(double phi, double base) {
    double d = std::fmod(phi - base, 2 * kPi);
    if (d < 0) d += 2 * kPi;
    return base + d;
}

double radial(const PolyField& f, double phi) {
    const cplx u = std::polar(1.0, phi);
    return (std::conj(u) * f(u)).real();
}

template <int Order>
void gl_nodes(std::vector<double>& x, std::vector<double>& w) {
    using G = boost::math::quadrature::gauss<double, Order>;
    const auto& a = G::abscissa();
    const auto& b = G::weights();
    x.clear();
    w.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            x.push_back(0.0);
            w.push_back(b[i]);
        } else {
            x.push_back(a[i]);
            w.push_back(b[i]);
            x.push_back(-a[i]);
            w.push_back(b[i]);
        }
    }
}

}  // namespace

cplx Curve::at(double tq) const {
    if (steps.empty()) return z0;
    tq = std::clamp(tq, 0.0, t_end);
    std::size_t lo = 0, hi = steps.size();
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (steps[mid].t0 <= tq) lo = mid;
        else hi = mid;
    }
    auto y = steps[lo].at(tq);
    return {y[0], y[1]};
}

void Curve::quadrature(double piece_h, int order, std::vector<cplx>& nodes,
                       std::vector<double>& weights) const {
    nodes.clear();
    weights.clear();
    std::vector<double> gx, gw;
    switch (order) {
        case 4: gl_nodes<4>(gx, gw); break;
        case 8: gl_nodes<8>(gx, gw); break;
        default: gl_nodes<6>(gx, gw); break;
    }
    for (const auto& st : steps) {
        const double a = st.t0, b = std::min(st.t0 + st.h, t_end);
        if (b <= a) continue;
        const int np = std::max(1, int(std::ceil((b - a) / piece_h - 1e-12)));
        const double len = (b - a) / np;
        for (int k = 0; k < np; ++k) {
            const double c = a + (k + 0.5) * len;
            for (std::size_t g = 0; g < gx.size(); ++g) {
                auto y = st.at(c + 0.5 * len * gx[g]);
                nodes.emplace_back(y[0], y[1]);
                weights.push_back(0.5 * len * gw[g]);
            }
        }
    }
}

double default_t_max(const PolyField& f) { return 50.0 * 2.0 / f.min_abs_on_disc(); }

Curve trace_curve(const PolyField& f, cplx z0, int direction, const TraceOptions& opt) {
    if (std::abs(z0) > 1.0 + 1e-12) throw Error(ErrorCode::InvalidInput, "trace_curve start outside the disc");
    ode::Options o;
    o.rtol = opt.rtol;
    o.atol = opt.atol;
    o.h_max = opt.h_max;
    o.t_max = opt.t_max > 0 ? opt.t_max : default_t_max(f);
    o.record = true;
    o.event_tol = 1e-12;
    const double dir = direction < 0 ? -1.0 : 1.0;
    auto rhs = [&](double, const ode::State<2>& y, ode::State<2>& dy) {
        const cplx m = f(cplx(y[0], y[1]));
        dy[0] = dir * m.real();
        dy[1] = dir * m.imag();
    };
    auto ev = [](const ode::State<2>& y) { return y[0] * y[0] + y[1] * y[1] - 1.0; };
    auto r = ode::integrate<2>(rhs, {z0.real(), z0.imag()}, ev, o);
    if (r.status != ode::Status::Event)
        throw Error(ErrorCode::Trapped, "no boundary exit before T_max");
    Curve c;
    c.z0 = z0;
    c.direction = direction;
    c.t_end = r.t_end;
    c.exited = true;
    c.steps = std::move(r.steps);
    c.t.push_back(0.0);
    c.z.push_back(z0);
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const double te = std::min(c.steps[i].t0 + c.steps[i].h, c.t_end);
        auto y = c.steps[i].at(te);
        if (te > c.t.back()) {
            c.t.push_back(te);
            c.z.emplace_back(y[0], y[1]);
        }
    }
    if (c.steps.empty()) c.t_end = 0.0;
    return c;
}

// ---------------------------------------------------------------------------

namespace {

struct BaseLabel {
    Labeling kind;
    const std::vector<cplx>* flux;
    int n0;
    cplx chord;

    double value(double phi) const {
        switch (kind) {
            case Labeling::Arclength: return phi;
            case Labeling::Chord: return (std::polar(1.0, phi) * std::conj(chord)).real();
            default: {
                // minus the antiderivative of Re(e^{-i phi} mu(e^{i phi}))
                double a = 0.0;
                for (std::size_t i = 0; i < flux->size(); ++i) {
                    const int n = int(i) + n0;
                    const cplx b = (*flux)[i];
                    if (n == 0) a += b.real() * phi;
                    else a += (b * std::polar(1.0, n * phi) / cplx(0.0, n)).real();
                }
                return -a;
            }
        }
    }
    double slope(double phi) const {
        switch (kind) {
            case Labeling::Arclength: return 1.0;
            case Labeling::Chord: return (cplx(0.0, 1.0) * std::polar(1.0, phi) * std::conj(chord)).real();
            default: {
                double r = 0.0;
                for (std::size_t i = 0; i < flux->size(); ++i)
                    r += ((*flux)[i] * std::polar(1.0, (int(i) + n0) * phi)).real();
                return -r;
            }
        }
    }
};

}  // namespace

Chart::Chart(const PolyField& f, const ChartOptions& opt) : field_(f), opt_(opt) {
    t_max_ = default_t_max(f);
    flux_n0_ = -f.l_global() - 1;
    flux_coef_.assign(f.l_global() - f.k_global() + 1, 0.0);
    for (const auto& t : f.terms()) flux_coef_[(t.p - t.q - 1) - flux_n0_] += t.a;
    locate_arcs();
    if (opt_.labeling == Labeling::Chord) {
        if (arcs_.size() != 1)
            throw Error(ErrorCode::MultiComponentInflow, "chord labeling needs a single inflow arc");
        const cplx d = std::polar(1.0, arcs_[0].phi1) - std::polar(1.0, arcs_[0].phi0);
        chord_dir_ = d / std::abs(d);
    }
    const BaseLabel bl{opt_.labeling, &flux_coef_, flux_n0_, chord_dir_};
    double acc = 0.0;
    for (auto& a : arcs_) {
        a.s0 = acc;
        acc += bl.value(a.phi1) - bl.value(a.phi0);
        a.s1 = acc;
        // monotonicity along the arc
        for (int j = 1; j < 64; ++j) {
            const double ph = a.phi0 + (a.phi1 - a.phi0) * j / 64.0;
            if (!(bl.slope(ph) > 0.0))
                throw Error(ErrorCode::InvalidInput,
                            std::string(labeling_name(opt_.labeling)) + " labeling is not monotone on the inflow arc");
        }
    }
    s_min_ = arcs_.front().s0;
    s_max_ = arcs_.back().s1;

    // orientation from X_perp s at an interior reference point
    const cplx refs[] = {0.0, 0.3, -0.3, cplx(0, 0.3), cplx(0, -0.3)};
    bool found = false;
    for (cplx zr : refs) {
        double s, sx, sy;
        s_grad_exact(zr, s, sx, sy);
        const cplx m = field_(zr);
        const double v = m.imag() * sx - m.real() * sy;
        if (std::abs(v) >= 1e-10) {
            orientation_ = v > 0 ? 1 : -1;
            found = true;
            break;
        }
    }
    if (!found) throw Error(ErrorCode::SignUndetermined, "|X_perp s| < 1e-10 at every reference point");

    if (arcs_.size() > 1) {
        // interleaved families show up as sign changes of X_perp s
        for (int i = 0; i < 24; ++i)
            for (int j = 0; j < 24; ++j) {
                const cplx z(-0.9 + 1.8 * i / 23.0, -0.9 + 1.8 * j / 23.0);
                if (std::abs(z) > 0.9) continue;
                if (xperp_s_exact(z) <= 0.0)
                    throw Error(ErrorCode::MultiComponentInflow, "inflow arcs interleave (inconsistent X_perp s sign)");
            }
    }

    curves_.resize(std::max(opt_.n_curves, 0));
    TraceOptions to;
    to.t_max = t_max_;
    parallel_for(curves_.size(), opt_.threads, [&](std::size_t i) {
        const double s = s_min_ + (s_max_ - s_min_) * (i + 0.5) / curves_.size();
        curves_[i] = trace_curve(field_, std::polar(1.0, foot_angle(s)), +1, to);
    });

    if (opt_.lookup_n > 0) build_lookup();
}

void Chart::locate_arcs() {
    const int M = std::max(opt_.circle_samples, 64);
    std::vector<double> r(M);
    for (int j = 0; j < M; ++j) r[j] = radial(field_, 2 * kPi * j / M);
    int j0 = -1;
    for (int j = 0; j < M; ++j)
        if (r[j] >= 0.0) {
            j0 = j;
            break;
        }
    if (j0 < 0) throw Error(ErrorCode::Trapped, "the field points inward on the whole circle");
    auto refine = [&](double a, double b) {
        // root of radial() between a (sign of ra) and b
        const double ra = radial(field_, a);
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double m = 0.5 * (a + b);
            if ((radial(field_, m) < 0.0) == (ra < 0.0)) a = m;
            else b = m;
        }
        return 0.5 * (a + b);
    };
    bool in = false;
    double start = 0.0;
    for (int k = 1; k <= M; ++k) {
        const int j = (j0 + k) % M, jp = (j0 + k - 1) % M;
        const double phj = 2 * kPi * (j0 + k) / M, php = 2 * kPi * (j0 + k - 1) / M;
        const bool neg = r[j] < 0.0;
        if (neg && !in) {
            start = refine(php, phj);
            in = true;
        } else if (!neg && in) {
            const double end = refine(php, phj);
            arcs_.push_back({start, end, 0.0, 0.0});
            in = false;
        }
        (void)jp;
    }
    if (arcs_.empty()) throw Error(ErrorCode::Trapped, "no inflow boundary found");
}

double Chart::label(double phi) const {
    const BaseLabel bl{opt_.labeling, &flux_coef_, flux_n0_, chord_dir_};
    for (const auto& a : arcs_) {
        const double p = wrap_from(phi, a.phi0 - 1e-9);
        if (p <= a.phi1 + 1e-9) {
            const double pc = std::clamp(p, a.phi0, a.phi1);
            return std::clamp(a.s0 + bl.value(pc) - bl.value(a.phi0), a.s0, a.s1);
        }
    }
    throw Error(ErrorCode::OutOfChart, "boundary point is not on the inflow boundary");
}

bool Chart::boundary_label(double phi, double& s) const {
    try {
        s = label(phi);
        return true;
    } catch (const Error&) {
        return false;
    }
}

double Chart::label_slope(double phi) const {
    const BaseLabel bl{opt_.labeling, &flux_coef_, flux_n0_, chord_dir_};
    return bl.slope(phi);
}

double Chart::foot_angle(double s) const {
    const BaseLabel bl{opt_.labeling, &flux_coef_, flux_n0_, chord_dir_};
    for (const auto& a : arcs_) {
        if (s < a.s0 || s > a.s1) continue;
        const double base = bl.value(a.phi0) - a.s0;
        auto g = [&](double ph) { return bl.value(ph) - base - s; };
        double ga = g(a.phi0), gb = g(a.phi1);
        if (ga >= 0) return a.phi0;
        if (gb <= 0) return a.phi1;
        boost::uintmax_t it = 200;
        auto tol = [](double x, double y) { return std::abs(x - y) < 1e-15; };
        auto r = boost::math::tools::toms748_solve(g, a.phi0, a.phi1, ga, gb, tol, it);
        return 0.5 * (r.first + r.second);
    }
    throw Error(ErrorCode::OutOfChart, "label outside the chart range");
}

double Chart::back_exit(cplx z, cplx& zf) const {
    if (std::abs(z) > 1.0 + 1e-12) throw Error(ErrorCode::OutOfChart, "query outside the disc");
    ode::Options o;
    o.rtol = opt_.rtol;
    o.atol = opt_.atol;
    o.h_max = 0.1;
    o.t_max = t_max_;
    auto rhs = [&](double, const ode::State<2>& y, ode::State<2>& dy) {
        const cplx m = field_(cplx(y[0], y[1]));
        dy[0] = -m.real();
        dy[1] = -m.imag();
    };
    auto ev = [](const ode::State<2>& y) { return y[0] * y[0] + y[1] * y[1] - 1.0; };
    auto r = ode::integrate<2>(rhs, {z.real(), z.imag()}, ev, o);
    if (r.status != ode::Status::Event) throw Error(ErrorCode::OutOfChart, "back-trace did not reach the boundary");
    zf = {r.y_end[0], r.y_end[1]};
    return r.t_end;
}

double Chart::s_exact(cplx z) const {
    cplx zf;
    back_exit(z, zf);
    return label(std::arg(zf));
}

double Chart::t_exact(cplx z) const {
    cplx zf;
    return back_exit(z, zf);
}

void Chart::s_grad_exact(cplx z, double& s, double& sx, double& sy) const {
    if (std::abs(z) > 1.0 + 1e-12) throw Error(ErrorCode::OutOfChart, "query outside the disc");
    ode::Options o;
    o.rtol = opt_.rtol;
    o.atol = opt_.atol;
    o.h_max = 0.1;
    o.t_max = t_max_;
    // backward flow z' = -mu with tangent vectors v1 = dz/dx0, v2 = dz/dy0
    auto rhs = [&](double, const ode::State<6>& y, ode::State<6>& dy) {
        cplx m, mz, mzb;
        field_.eval_with_derivs(cplx(y[0], y[1]), m, mz, mzb);
        const cplx v1(y[2], y[3]), v2(y[4], y[5]);
        const cplx d1 = -(mz * v1 + mzb * std::conj(v1));
        const cplx d2 = -(mz * v2 + mzb * std::conj(v2));
        dy[0] = -m.real();
        dy[1] = -m.imag();
        dy[2] = d1.real();
        dy[3] = d1.imag();
        dy[4] = d2.real();
        dy[5] = d2.imag();
    };
    auto ev = [](const ode::State<6>& y) { return y[0] * y[0] + y[1] * y[1] - 1.0; };
    auto r = ode::integrate<6>(rhs, {z.real(), z.imag(), 1.0, 0.0, 0.0, 1.0}, ev, o);
    if (r.status != ode::Status::Event) throw Error(ErrorCode::OutOfChart, "back-trace did not reach the boundary");
    const cplx zf(r.y_end[0], r.y_end[1]);
    const double phi = std::arg(zf);
    s = label(phi);
    const cplx zdot = -field_(zf);
    const double den = (std::conj(zf) * zdot).real();
    auto dphi = [&](cplx v) {
        if (r.t_end == 0.0) return (std::conj(zf) * v).imag();  // foot point itself
        const double dT = -(std::conj(zf) * v).real() / den;
        const cplx dz = v + zdot * dT;
        return (std::conj(zf) * dz).imag() / std::norm(zf);
    };
    const double ls = label_slope(phi);
    sx = ls * dphi({r.y_end[2], r.y_end[3]});
    sy = ls * dphi({r.y_end[4], r.y_end[5]});
}

double Chart::xperp_s_exact(cplx z) const {
    double s, sx, sy;
    s_grad_exact(z, s, sx, sy);
    const cplx m = field_(z);
    return orientation_ * (m.imag() * sx - m.real() * sy);
}

void Chart::build_lookup() {
    lookup_n_ = opt_.lookup_n;
    lookup_h_ = 2.0 / (lookup_n_ - 1);
    const std::size_t M = lookup_n_;
    lu_s_.assign(M * M, 0.0);
    lu_x_.assign(M * M, 0.0);
    lu_ok_.assign(M * M, 0);
    parallel_for(M, opt_.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < M; ++j) {
            const cplx z(-1.0 + j * lookup_h_, -1.0 + i * lookup_h_);
            if (std::abs(z) > 1.0 - 1e-9) continue;
            try {
                double s, sx, sy;
                s_grad_exact(z, s, sx, sy);
                const cplx m = field_(z);
                lu_s_[i * M + j] = s;
                lu_x_[i * M + j] = orientation_ * (m.imag() * sx - m.real() * sy);
                lu_ok_[i * M + j] = std::isfinite(s) && std::isfinite(lu_x_[i * M + j]);
            } catch (const Error&) {
            }
        }
    });
}

void Chart::lookup(cplx z, double& s, double& xs) const {
    if (lookup_n_ > 0) {
        const double u = (z.real() + 1.0) / lookup_h_, v = (z.imag() + 1.0) / lookup_h_;
        const int iu = int(std::floor(u)), iv = int(std::floor(v));
        if (iu >= 1 && iv >= 1 && iu + 2 < lookup_n_ && iv + 2 < lookup_n_) {
            auto w = [](double t, double* c) {
                const double t2 = t * t, t3 = t2 * t;
                c[0] = 0.5 * (-t3 + 2 * t2 - t);
                c[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
                c[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
                c[3] = 0.5 * (t3 - t2);
            };
            double wu[4], wv[4];
            w(u - iu, wu);
            w(v - iv, wv);
            double as = 0.0, ax = 0.0;
            bool ok = true;
            const std::size_t M = lookup_n_;
            for (int a = 0; a < 4 && ok; ++a) {
                const std::size_t row = std::size_t(iv - 1 + a) * M;
                for (int b = 0; b < 4; ++b) {
                    const std::size_t idx = row + (iu - 1 + b);
                    if (!lu_ok_[idx]) {
                        ok = false;
                        break;
                    }
                    const double ww = wv[a] * wu[b];
                    as += ww * lu_s_[idx];
                    ax += ww * lu_x_[idx];
                }
            }
            if (ok) {
                s = as;
                xs = ax;
                return;
            }
        }
    }
    double sx, sy;
    s_grad_exact(z, s, sx, sy);
    const cplx m = field_(z);
    xs = orientation_ * (m.imag() * sx - m.real() * sy);
}

double s_of_z(const Chart& c, cplx z) { return c.s_exact(z); }
double t_of_z(const Chart& c, cplx z) { return c.t_exact(z); }

std::pair<cplx, cplx> grad_s(const Chart& c, cplx z, double h) {
    const double r = std::abs(z);
    auto S = [&](double dx, double dy) { return c.s_exact(z + cplx(dx, dy)); };
    auto inside = [&](double dx, double dy) { return std::abs(z + cplx(dx, dy)) <= 1.0; };
    double sx, sy;
    if (r + 2 * h < 1.0) {
        sx = (S(h, 0) - S(-h, 0)) / (2 * h);
        sy = (S(0, h) - S(0, -h)) / (2 * h);
    } else {
        // one-sided second-order stencils pointing into the disc
        const double ex = inside(-2 * h, 0) ? -1.0 : 1.0, ey = inside(0, -2 * h) ? -1.0 : 1.0;
        const double s0 = S(0, 0);
        sx = -ex * (3 * s0 - 4 * S(ex * h, 0) + S(2 * ex * h, 0)) / (2 * h);
        sy = -ey * (3 * s0 - 4 * S(0, ey * h) + S(0, 2 * ey * h)) / (2 * h);
    }
    const cplx d(0.5 * sx, -0.5 * sy);
    return {d, std::conj(d)};
}

std::string chart_dump_csv(const Chart& c) {
    std::ostringstream os;
    os << "curve_id,t,x,y,s\n";
    char buf[160];
    for (std::size_t i = 0; i < c.curves().size(); ++i) {
        const auto& cv = c.curves()[i];
        const double s = c.label(std::arg(cv.z0));
        for (std::size_t k = 0; k < cv.t.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i, cv.t[k], cv.z[k].real(),
                          cv.z[k].imag(), s);
            os << buf;
        }
    }
    return os.str();
}

}  // namespace flowray
