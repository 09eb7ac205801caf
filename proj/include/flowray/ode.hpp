#pragma once

// Dormand-Prince 5(4) with Hairer's dense output and event location.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace flowray::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 1e-2;
    double h_max = 0.05;
    double t_max = 1e3;
    double event_tol = 1e-12;
    bool record = false;
};

template <std::size_t N>
struct Step {
    double t0, h;
    std::array<State<N>, 5> rc;

    State<N> at(double t) const {
        const double th = (t - t0) / h, th1 = 1.0 - th;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
        return y;
    }
};

enum class Status { Event, TimeCap, StepUnderflow };

template <std::size_t N>
struct Result {
    Status status = Status::TimeCap;
    double t_end = 0.0;
    State<N> y_end{};
    std::vector<Step<N>> steps;  // filled when Options::record
    std::size_t n_steps = 0;
};

namespace detail {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace detail

// Integrates y' = f(t, y) from t = 0 until event(y) changes sign from negative to
// nonnegative, or t > t_max. f: void(double, const State&, State&). event: double(const State&).
template <std::size_t N, class F, class G>
Result<N> integrate(F&& f, const State<N>& y0, G&& event, const Options& opt) {
    using namespace detail;
    Result<N> res;
    State<N> y = y0, k1, k2, k3, k4, k5, k6, k7, yt, y1;
    double t = 0.0, h = std::min(opt.h_init, opt.h_max);
    f(t, y, k1);
    double g0 = event(y);
    bool first = true;
    int rejects = 0;
    while (true) {
        if (t >= opt.t_max) {
            res.status = Status::TimeCap;
            break;
        }
        if (h < 1e-14) {
            res.status = Status::StepUnderflow;
            break;
        }
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, yt, k2);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, yt, k3);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, yt, k4);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, yt, k5);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, yt, k6);
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(t + h, y1, k7);
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);
        if (!(err <= 1.0)) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (++rejects > 200) {
                res.status = Status::StepUnderflow;
                break;
            }
            continue;
        }
        rejects = 0;
        Step<N> st;
        st.t0 = t;
        st.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            st.rc[0][i] = y[i];
            st.rc[1][i] = y1[i] - y[i];
            st.rc[2][i] = h * k1[i] - st.rc[1][i];
            st.rc[3][i] = st.rc[1][i] - h * k7[i] - st.rc[2][i];
            st.rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        const double g1 = event(y1);
        bool hit = g0 < 0.0 && g1 >= 0.0;
        // started on the event surface and moving outward
        if (first && g0 >= 0.0 && g1 > g0) {
            res.status = Status::Event;
            res.t_end = 0.0;
            res.y_end = y0;
            res.n_steps = 0;
            return res;
        }
        first = false;
        if (hit) {
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 200 && (hi - lo) * h > opt.event_tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (event(st.at(t + mid * h)) < 0.0) lo = mid;
                else hi = mid;
            }
            const double te = t + hi * h;
            res.status = Status::Event;
            res.t_end = te;
            res.y_end = st.at(te);
            if (opt.record) {
                st.h = h;  // dense polynomial is still defined on the full step
                res.steps.push_back(st);
            }
            ++res.n_steps;
            return res;
        }
        if (opt.record) res.steps.push_back(st);
        ++res.n_steps;
        t += h;
        y = y1;
        k1 = k7;
        g0 = g1;
        const double fac = err > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
        h = std::min(h * fac, opt.h_max);
    }
    res.t_end = t;
    res.y_end = y;
    return res;
}

}  // namespace flowray::ode
