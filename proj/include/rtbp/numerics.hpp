#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <queue>
#include <tuple>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "rtbp/errors.hpp"

namespace rtbp {

// ---------------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------------
template <class T>
class NeumaierSum {
public:
    void add(const T& x) {
        if constexpr (std::is_same_v<T, double>) {
            const double t = s_ + x;
            if (std::fabs(s_) >= std::fabs(x))
                c_ += (s_ - t) + x;
            else
                c_ += (x - t) + s_;
            s_ = t;
        } else {
            re_.add(x.real());
            im_.add(x.imag());
        }
    }
    T value() const {
        if constexpr (std::is_same_v<T, double>)
            return s_ + c_;
        else
            return T(re_.value(), im_.value());
    }

private:
    double s_ = 0.0;
    double c_ = 0.0;
    struct Part {
        double s = 0.0, c = 0.0;
        void add(double x) {
            const double t = s + x;
            if (std::fabs(s) >= std::fabs(x))
                c += (s - t) + x;
            else
                c += (x - t) + s;
            s = t;
        }
        double value() const { return s + c; }
    };
    Part re_, im_;
};

inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

// ---------------------------------------------------------------------------------
// Adaptive ODE integration: Dormand-Prince 5(4) with the 4th-order continuous extension.
// ---------------------------------------------------------------------------------
struct OdeSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;  // 0: unlimited
    double initial_step = 0.0;
    bool dense_output = true;
    long max_steps = 10'000'000;
};

template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N>
class DenseTrajectory {
public:
    struct Segment {
        double t0, h;
        OdeState<N> r1, r2, r3, r4, r5;
    };

    std::vector<double> times;
    std::vector<OdeState<N>> states;
    std::vector<Segment> segments;
    long rejected = 0;

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    const OdeState<N>& final_state() const { return states.back(); }

    OdeState<N> operator()(double t) const {
        if (segments.empty()) return states.back();
        const bool fwd = times.back() >= times.front();
        // locate segment by bisection on times
        std::size_t lo = 0, hi = times.size() - 1;
        if (fwd) {
            if (t <= times.front()) return states.front();
            if (t >= times.back()) return states.back();
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                (times[mid] <= t ? lo : hi) = mid;
            }
        } else {
            if (t >= times.front()) return states.front();
            if (t <= times.back()) return states.back();
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                (times[mid] >= t ? lo : hi) = mid;
            }
        }
        const Segment& s = segments[lo];
        const double th = (t - s.t0) / s.h;
        const double th1 = 1.0 - th;
        OdeState<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
        return y;
    }
};

// Integrates y' = field(t, y) from t0 to t1. An optional observer(t, y) is called at
// every accepted step (including t0).
template <std::size_t N, class Field, class Observer>
DenseTrajectory<N> integrate_ode(Field&& field, const OdeState<N>& y0, double t0, double t1,
                                 const OdeSpec& spec, Observer&& observer) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw DomainError("ODE tolerances must be positive");

    DenseTrajectory<N> out;
    out.times.push_back(t0);
    out.states.push_back(y0);
    observer(t0, y0);
    if (t1 == t0) return out;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    const double hmax = spec.max_step > 0.0 ? spec.max_step : span;

    OdeState<N> y = y0, k1, k2, k3, k4, k5, k6, k7, yt, ynew;
    k1 = field(t0, y);

    auto norm_scaled = [&](const OdeState<N>& v, const OdeState<N>& ya, const OdeState<N>& yb) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = spec.abs_tol + spec.rel_tol * std::max(std::fabs(ya[i]), std::fabs(yb[i]));
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(N));
    };

    double h = spec.initial_step;
    if (!(h > 0.0)) {
        // Hairer's starting step heuristic
        OdeState<N> zero{};
        const double d0 = norm_scaled(y, y, zero) + 1e-300;
        const double dd1 = norm_scaled(k1, y, zero) + 1e-300;
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
        h0 = std::min(h0, hmax);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + dir * h0 * k1[i];
        const OdeState<N> f1 = field(t0 + dir * h0, yt);
        OdeState<N> df;
        for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1[i];
        const double dd2 = norm_scaled(df, y, zero) / h0;
        const double mx = std::max(dd1, dd2);
        const double h1 = mx <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / mx, 0.2);
        h = std::min({100.0 * h0, h1, hmax});
    }

    double t = t0;
    long steps = 0;
    double err_old = 1e-4;
    bool last_rejected = false;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > spec.max_steps) throw StepSizeUnderflow("ODE step budget exhausted");
        if (h > hmax) h = hmax;
        bool last = false;
        if (h >= std::fabs(t1 - t)) {
            h = std::fabs(t1 - t);
            last = true;
        }
        if (h < 1e-14 * std::max(1.0, std::fabs(t))) {
            std::ostringstream os;
            os << "step size underflow at t=" << t;
            throw StepSizeUnderflow(os.str());
        }
        const double hs = dir * h;
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * a21 * k1[i];
        k2 = field(t + c2 * hs, yt);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = field(t + c3 * hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = field(t + c4 * hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = field(t + c5 * hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = field(t + hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7 = field(t + hs, ynew);
        OdeState<N> errv;
        for (std::size_t i = 0; i < N; ++i)
            errv[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double err = norm_scaled(errv, y, ynew);

        if (err <= 1.0 && std::isfinite(err)) {
            if (spec.dense_output) {
                typename DenseTrajectory<N>::Segment s;
                s.t0 = t;
                s.h = hs;
                for (std::size_t i = 0; i < N; ++i) {
                    s.r1[i] = y[i];
                    s.r2[i] = ynew[i] - y[i];
                    s.r3[i] = hs * k1[i] - s.r2[i];
                    s.r4[i] = s.r2[i] - hs * k7[i] - s.r3[i];
                    s.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                    d7 * k7[i]);
                }
                out.segments.push_back(s);
            }
            t = last ? t1 : t + hs;
            y = ynew;
            k1 = k7;
            out.times.push_back(t);
            out.states.push_back(y);
            observer(t, y);
            // PI step control
            const double e = std::max(err, 1e-10);
            double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 10.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            err_old = std::max(err, 1e-4);
            last_rejected = false;
        } else {
            ++out.rejected;
            const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
            h *= fac;
            last_rejected = true;
        }
    }
    return out;
}

template <std::size_t N, class Field>
DenseTrajectory<N> integrate_ode(Field&& field, const OdeState<N>& y0, double t0, double t1,
                                 const OdeSpec& spec) {
    return integrate_ode<N>(std::forward<Field>(field), y0, t0, t1, spec,
                            [](double, const OdeState<N>&) {});
}

// ---------------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7/15) quadrature on a list of initial panels.
// ---------------------------------------------------------------------------------
template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    int panels = 0;
};

struct QuadSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    double tail_cut = 45.0;
    int max_panels = 20000;
};

template <class T, class F>
QuadResult<T> adaptive_gk15(F&& f, const std::vector<double>& breaks, double abs_tol,
                            double rel_tol, int max_panels) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G7 = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G7::weights();

    struct Panel {
        double a, b;
        T val;
        double err;
        double round;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    auto eval = [&](double a, double b) {
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        const T fc = f(c);
        T k = fc * wk[0];
        T g = fc * wg[0];
        double resabs = magnitude(fc) * wk[0];
        for (std::size_t j = 1; j < xk.size(); ++j) {
            const T f1 = f(c - hw * xk[j]);
            const T f2 = f(c + hw * xk[j]);
            k += (f1 + f2) * wk[j];
            resabs += (magnitude(f1) + magnitude(f2)) * wk[j];
            if (j % 2 == 0) g += (f1 + f2) * wg[j / 2];
        }
        Panel p{a, b, k * hw, 0.0, 50.0 * 2.2e-16 * resabs * std::fabs(hw)};
        p.err = magnitude((k - g) * hw) + p.round;
        return p;
    };

    std::priority_queue<Panel> heap;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) heap.push(eval(breaks[i], breaks[i + 1]));
    int count = static_cast<int>(heap.size());
    auto totals = [&]() {
        auto copy = heap;
        NeumaierSum<T> v;
        double e = 0.0, rd = 0.0;
        while (!copy.empty()) {
            v.add(copy.top().val);
            e += copy.top().err;
            rd += copy.top().round;
            copy.pop();
        }
        return std::tuple<T, double, double>(v.value(), e, rd);
    };
    T value{};
    double error = 0.0, round = 0.0;
    std::tie(value, error, round) = totals();
    // stop at the requested accuracy, or once the estimate is dominated by roundoff
    while (error > std::max({abs_tol, rel_tol * magnitude(value), 2.0 * round})) {
        if (count + 1 > max_panels) {
            std::ostringstream os;
            os << "adaptive quadrature exhausted " << max_panels
               << " panels (error estimate " << error << ")";
            throw PanelBudgetExceeded(os.str());
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel l = eval(worst.a, mid), r = eval(mid, worst.b);
        value = value - worst.val + l.val + r.val;
        error = error - worst.err + l.err + r.err;
        round = round - worst.round + l.round + r.round;
        heap.push(l);
        heap.push(r);
        ++count;
        if (count % 64 == 0) std::tie(value, error, round) = totals();
    }
    std::tie(value, error, round) = totals();
    return {value, error, count};
}

// Symmetric panels [-tail_cut, tail_cut] refined geometrically towards the tails.
std::vector<double> symmetric_geometric_breaks(double tail_cut);

// Improper integral over the real line of an integrand decaying at least like a(tau)^3.
template <class T = double, class F>
QuadResult<T> quad_improper(F&& f, const QuadSpec& spec = {}) {
    return adaptive_gk15<T>(std::forward<F>(f), symmetric_geometric_breaks(spec.tail_cut),
                            spec.abs_tol, spec.rel_tol, spec.max_panels);
}

// ---------------------------------------------------------------------------------
// Oscillatory integrals carrying e^{i q psi(tau)}: panels bounded by multiples of dphi in
// |psi|, Gauss-Legendre on each panel, smooth erfc taper where |psi'| sigma >= window_k.
// ---------------------------------------------------------------------------------
struct OscSpec {
    double dphi = 0.5;
    double max_width = 0.125;
    double sigma = 0.05;
    double window_k = 12.0;
    long max_panels = 4'000'000;
};

struct OscGrid {
    std::vector<double> tau;     // nodes on tau >= 0 (mirror for tau < 0)
    std::vector<double> weight;  // quadrature weight times taper
    double t_end = 0.0;
};

// Breakpoints 0 = t_0 < ... < t_n = T where |psi| crosses multiples of dphi.
std::vector<double> phase_breakpoints(double eps, double T, double dphi, double max_width,
                                      long max_panels);
// Right end and taper centre for a given eps.
double oscillatory_cutoff(double eps, const OscSpec& spec, double* centre = nullptr);
// Half-line grid for oscillatory quadrature, weights include the taper.
OscGrid oscillatory_grid(double eps, const OscSpec& spec = {});

// Sums f(tau) w over both halves of the real line: f(+tau) + f(-tau) at each node.
template <class T, class F>
T quad_oscillatory(F&& f, const OscGrid& g) {
    NeumaierSum<T> s;
    for (std::size_t i = 0; i < g.tau.size(); ++i) {
        const double t = g.tau[i];
        s.add((f(t) + f(-t)) * g.weight[i]);
    }
    return s.value();
}

// ---------------------------------------------------------------------------------
// Fourier projection on [0, 2 pi) with the trapezoid rule.
// ---------------------------------------------------------------------------------
enum class Parity { odd, even };

// (1/pi) int_0^{2pi} g sin(k t) dt from N equispaced samples g(2 pi j / N).
double sine_coefficient(const std::vector<double>& samples, int k);
double cosine_coefficient(const std::vector<double>& samples, int k);
std::vector<double> sample_periodic(const std::function<double(double)>& g, int N);

// Harmonic k = 2m+1 (odd) or 2m (even).
double fourier_project(const std::function<double(double)>& g, int m, Parity parity, int N = 512);

// ---------------------------------------------------------------------------------
// Root finding: TOMS 748 bracketing solver with a central-difference derivative report.
// ---------------------------------------------------------------------------------
struct RootReport {
    double root = 0.0;
    double derivative = 0.0;
    int iterations = 0;
};

template <class F>
RootReport find_zero(F&& f, double lo, double hi, double tol = 1e-12, double deriv_step = 1e-5) {
    double flo = f(lo), fhi = f(hi);
    RootReport r;
    auto deriv = [&](double x) {
        const double h = deriv_step * std::max(1.0, std::fabs(x));
        return (f(x + h) - f(x - h)) / (2.0 * h);
    };
    if (flo == 0.0) {
        r.root = lo;
        r.derivative = deriv(lo);
        return r;
    }
    if (fhi == 0.0) {
        r.root = hi;
        r.derivative = deriv(hi);
        return r;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os << "no sign change on [" << lo << ", " << hi << "]: f=" << flo << ", " << fhi;
        throw NoSignChange(os.str());
    }
    boost::uintmax_t iters = 200;
    auto stop = [tol](double a, double b) { return std::fabs(b - a) <= tol; };
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
    r.root = 0.5 * (a + b);
    r.iterations = static_cast<int>(iters);
    r.derivative = deriv(r.root);
    return r;
}

}  // namespace rtbp
