#include "rtbp/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "rtbp/homoclinic_frame.hpp"

namespace rtbp {

std::vector<double> symmetric_geometric_breaks(double tail_cut) {
    if (!(tail_cut > 0.0)) throw DomainError("tail_cut must be positive");
    std::vector<double> pos{0.5, 1.0};
    while (pos.back() * 2.0 < tail_cut) pos.push_back(pos.back() * 2.0);
    // finer panels on the tails where the a^3 decay is steep
    std::vector<double> fine;
    for (double t = pos.back() + 4.0; t < tail_cut; t += 4.0) fine.push_back(t);
    pos.insert(pos.end(), fine.begin(), fine.end());
    pos.push_back(tail_cut);
    std::vector<double> out;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
    out.push_back(0.0);
    out.insert(out.end(), pos.begin(), pos.end());
    return out;
}

namespace {

// |psi| is increasing on tau >= 0 for eps < 0.63; solve |psi(t)| = target by Newton from t0.
double phase_crossing(double eps, double target, double t0, double t_hi) {
    double lo = t0, hi = t_hi;
    double t = t0;
    for (int it = 0; it < 100; ++it) {
        const double g = -homoclinic_psi(t, eps) - target;
        if (g < 0.0)
            lo = t;
        else
            hi = t;
        const double d = -homoclinic_psi_rate(t, eps);
        double tn = d > 0.0 ? t - g / d : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) <= 1e-15 * std::max(1.0, t)) return tn;
        t = tn;
    }
    return t;
}

}  // namespace

std::vector<double> phase_breakpoints(double eps, double T, double dphi, double max_width,
                                      long max_panels) {
    if (!(eps > 0.0) || eps >= 0.63) throw DomainError("phase panels need 0 < eps < 0.63");
    std::vector<double> br{0.0};
    double t = 0.0;
    double level = 0.0;
    while (t < T) {
        level += dphi;
        double next = T;
        if (-homoclinic_psi(T, eps) > level) next = phase_crossing(eps, level, t, T);
        // subdivide long panels (near tau = 0 the phase moves slowly for larger eps)
        const int pieces = static_cast<int>(std::ceil((next - t) / max_width - 1e-12));
        for (int i = 1; i <= pieces; ++i) br.push_back(t + (next - t) * i / pieces);
        t = next;
        if (static_cast<long>(br.size()) > max_panels)
            throw PanelBudgetExceeded("oscillatory panel budget exhausted");
    }
    br.back() = T;
    return br;
}

double oscillatory_cutoff(double eps, const OscSpec& spec, double* centre) {
    // tau_s: |psi'(tau_s)| sigma = window_k
    const double need = spec.window_k / spec.sigma;
    double ts = 0.0;
    if (-homoclinic_psi_rate(0.0, eps) < need) {
        double lo = 0.0, hi = 1.0;
        while (-homoclinic_psi_rate(hi, eps) < need) hi *= 2.0;
        for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
            const double mid = 0.5 * (lo + hi);
            (-homoclinic_psi_rate(mid, eps) < need ? lo : hi) = mid;
        }
        ts = hi;
    }
    const double tm = ts + 8.0 * spec.sigma;
    if (centre) *centre = tm;
    return tm + 8.0 * spec.sigma;
}

OscGrid oscillatory_grid(double eps, const OscSpec& spec) {
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    double tm = 0.0;
    const double T = oscillatory_cutoff(eps, spec, &tm);
    const auto br = phase_breakpoints(eps, T, spec.dphi, spec.max_width, spec.max_panels);
    OscGrid g;
    g.t_end = T;
    const double s2 = std::sqrt(2.0) * spec.sigma;
    auto push = [&](double t, double wt) {
        const double taper = 0.5 * std::erfc((t - tm) / s2);
        g.tau.push_back(t);
        // the tau = 0 node would otherwise be counted twice by the mirrored sum
        g.weight.push_back(wt * taper);
    };
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double c = 0.5 * (br[i] + br[i + 1]), hw = 0.5 * (br[i + 1] - br[i]);
        // GL with an even number of points has no node at the centre
        for (std::size_t j = 0; j < x.size(); ++j) {
            push(c - hw * x[j], hw * w[j]);
            push(c + hw * x[j], hw * w[j]);
        }
    }
    return g;
}

std::vector<double> sample_periodic(const std::function<double(double)>& g, int N) {
    if (N <= 0) throw DomainError("sample count must be positive");
    std::vector<double> s(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) s[static_cast<std::size_t>(j)] = g(2.0 * M_PI * j / N);
    return s;
}

double sine_coefficient(const std::vector<double>& samples, int k) {
    const std::size_t N = samples.size();
    NeumaierSum<double> s;
    for (std::size_t j = 0; j < N; ++j)
        s.add(samples[j] * std::sin(2.0 * M_PI * static_cast<double>((static_cast<long>(k) * static_cast<long>(j)) % static_cast<long>(N)) / static_cast<double>(N)));
    return 2.0 * s.value() / static_cast<double>(N);
}

double cosine_coefficient(const std::vector<double>& samples, int k) {
    const std::size_t N = samples.size();
    NeumaierSum<double> s;
    for (std::size_t j = 0; j < N; ++j)
        s.add(samples[j] * std::cos(2.0 * M_PI * static_cast<double>((static_cast<long>(k) * static_cast<long>(j)) % static_cast<long>(N)) / static_cast<double>(N)));
    return 2.0 * s.value() / static_cast<double>(N);
}

double fourier_project(const std::function<double(double)>& g, int m, Parity parity, int N) {
    if (m < 0 || (parity == Parity::even && m == 0))
        throw IndexError("harmonic index out of range");
    const int k = parity == Parity::odd ? 2 * m + 1 : 2 * m;
    return sine_coefficient(sample_periodic(g, N), k);
}

}  // namespace rtbp
