#include "rtbp/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "rtbp/asymptotics.hpp"
#include "rtbp/core_model.hpp"
#include "rtbp/errors.hpp"
#include "rtbp/homoclinic_frame.hpp"
#include "rtbp/manifold_solver.hpp"
#include "rtbp/melnikov.hpp"
#include "rtbp/numerics.hpp"
#include "rtbp/verify.hpp"

namespace rtbp::cli {

// ---------------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------------

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // no signed zero in output
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace {

double parse_number(const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) throw ConfigError("not a finite number: '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

void write_json_value(std::ostream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                write_json_value(os, it.value(), indent + 2);
            }
            os << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // arrays of plain numbers stay on one line
            bool flat = true;
            for (const auto& e : j) flat = flat && e.is_number();
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write_json_value(os, j[i], indent + 2);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json_value(os, j[i], indent + 2);
            }
            os << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                os << "null";
                return;
            }
            std::string s = format_double(v);
            if (s.find_first_of(".eE") == std::string::npos) s += ".0";
            os << s;
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace

std::vector<double> parse_list(const std::string& spec) {
    if (spec.empty()) throw ConfigError("empty sweep specification");
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw ConfigError("range sweep must be start:stop:count, got '" + spec + "'");
        const double a = parse_number(parts[0]);
        const double b = parse_number(parts[1]);
        const double c = parse_number(parts[2]);
        if (c < 1 || c != std::floor(c) || c > 1e6) throw ConfigError("sweep count must be a positive integer");
        const int n = static_cast<int>(c);
        std::vector<double> out;
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return out;
    }
    std::vector<double> out;
    for (const auto& tok : split(spec, ',')) out.push_back(parse_number(tok));
    return out;
}

void write_json(std::ostream& os, const Json& j) {
    write_json_value(os, j, 0);
    os << "\n";
}

// ---------------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------------

namespace {

struct Options {
    std::string command;
    double rho = 0.2;
    double eps = 0.4;
    double theta0 = 0.7;
    int theta0_grid = 0;
    std::string rho_sweep;
    std::string eps_sweep;
    double tol = 1e-12;
    std::string out = "-";
    std::string format;
    int jobs = 1;
    std::string suite = "all";
    double t_end = 10.0;
    int samples = 101;
};

// Rows of scalar cells plus one JSON object per run.
struct Cell {
    bool numeric = true;
    double num = 0.0;
    std::string text;
};
Cell num(double v) { return {true, v, {}}; }
Cell txt(std::string s) { return {false, 0.0, std::move(s)}; }

struct RunOutput {
    std::vector<std::vector<Cell>> rows;
    Json json;
};

struct Plan {
    std::vector<std::string> columns;
    std::size_t items = 0;
    std::function<RunOutput(std::size_t)> run_item;
    bool all_passed = true;  // verify only
};

std::string default_format(const Options& o) {
    if (!o.format.empty()) return o.format;
    auto ends = [&](const char* ext) {
        const std::string e(ext);
        return o.out.size() >= e.size() && o.out.compare(o.out.size() - e.size(), e.size(), e) == 0;
    };
    if (ends(".json")) return "json";
    if (ends(".csv")) return "csv";
    if (o.command == "manifold" || o.command == "homoclinic" || o.command == "verify") return "json";
    return "csv";
}

std::vector<double> sweep_or(const std::string& spec, double single) {
    return spec.empty() ? std::vector<double>{single} : parse_list(spec);
}

std::vector<double> theta_values(const Options& o) {
    if (o.theta0_grid <= 0) return {o.theta0};
    std::vector<double> th;
    for (int j = 0; j < o.theta0_grid; ++j) th.push_back(2.0 * M_PI * j / o.theta0_grid);
    return th;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void check_eps(const std::vector<double>& eps, double lo, double hi, bool lo_open, const char* cmd) {
    for (double e : eps) {
        const bool ok = (lo_open ? e > lo : e >= lo) && e <= hi;
        if (!ok) {
            std::ostringstream os;
            os << cmd << ": eps=" << format_double(e) << " outside the supported window " << (lo_open ? "(" : "[")
               << lo << ", " << hi << "]";
            throw ConfigError(os.str());
        }
    }
}

void check_rho(const std::vector<double>& rho) {
    for (double r : rho)
        require(r >= 0.0 && r <= 0.5, "rho=" + format_double(r) + " outside [0, 0.5]");
}

Json params_json(double rho, double eps, double theta0) {
    Json j;
    j["rho"] = rho;
    j["eps"] = eps;
    j["theta0"] = theta0;
    return j;
}

struct Triple {
    double rho, eps, theta0;
};

std::vector<Triple> product(const std::vector<double>& rho, const std::vector<double>& eps,
                            const std::vector<double>& th) {
    std::vector<Triple> v;
    for (double r : rho)
        for (double e : eps)
            for (double t : th) v.push_back({r, e, t});
    return v;
}

Plan plan_integrate(const Options& o) {
    const auto rho = sweep_or(o.rho_sweep, o.rho);
    const auto eps = sweep_or(o.eps_sweep, o.eps);
    check_rho(rho);
    check_eps(eps, 0.0, 0.5, true, "integrate");
    require(o.t_end > 0.0 && o.t_end <= 40.0, "integrate: --t-end must lie in (0, 40]");
    require(o.samples >= 2 && o.samples <= 100000, "integrate: --samples must lie in [2, 100000]");
    require(o.tol >= 1e-14 && o.tol <= 1e-3, "--tol must lie in [1e-14, 1e-3]");
    Plan p;
    p.columns = {"rho", "eps", "theta0", "tau", "theta", "X", "Y", "a", "b"};
    const auto items = std::make_shared<std::vector<Triple>>(product(rho, eps, {o.theta0}));
    p.items = items->size();
    p.run_item = [items, o](std::size_t i) {
        const Triple t = (*items)[i];
        const ParamSet ps{t.rho, t.eps, t.theta0};
        OdeSpec spec;
        spec.rel_tol = o.tol;
        spec.abs_tol = o.tol;
        auto field = [&](double, const OdeState<3>& y) {
            const DuffingState d = duffing_rhs({y[0], y[1], y[2]}, ps);
            return OdeState<3>{d.theta, d.X, d.Y};
        };
        const auto tr = integrate_ode<3>(field, {t.theta0, std::sqrt(2.0), 0.0}, 0.0, o.t_end, spec);
        RunOutput r;
        r.json = params_json(t.rho, t.eps, t.theta0);
        Json tau = Json::array(), th = Json::array(), X = Json::array(), Y = Json::array();
        for (int k = 0; k < o.samples; ++k) {
            const double s = o.t_end * k / (o.samples - 1);
            const auto y = tr(s);
            const FrameSample f = eval_frame(s, t.eps);
            r.rows.push_back({num(t.rho), num(t.eps), num(t.theta0), num(s), num(y[0]), num(y[1]), num(y[2]),
                              num(f.a), num(f.b)});
            tau.push_back(s);
            th.push_back(y[0]);
            X.push_back(y[1]);
            Y.push_back(y[2]);
        }
        r.json["steps"] = static_cast<long>(tr.times.size() - 1);
        r.json["tau"] = tau;
        r.json["theta"] = th;
        r.json["X"] = X;
        r.json["Y"] = Y;
        return r;
    };
    return p;
}

Plan plan_homoclinic(const Options& o) {
    const auto rho = sweep_or(o.rho_sweep, o.rho);
    const auto eps = sweep_or(o.eps_sweep, o.eps);
    check_rho(rho);
    check_eps(eps, 0.3, 0.5, false, "homoclinic");
    require(o.tol >= 1e-14 && o.tol <= 1e-3, "--tol must lie in [1e-14, 1e-3]");
    Plan p;
    p.columns = {"rho", "eps", "bracket_lo", "bracket_hi", "theta0_root", "derivative", "iterations"};
    const auto items = std::make_shared<std::vector<Triple>>(product(rho, eps, {o.theta0}));
    p.items = items->size();
    p.run_item = [items, o](std::size_t i) {
        const Triple t = (*items)[i];
        const double lo = t.theta0 - 0.5, hi = t.theta0 + 0.5;
        const HomoclinicRoot h = find_homoclinic(t.rho, t.eps, lo, hi, {}, o.tol);
        RunOutput r;
        r.rows.push_back({num(t.rho), num(t.eps), num(lo), num(hi), num(h.theta0), num(h.derivative),
                          num(h.iterations)});
        r.json["rho"] = t.rho;
        r.json["eps"] = t.eps;
        r.json["bracket"] = Json::array({lo, hi});
        r.json["theta0_root"] = h.theta0;
        r.json["derivative"] = h.derivative;
        r.json["iterations"] = h.iterations;
        return r;
    };
    return p;
}

Json branch_json(const SolveResult& s) {
    Json j;
    j["converged"] = s.report.converged;
    j["iterations"] = s.report.iterations;
    j["residuals"] = s.report.residuals;
    j["contraction_ratios"] = s.report.contraction_ratios;
    j["empirical_ratio"] = s.report.empirical_ratio();
    j["scaled_M0"] = s.trajectory.mM0;
    j["tail_bound"] = s.trajectory.tail_bound;
    j["nodes"] = static_cast<long>(s.trajectory.mM.size());
    return j;
}

Plan plan_manifold(const Options& o) {
    const auto rho = sweep_or(o.rho_sweep, o.rho);
    const auto eps = sweep_or(o.eps_sweep, o.eps);
    check_rho(rho);
    check_eps(eps, 0.0, 0.5, true, "manifold");
    for (double e : eps) require(e >= 0.05, "manifold: eps below 0.05 is outside the solver grid budget");
    require(o.tol >= 1e-14 && o.tol <= 1e-3, "--tol must lie in [1e-14, 1e-3]");
    Plan p;
    p.columns = {"rho",          "eps",          "theta0",          "iterations_stable", "iterations_unstable",
                 "ratio_stable", "ratio_unstable", "scaled_M0_stable", "scaled_M0_unstable", "splitting", "X0"};
    const auto items = std::make_shared<std::vector<Triple>>(product(rho, eps, theta_values(o)));
    p.items = items->size();
    p.run_item = [items, o](std::size_t i) {
        const Triple t = (*items)[i];
        const ParamSet ps{t.rho, t.eps, t.theta0};
        SolverSpec spec;
        spec.tol = o.tol;
        RunOutput r;
        r.json = params_json(t.rho, t.eps, t.theta0);
        if (t.rho == 0.0) {
            // unperturbed: both primary solutions vanish; splitting is the first-order limit
            const double D = splitting_first_order(t.theta0, t.eps, spec);
            r.rows.push_back({num(t.rho), num(t.eps), num(t.theta0), num(0), num(0), num(0), num(0), num(0), num(0),
                              num(D), num(std::sqrt(2.0))});
            r.json["splitting"] = D;
            r.json["note"] = "rho = 0: zero solutions, splitting from the first-order limit";
            return r;
        }
        const SolveResult s = solve_branch(ps, Branch::stable, spec);
        const SolveResult u = solve_branch(ps, Branch::unstable, spec);
        const double D = (s.trajectory.mM0 - u.trajectory.mM0) / t.rho;
        const double X0 = matching_X0(s.trajectory);
        r.rows.push_back({num(t.rho), num(t.eps), num(t.theta0), num(s.report.iterations), num(u.report.iterations),
                          num(s.report.empirical_ratio()), num(u.report.empirical_ratio()), num(s.trajectory.mM0),
                          num(u.trajectory.mM0), num(D), num(X0)});
        r.json["stable"] = branch_json(s);
        r.json["unstable"] = branch_json(u);
        r.json["splitting"] = D;
        r.json["X0"] = X0;
        return r;
    };
    return p;
}

Plan plan_melnikov(const Options& o) {
    const auto eps = sweep_or(o.eps_sweep, o.eps);
    check_eps(eps, 0.3, 0.5, false, "melnikov");
    Plan p;
    p.columns = {"eps", "theta0", "D0_direct", "D0_series", "leading", "leading_printed", "series_tail"};
    const auto ev = std::make_shared<std::vector<double>>(eps);
    const auto th = std::make_shared<std::vector<double>>(theta_values(o));
    p.items = ev->size();
    p.run_item = [ev, th](std::size_t i) {
        const double e = (*ev)[i];
        const auto direct = D0_direct_grid(*th, e);
        const FourierTable tab = fourier_series_D0(e);
        const double tail = tab.tail_estimate();
        RunOutput r;
        r.json["eps"] = e;
        r.json["series_tail"] = tail;
        r.json["odd_coefficients"] = tab.odd;
        r.json["even_coefficients"] = tab.even;
        Json pts = Json::array();
        for (std::size_t k = 0; k < th->size(); ++k) {
            const double t = (*th)[k];
            const double s = tab.evaluate(t);
            const double lc = leading_splitting(t, e, LeadingConstant::corrected);
            const double lp = leading_splitting(t, e, LeadingConstant::printed);
            r.rows.push_back({num(e), num(t), num(direct[k]), num(s), num(lc), num(lp), num(tail)});
            Json q;
            q["theta0"] = t;
            q["D0_direct"] = direct[k];
            q["D0_series"] = s;
            q["leading"] = lc;
            q["leading_printed"] = lp;
            pts.push_back(q);
        }
        r.json["points"] = pts;
        return r;
    };
    return p;
}

Plan plan_asympt(const Options& o) {
    const auto eps = sweep_or(o.eps_sweep, o.eps);
    check_eps(eps, 0.08, 0.5, false, "asympt");
    Plan p;
    p.columns = {"eps", "theta0", "D0_zseries", "K_effective", "leading", "leading_printed", "model1_rel_err",
                 "model2_rel_err"};
    const auto ev = std::make_shared<std::vector<double>>(eps);
    const auto th = std::make_shared<std::vector<double>>(theta_values(o));
    p.items = ev->size();
    p.run_item = [ev, th](std::size_t i) {
        const double e = (*ev)[i];
        // harmonics above the first are below 1e-10 relative once eps < 0.3
        const Truncation tr{e < 0.3 ? 0 : 6, 16};
        auto provider = [](ElementaryKind k, int n, int m, double x) { return elementary_z(k, n, m, x); };
        const FourierTable tab = fourier_series_D0(e, tr, MelnikovForm::corrected, CoefficientSet::derived, provider);
        double rel[2];
        for (int w = 1; w <= 2; ++w) {
            const double L = model_leading(w, e);
            rel[w - 1] = std::abs(model_integral(w, e) - L) / std::fabs(L);
        }
        const double scale = std::sqrt(M_PI / 2.0) * std::pow(e, -5) * std::exp(-1.0 / (3.0 * e * e * e));
        RunOutput r;
        r.json["eps"] = e;
        r.json["model1_rel_err"] = rel[0];
        r.json["model2_rel_err"] = rel[1];
        Json pts = Json::array();
        for (double t : *th) {
            const double d = tab.evaluate(t);
            const double st = std::sin(t);
            const double K = std::fabs(st) > 1e-12 ? d / (scale * st) : std::nan("");
            const double lc = leading_splitting(t, e, LeadingConstant::corrected);
            const double lp = leading_splitting(t, e, LeadingConstant::printed);
            r.rows.push_back({num(e), num(t), num(d), num(K), num(lc), num(lp), num(rel[0]), num(rel[1])});
            Json q;
            q["theta0"] = t;
            q["D0_zseries"] = d;
            q["K_effective"] = K;
            q["leading"] = lc;
            q["leading_printed"] = lp;
            pts.push_back(q);
        }
        r.json["points"] = pts;
        return r;
    };
    return p;
}

Plan plan_verify(const Options& o, std::shared_ptr<bool> all_passed) {
    require(is_suite(o.suite), "unknown suite '" + o.suite + "'");
    Plan p;
    p.columns = {"id", "check", "metric", "value", "passed"};
    p.items = 1;
    p.run_item = [o, all_passed](std::size_t) {
        RunOutput r;
        Json checks = Json::array();
        for (const CheckResult& c : run_suite(o.suite)) {
            *all_passed = *all_passed && c.passed;
            Json j;
            j["id"] = c.id;
            j["check"] = c.key;
            j["title"] = c.title;
            j["rule"] = c.rule;
            j["passed"] = c.passed;
            Json ms = Json::array();
            for (const Metric& m : c.metrics) {
                Json mj;
                mj["name"] = m.name;
                mj["value"] = m.value;
                ms.push_back(mj);
                r.rows.push_back({num(c.id), txt(c.key), txt(m.name), num(m.value), txt(c.passed ? "true" : "false")});
            }
            j["metrics"] = ms;
            j["notes"] = c.notes;
            checks.push_back(j);
        }
        r.json["suite"] = o.suite;
        r.json["checks"] = checks;
        return r;
    };
    return p;
}

// Fan out over a fixed pool; results land in input order. The first failure by input order
// is rethrown after all workers finish.
std::vector<RunOutput> run_pool(const Plan& plan, int jobs) {
    std::vector<RunOutput> out(plan.items);
    std::vector<std::exception_ptr> errs(plan.items);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= plan.items) return;
            try {
                out[i] = plan.run_item(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(plan.items)));
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

std::string canonical_config(const Options& o) {
    // --out and --jobs do not change the content and stay out of the hash
    std::ostringstream os;
    os << "command=" << o.command << ";rho=" << format_double(o.rho) << ";eps=" << format_double(o.eps)
       << ";theta0=" << format_double(o.theta0) << ";theta0_grid=" << o.theta0_grid << ";rho_sweep=" << o.rho_sweep
       << ";eps_sweep=" << o.eps_sweep << ";tol=" << format_double(o.tol) << ";format=" << default_format(o);
    if (o.command == "verify") os << ";suite=" << o.suite;
    if (o.command == "integrate") os << ";t_end=" << format_double(o.t_end) << ";samples=" << o.samples;
    return os.str();
}

Json config_json(const Options& o) {
    Json j;
    j["rho"] = o.rho;
    j["eps"] = o.eps;
    j["theta0"] = o.theta0;
    j["theta0_grid"] = o.theta0_grid;
    j["rho_sweep"] = o.rho_sweep;
    j["eps_sweep"] = o.eps_sweep;
    j["tol"] = o.tol;
    if (o.command == "verify") j["suite"] = o.suite;
    if (o.command == "integrate") {
        j["t_end"] = o.t_end;
        j["samples"] = o.samples;
    }
    return j;
}

void emit(std::ostream& os, const Options& o, const Plan& plan, const std::vector<RunOutput>& runs) {
    const std::string hash = hex64(fnv1a64(canonical_config(o)));
    if (default_format(o) == "json") {
        Json doc;
        doc["schema"] = kSchema;
        doc["command"] = o.command;
        doc["config"] = config_json(o);
        doc["config_hash"] = hash;
        Json arr = Json::array();
        for (const auto& r : runs) arr.push_back(r.json);
        doc["runs"] = arr;
        write_json(os, doc);
        return;
    }
    for (std::size_t i = 0; i < plan.columns.size(); ++i) os << (i ? "," : "") << csv_field(plan.columns[i]);
    os << "\n";
    for (const auto& r : runs)
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_field(row[i].numeric ? format_double(row[i].num) : row[i].text);
            os << "\n";
        }
    os << "# schema=" << kSchema << " command=" << o.command << " config_hash=" << hash << "\n";
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--rho", o.rho, "mass ratio rho = m2")->capture_default_str();
    app->add_option("--eps", o.eps, "eps = 1/|J|")->capture_default_str();
    app->add_option("--theta0", o.theta0, "phase theta0 (bracket centre for homoclinic)")->capture_default_str();
    app->add_option("--theta0-grid", o.theta0_grid, "use N equally spaced theta0 in [0, 2 pi)");
    app->add_option("--rho-sweep", o.rho_sweep, "rho values: a,b,c or start:stop:count");
    app->add_option("--eps-sweep", o.eps_sweep, "eps values: a,b,c or start:stop:count");
    app->add_option("--tol", o.tol, "solver / integrator / root tolerance")->capture_default_str();
    app->add_option("--out", o.out, "output file ('-' for stdout)")->capture_default_str();
    app->add_option("--format", o.format, "csv or json (default from --out extension, else per command)");
    app->add_option("--jobs", o.jobs, "worker threads for sweeps")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Restricted three-body splitting toolkit"};
    app.require_subcommand(1);
    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"integrate", "integrate the perturbed Duffing system from (theta0, sqrt2, 0)"},
        {"homoclinic", "locate a transversal zero of the splitting distance"},
        {"manifold", "Picard solve of the primary stable/unstable solutions"},
        {"melnikov", "first-order splitting D0: direct quadrature vs Fourier series"},
        {"asympt", "z-route series, effective leading constant, model-integral errors"},
        {"verify", "run a verification suite"},
    };
    for (const auto& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        add_common(sc, o);
        if (std::string(s.name) == "homoclinic") sc->get_option("--theta0")->default_val(0.0);
        if (std::string(s.name) == "verify") sc->add_option("--suite", o.suite, "suite name")->capture_default_str();
        if (std::string(s.name) == "integrate") {
            sc->add_option("--t-end", o.t_end, "final time")->capture_default_str();
            sc->add_option("--samples", o.samples, "output samples")->capture_default_str();
        }
        sc->callback([&o, sc] { o.command = sc->get_name(); });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        std::ostringstream os, es;
        const int rc = app.exit(e, os, es);
        out << os.str();
        err << es.str();
        return rc;
    } catch (const CLI::ParseError& e) {
        std::ostringstream os, es;
        app.exit(e, os, es);
        err << es.str() << os.str();
        return kConfigError;
    }

    Plan plan;
    auto all_passed = std::make_shared<bool>(true);
    std::ofstream file;
    try {
        require(o.jobs >= 1 && o.jobs <= 256, "--jobs must lie in [1, 256]");
        require(o.theta0_grid >= 0 && o.theta0_grid <= 100000, "--theta0-grid must lie in [0, 100000]");
        require(std::isfinite(o.theta0) && std::isfinite(o.rho) && std::isfinite(o.eps) && std::isfinite(o.tol),
                "non-finite parameter");
        const std::string fmt = default_format(o);
        require(fmt == "csv" || fmt == "json", "--format must be csv or json");
        if (o.command == "integrate") plan = plan_integrate(o);
        else if (o.command == "homoclinic") plan = plan_homoclinic(o);
        else if (o.command == "manifold") plan = plan_manifold(o);
        else if (o.command == "melnikov") plan = plan_melnikov(o);
        else if (o.command == "asympt") plan = plan_asympt(o);
        else plan = plan_verify(o, all_passed);
        if (o.out != "-") {
            file.open(o.out, std::ios::binary | std::ios::trunc);
            require(static_cast<bool>(file), "cannot open output file '" + o.out + "'");
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    std::vector<RunOutput> runs;
    try {
        runs = run_pool(plan, o.jobs);
    } catch (const NumericalError& e) {
        err << "numerical failure [" << e.name() << "]: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "numerical failure [unclassified]: " << e.what() << "\n";
        return kNumericalFailure;
    }
    std::ostringstream buf;
    emit(buf, o, plan, runs);
    if (o.out == "-") out << buf.str();
    else file << buf.str();
    if (o.command == "verify" && !*all_passed) return kCheckFailed;
    return kOk;
}

}  // namespace rtbp::cli
