// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "vofrac/app.hpp"
#include "vofrac/csv.hpp"
#include "vofrac/diagnostics.hpp"
#include "vofrac/fracops.hpp"
#include "vofrac/forward.hpp"
#include "vofrac/inverse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace vofrac;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const std::vector<double> kOrders{0.2, 0.5, 0.8};

// 1. L1 operator against the power rule, and observed rate on t^2 and sin t.
void operator_correctness(Outcome& out)
{
    const std::size_t m = 1024;
    const TimeMesh mesh(1.0, m);
    out.detail << "rel err at t=T, M=1024:";
    for (double p : {1.0, 2.0})
        for (double a : kOrders) {
            const auto g = SampledFunction::from(mesh, [p](double t) { return std::pow(t, p); });
            const auto alpha = OrderFunction::constant(a, 0.95, 1.0);
            const double exact = oracle::caputo_power(p, a, 1.0);
            const double rel = std::abs(caputo_vo(g, alpha, m) - exact) / exact;
            out.check(rel <= 1e-4, "t^" + fmt(p) + " a=" + fmt(a) + " relative error " + fmt(rel));
            out.detail << " t^" << p << '/' << a << '=' << fmt(rel);
        }
    out.detail << "; rates";

    struct Case {
        const char* name;
        std::function<double(double)> g;
        std::function<double(double)> dg;
    };
    const Case cases[] = {
        {"t^2", [](double t) { return t * t; }, [](double s) { return 2.0 * s; }},
        {"sin", [](double t) { return std::sin(t); }, [](double s) { return std::cos(s); }},
    };
    for (const auto& c : cases)
        for (double a : kOrders) {
            const double exact = oracle::caputo_quadrature(c.dg, a, 1.0);
            std::vector<double> errors;
            for (std::size_t m : {128, 256, 512, 1024}) {
                const TimeMesh h(1.0, m);
                errors.push_back(std::abs(caputo(SampledFunction::from(h, c.g), a, m) - exact));
            }
            double rate = 1e9;
            for (std::size_t i = 1; i < errors.size(); ++i)
                rate = std::min(rate, std::log2(errors[i - 1] / errors[i]));
            out.check(rate >= 2.0 - a - 0.15,
                      std::string(c.name) + " a=" + fmt(a) + " rate " + fmt(rate));
            out.detail << ' ' << c.name << '/' << a << '=' << fmt(rate);
        }
}

// 2. alpha = 0 is the exact increment; variable order is the constant order frozen at t_n.
void identity_and_frozen(Outcome& out)
{
    const TimeMesh mesh(2.0, 200, 2.0);
    const std::vector<std::function<double(double)>> gs{
        [](double t) { return std::exp(-t) + 0.1; },
        [](double t) { return t * t * t - t; },
        [](double t) { return std::sin(3.0 * t) + std::sqrt(t); },
    };
    const auto zero = OrderFunction({0.0}, 0.95, 2.0);
    const auto varying = OrderFunction({0.1, 0.3, -0.05}, 0.95, 2.0);
    std::size_t identity_mismatch = 0, frozen_mismatch = 0, total = 0;
    for (const auto& gf : gs) {
        const auto g = SampledFunction::from(mesh, gf);
        for (std::size_t n = 1; n < mesh.size(); ++n, ++total) {
            if (caputo_vo(g, zero, n) != g.values[n] - g.values[0])
                ++identity_mismatch;
            if (caputo_vo(g, varying, n) != caputo(g, varying(mesh[n]), n))
                ++frozen_mismatch;
        }
    }
    out.check(identity_mismatch == 0, std::to_string(identity_mismatch) + " identity mismatches");
    out.check(frozen_mismatch == 0, std::to_string(frozen_mismatch) + " frozen-order mismatches");
    out.detail << total << " nodes x 2 checks, bitwise";
}

// 3. Analytic order sensitivity against a central difference of the operator itself.
void sensitivity_kernel(Outcome& out)
{
    const TimeMesh mesh(1.0, 1024);
    double worst = 0.0;
    for (double p : {1.0, 2.0})
        for (double a : kOrders) {
            const auto g = SampledFunction::from(mesh, [p](double t) { return std::pow(t, p); });
            for (std::size_t n : {std::size_t{16}, std::size_t{256}, std::size_t{1024}}) {
                const double analytic = caputo_order_sensitivity(g, a, n);
                const double fd =
                    oracle::derivative([&](double b) { return caputo(g, b, n); }, a, 1e-4);
                worst = std::max(worst, std::abs(analytic - fd) / std::abs(fd));
            }
        }
    out.check(worst <= 1e-4, "relative error " + fmt(worst));
    out.detail << "max rel err " << fmt(worst);
}

ModelSpec scalar_model(std::vector<double> k, OrderFunction alpha, double horizon = 1.0)
{
    return ModelSpec{1.0, 1.0, horizon, Polynomial(std::move(k)), std::move(alpha),
                     InitialDatum::zero()};
}

// 4. Heat limit and the alpha = 0 linear ODE.
void heat_limit(Outcome& out)
{
    const TimeMesh mesh(1.0, 2048);
    const SpectralBasis basis(1.0, M_PI, 3);
    const auto heat = scalar_model({0.0}, OrderFunction::constant(0.5, 0.95, 1.0));
    double worst = 0.0;
    for (std::size_t i = 1; i <= basis.modes(); ++i) {
        const double lambda = basis.eigenvalue(i);
        const auto tr = solve_mode(lambda, 1.0, heat, mesh);
        for (std::size_t n = 0; n < mesh.size(); ++n)
            worst = std::max(worst, std::abs(tr.values[n] - std::exp(-lambda * mesh[n])));
    }
    out.check(worst <= 1e-4, "heat error " + fmt(worst));

    const double kappa = 1.0, lambda = 1.0;
    const auto ode = scalar_model({kappa}, OrderFunction({0.0}, 0.95, 1.0));
    const auto tr = solve_mode(lambda, 1.0, ode, mesh);
    double ode_err = 0.0;
    for (std::size_t n = 0; n < mesh.size(); ++n) {
        const double exact =
            (kappa + lambda * std::exp(-(lambda + kappa) * mesh[n])) / (lambda + kappa);
        ode_err = std::max(ode_err, std::abs(tr.values[n] - exact));
    }
    out.check(ode_err <= 1e-4, "alpha=0 ODE error " + fmt(ode_err));
    out.detail << "heat lambda=1,4,9 max err " << fmt(worst) << "; alpha=0 ODE max err "
               << fmt(ode_err);
}

// 5. Self-convergence against an M = 16384 run on the same grading.
void self_convergence(Outcome& out)
{
    struct Case {
        const char* name;
        std::vector<double> alpha;
        double grading;
        double min_ratio;
    };
    const Case cases[] = {
        {"t/2", {0.0, 0.5}, 1.0, 1.8},
        {"0.3", {0.3}, default_grading(0.3), 1.5},
        {"0.5", {0.5}, default_grading(0.5), 1.5},
    };
    const std::size_t fine = 16384;
    for (const auto& c : cases) {
        const auto spec = scalar_model({1.0}, OrderFunction(c.alpha, 0.95, 1.0));
        const auto ref = solve_mode(1.0, 1.0, spec, TimeMesh(1.0, fine, c.grading));
        std::vector<double> errors;
        for (std::size_t m : {64, 128, 256, 512}) {
            const auto tr = solve_mode(1.0, 1.0, spec, TimeMesh(1.0, m, c.grading));
            errors.push_back(std::abs(tr.values.back() - ref.values.back()));
        }
        out.detail << c.name << " (r=" << fmt(c.grading) << ") ratios";
        for (std::size_t i = 1; i < errors.size(); ++i) {
            const double ratio = errors[i - 1] / errors[i];
            out.check(ratio >= c.min_ratio, std::string(c.name) + " ratio " + fmt(ratio));
            out.detail << ' ' << fmt(ratio);
        }
        out.detail << "; ";
    }
}

// 6. Singularity exponent of the second time derivative near t = 0.
ModelSpec regularity_model(std::vector<double> alpha)
{
    return ModelSpec{0.1, 1.0, 1.0, Polynomial({1.0}), OrderFunction(std::move(alpha), 0.95, 1.0),
                     InitialDatum::sine(1)};
}

void regularity(Outcome& out)
{
    const double gamma = 0.0;
    for (double a0 : kOrders) {
        const auto spec = regularity_model({a0});
        std::vector<RegularityReport> reports;
        for (std::size_t m : {256, 512, 1024}) {
            const auto field = solve_forward(spec, TimeMesh(1.0, m, default_grading(a0)), 4);
            reports.push_back(regularity_report(field, a0, gamma));
        }
        const auto& fit = reports[1];
        out.check(std::abs(fit.fitted_slope + a0) <= 0.1,
                  "a0=" + fmt(a0) + " slope " + fmt(fit.fitted_slope));
        out.detail << "a0=" << a0 << ": slope " << fmt(fit.fitted_slope) << ", weighted";
        for (std::size_t i = 1; i < reports.size(); ++i) {
            const double drift =
                std::abs(reports[i].weighted_norm / reports[i - 1].weighted_norm - 1.0);
            const double growth = reports[i].unweighted_sup / reports[i - 1].unweighted_sup;
            out.check(drift <= 0.2, "a0=" + fmt(a0) + " weighted drift " + fmt(drift));
            out.check(growth >= 1.3, "a0=" + fmt(a0) + " sup growth " + fmt(growth));
            out.detail << " drift " << fmt(drift) << " growth x" << fmt(growth);
        }
        out.detail << "; ";
    }
    const auto smooth = regularity_model({0.0, 0.5});
    const auto field = solve_forward(smooth, TimeMesh(1.0, 512, 1.0), 4);
    const auto report = regularity_report(field, 0.0, gamma);
    out.check(report.fitted_slope >= -0.1, "t/2 slope " + fmt(report.fitted_slope));
    out.detail << "alpha=t/2: slope " << fmt(report.fitted_slope);
}

// Twin-experiment setup shared by 7, 8, 9.
ModelSpec twin_model(std::vector<double> alpha)
{
    return ModelSpec{0.1, 1.0, 1.0, Polynomial({1.0}), OrderFunction(std::move(alpha), 0.95, 1.0),
                     InitialDatum::sine_mix()};
}

InversionConfig twin_config()
{
    InversionConfig c;
    c.modes = 8;
    c.meshes = MeshPair{256, 2.0, 4};
    return c;
}

ObservationSet twin_observations(const ModelSpec& truth, double noise, std::uint64_t seed)
{
    const auto c = twin_config();
    return synthesize_observations(truth, ObservationDesign{{0.2, 0.8}, 16, 64, noise, seed},
                                   c.meshes, c.modes);
}

// 7. Order recovery.
void order_recovery(Outcome& out)
{
    const auto linear = twin_model({0.3, 0.2});
    auto r1 = recover_order(twin_observations(linear, 0.0, 0), without_order(linear), twin_config());
    const double e0 = std::abs(r1.coeffs[0] - 0.3), e1 = std::abs(r1.coeffs[1] - 0.2);
    out.check(r1.converged, "linear truth did not converge");
    out.check(!r1.inverse_crime, "linear truth flagged as inverse crime");
    out.check(e0 <= 1e-2 && e1 <= 1e-2, "linear coefficient error " + fmt(std::max(e0, e1)));
    out.detail << "linear: (" << r1.coeffs[0] << ", " << r1.coeffs[1] << "), misfit "
               << fmt(r1.final_misfit) << "; ";

    const auto constant = twin_model({0.5});
    auto cfg = twin_config();
    cfg.degree = 0;
    cfg.tikhonov = 1e-6;
    cfg.initial = std::vector<double>{0.3};
    const auto r2 = recover_order(twin_observations(constant, 1e-3, 42), without_order(constant), cfg);
    const double e2 = std::abs(r2.coeffs[0] - 0.5);
    out.check(e2 <= 5e-2, "noisy constant error " + fmt(e2));
    out.detail << "noisy constant (seed 42): " << r2.coeffs[0];
}

// 8. Uniqueness scan over constant orders.
void uniqueness(Outcome& out)
{
    const auto truth = twin_model({0.5});
    auto cfg = twin_config();
    cfg.degree = 0;
    const auto grid = constant_order_grid(0.10, 0.90, 0.05);
    const auto scan = uniqueness_scan(twin_observations(truth, 0.0, 0), without_order(truth), grid, cfg);
    const auto best = scan_argmin(scan);
    double second = INFINITY;
    std::size_t ties = 0;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        if (i == best)
            continue;
        second = std::min(second, scan[i].misfit);
        ties += scan[i].misfit <= scan[best].misfit;
    }
    const double at = scan[best].candidate[0];
    out.check(grid.size() == 17, "grid has " + std::to_string(grid.size()) + " entries");
    out.check(std::abs(at - 0.5) < 1e-12, "argmin at " + fmt(at));
    out.check(ties == 0, "minimum not strict");
    out.check(second >= 10.0 * scan[best].misfit, "second/min ratio " + fmt(second / scan[best].misfit));
    out.detail << "argmin " << at << " misfit " << fmt(scan[best].misfit) << ", second best "
               << fmt(second) << " (x" << fmt(second / scan[best].misfit) << ")";
}

// 9. Mode extraction from 16 interior points.
void extraction(Outcome& out)
{
    const auto truth = twin_model({0.3, 0.2});
    const std::size_t modes = 4;
    const MeshPair meshes{256, 2.0, 4};
    const auto obs = synthesize_observations(truth, ObservationDesign{{0.2, 0.8}, 16, 64, 0.0, 0},
                                             meshes, modes);
    const SpectralBasis basis(truth.diffusivity, truth.length, modes);
    const auto fine = meshes.synthesis(1.0);
    const auto field = solve_forward(truth, fine, modes);
    const auto ext = extract_modes(obs, basis, modes);

    double worst = 0.0;
    for (std::size_t m = 0; m < ext.t_points.size(); ++m) {
        const auto it = std::find(fine.nodes().begin(), fine.nodes().end(), ext.t_points[m]);
        const auto exact = field.coefficients_at(static_cast<std::size_t>(it - fine.nodes().begin()));
        for (std::size_t i = 0; i < modes; ++i)
            worst = std::max(worst, std::abs(ext.modes[m][i] - exact[i]) / std::abs(exact[i]));
    }
    out.check(worst <= 1e-6, "relative error " + fmt(worst));
    out.detail << ext.t_points.size() << " times, max rel err " << fmt(worst) << ", cond "
               << fmt(ext.condition);
}

// 10. Byte-identical reruns and reader round trips.
std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int cli(std::vector<std::string> args)
{
    std::vector<const char*> argv{"vofrac"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream log, err;
    return app::run(static_cast<int>(argv.size()), argv.data(), log, err);
}

void determinism(Outcome& out)
{
    const fs::path root = fs::temp_directory_path() / "vofrac_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path config = root / "twin.cfg";
    std::ofstream(config) << "model.K = 0.1\nmodel.L = 1\nmodel.T = 1\nmodel.k = 1\n"
                             "model.alpha = 0.3, 0.2\nmodel.u0 = sine_mix\n"
                             "mesh.M = 128\nmesh.r = 2\nbasis.N = 8\n"
                             "output.x_count = 11\noutput.t_stride = 8\n"
                             "observe.a = 0.2\nobserve.b = 0.8\nobserve.x_count = 16\n"
                             "observe.t_count = 32\nobserve.noise = 0.001\n"
                             "diagnose.orders = 0.3 | 0, 0.5\n"
                             "scan.constant_range = 0.1, 0.9, 0.1\n";

    const char* commands[] = {"forward", "synth", "invert", "diagnose", "scan"};
    for (const char* run : {"a", "b"}) {
        const auto dir = (root / run).string();
        for (const char* c : commands) {
            const int code = cli({c, "--config", config.string(), "--out", dir, "--seed", "7"});
            out.check(code == 0, std::string(c) + " exit " + std::to_string(code));
        }
    }

    const char* files[] = {"solution.csv", "modes.csv", "stability.csv", "observations.csv",
                           "inversion.csv", "residual_history.csv", "regularity.csv", "scan.csv"};
    std::size_t identical = 0, round_trips = 0;
    for (const char* f : files) {
        const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
        out.check(!a.empty(), std::string(f) + " missing");
        if (!a.empty() && a == b)
            ++identical;
        else
            out.check(false, std::string(f) + " differs between runs");

        std::ostringstream rewritten;
        CsvTable::parse(a).write(rewritten);
        if (rewritten.str() == a)
            ++round_trips;
        else
            out.check(false, std::string(f) + " does not round-trip as a table");
    }

    const auto dir = root / "a";
    auto typed = [&](const char* what, const std::string& original, const CsvTable& again) {
        std::ostringstream s;
        again.write(s);
        out.check(s.str() == original, std::string(what) + " typed round trip differs");
    };
    const auto obs_text = slurp(dir / "observations.csv");
    typed("observations", obs_text, observations_table(observations_from(CsvTable::parse(obs_text))));
    const auto inv_text = slurp(dir / "inversion.csv");
    const auto hist_text = slurp(dir / "residual_history.csv");
    const auto inv = inversion_from(CsvTable::parse(inv_text), CsvTable::parse(hist_text));
    typed("inversion", inv_text, inversion_table(inv));
    typed("residual_history", hist_text, history_table(inv));
    const auto scan_text = slurp(dir / "scan.csv");
    typed("scan", scan_text, scan_table(scan_from(CsvTable::parse(scan_text))));

    out.detail << identical << "/8 files byte-identical across runs, " << round_trips
               << "/8 table round trips, typed readers checked";
    fs::remove_all(root);
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    void (*run)(Outcome&);
};

} // namespace

int main()
{
    const Criterion criteria[] = {
        {1, "operator correctness", 10, operator_correctness},
        {2, "identity and frozen-order limits", 10, identity_and_frozen},
        {3, "order sensitivity kernel", 10, sensitivity_kernel},
        {4, "forward heat limit", 30, heat_limit},
        {5, "self-convergence", 300, self_convergence},
        {6, "regularity dichotomy", 300, regularity},
        {7, "order recovery", 600, order_recovery},
        {8, "uniqueness scan", 600, uniqueness},
        {9, "mode extraction", 30, extraction},
        {10, "determinism and I/O", 600, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.check(seconds <= c.budget_seconds, "runtime over " + fmt(c.budget_seconds) + " s");
        failed += !out.pass;
        std::printf("criterion %2d %-34s %s  (%.2f s)  %s\n", c.id, c.name,
                    out.pass ? "PASS" : "FAIL", seconds, out.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
                std::size(criteria));
    return failed == 0 ? 0 : 1;
}
