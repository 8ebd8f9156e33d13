#include "vofrac/diagnostics.hpp"

#include "vofrac/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vofrac {

std::string to_string(Verdict v)
{
    return v == Verdict::Smooth ? "smooth" : "singular";
}

namespace {

std::vector<double> second_difference(const SolutionField& field, std::size_t n)
{
    const TimeMesh& mesh = field.mesh;
    const double left = mesh.step(n);
    const double right = mesh.step(n + 1);
    std::vector<double> d2(field.modes.size());
    for (std::size_t i = 0; i < field.modes.size(); ++i) {
        const auto& du = field.modes[i].increments;
        d2[i] = 2.0 * (du[n] / right - du[n - 1] / left) / (left + right);
    }
    return d2;
}

// |w|_{C^1} + sup t^{exponent} |w''|; the C^1 part uses first differences.
double weighted_norm(const SolutionField& field, double exponent, double gamma)
{
    const TimeMesh& mesh = field.mesh;
    double sup0 = 0.0, sup1 = 0.0, sup2 = 0.0;
    std::vector<double> d1(field.modes.size());
    for (std::size_t n = 0; n < mesh.size(); ++n) {
        sup0 = std::max(sup0, sobolev_norm(field.basis, field.coefficients_at(n), gamma));
        if (n == 0)
            continue;
        for (std::size_t i = 0; i < field.modes.size(); ++i) {
            d1[i] = field.modes[i].increments[n - 1] / mesh.step(n);
        }
        sup1 = std::max(sup1, sobolev_norm(field.basis, d1, gamma));
    }
    for (const auto& s : second_derivative_norms(field, gamma))
        sup2 = std::max(sup2, (exponent == 0.0 ? 1.0 : std::pow(s.t, exponent)) * s.value);
    return std::max(sup0, sup1) + sup2;
}

} // namespace

std::vector<NormSample> second_derivative_norms(const SolutionField& field, double gamma)
{
    const std::size_t steps = field.mesh.steps();
    if (steps < kMinDiagnosticSteps)
        throw DomainError("second_derivative_norms: mesh needs at least 64 steps");
    std::vector<NormSample> out;
    out.reserve(steps - 1);
    for (std::size_t n = kStartupNodes + 1; n < steps; ++n)
        out.push_back({field.mesh[n], sobolev_norm(field.basis, second_difference(field, n), gamma)});
    return out;
}

std::optional<double> fit_singularity_exponent(const std::vector<NormSample>& norms,
                                               FitWindow window)
{
    if (!(window.lo > 0.0 && window.hi > window.lo))
        throw DomainError("fit_singularity_exponent: degenerate window");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const auto& s : norms) {
        if (s.t < window.lo || s.t > window.hi)
            continue;
        if (!(s.value > 0.0))
            return std::nullopt;
        const double x = std::log(s.t), y = std::log(s.value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < kMinFitSamples)
        throw DomainError("fit_singularity_exponent: fewer than 8 samples in window");
    const double c = static_cast<double>(count);
    const double denom = c * sxx - sx * sx;
    if (!(denom > 0.0))
        throw DomainError("fit_singularity_exponent: degenerate window");
    return (c * sxy - sx * sy) / denom;
}

double weighted_cm_norm(const SolutionField& field, int m, double mu, double gamma)
{
    if (m != 2)
        throw DomainError("weighted_cm_norm: only m = 2 is supported");
    if (!(mu >= 0.0 && mu < 1.0))
        throw DomainError("weighted_cm_norm: weight exponent mu must lie in [0, 1)");
    return weighted_norm(field, 1.0 - mu, gamma);
}

FitWindow default_fit_window(double horizon)
{
    return {horizon * 1e-3, horizon * 1e-1};
}

RegularityReport regularity_report(const SolutionField& field, double alpha0, double gamma,
                                   std::optional<FitWindow> window)
{
    const FitWindow w = window.value_or(default_fit_window(field.mesh.horizon()));
    const auto norms = second_derivative_norms(field, gamma);

    RegularityReport r{};
    r.alpha0 = alpha0;
    r.expected_slope = 0.0 - alpha0;
    r.fit_window = w;
    r.fit_nodes = static_cast<std::size_t>(std::count_if(
        norms.begin(), norms.end(), [&](const NormSample& s) { return s.t >= w.lo && s.t <= w.hi; }));
    const auto slope = fit_singularity_exponent(norms, w);
    r.fitted_slope = slope.value_or(0.0);
    r.verdict = (!slope || std::abs(*slope) < kSmoothSlopeThreshold) ? Verdict::Smooth
                                                                      : Verdict::Singular;
    r.weighted_norm = alpha0 > 0.0 ? weighted_cm_norm(field, 2, 1.0 - alpha0, gamma)
                                   : weighted_norm(field, 0.0, gamma);
    for (const auto& s : norms)
        r.unweighted_sup = std::max(r.unweighted_sup, s.value);
    return r;
}

} // namespace vofrac
