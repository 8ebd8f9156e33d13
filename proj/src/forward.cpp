#include "vofrac/forward.hpp"

#include "vofrac/errors.hpp"
#include "vofrac/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vofrac {

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

InitialDatum InitialDatum::sine(std::size_t mode)
{
    if (mode < 1)
        throw PreconditionError("initial datum: sine mode index must be >= 1");
    InitialDatum d(Kind::Sine);
    d.mode_ = mode;
    return d;
}

InitialDatum InitialDatum::samples(std::vector<double> values)
{
    if (values.size() < 3)
        throw PreconditionError("initial datum: need at least three samples");
    InitialDatum d(Kind::Samples);
    d.samples_ = std::move(values);
    return d;
}

InitialDatum InitialDatum::parse(const std::string& name)
{
    if (name == "zero")
        return zero();
    if (name == "parabola")
        return parabola();
    if (name == "sine_mix")
        return sine_mix();
    if (name.rfind("sine:", 0) == 0) {
        const std::string idx = name.substr(5);
        std::size_t pos = 0;
        long long i = 0;
        try {
            i = std::stoll(idx, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != idx.size() || pos == 0 || i < 1)
            throw PreconditionError("initial datum: bad mode index in '" + name + "'");
        return sine(static_cast<std::size_t>(i));
    }
    throw PreconditionError("initial datum: unknown profile '" + name +
                            "' (expected zero, parabola, sine:<i>, sine_mix)");
}

std::string InitialDatum::name() const
{
    switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Parabola: return "parabola";
    case Kind::Sine: return "sine:" + std::to_string(mode_);
    case Kind::SineMix: return "sine_mix";
    case Kind::Samples: return "samples";
    }
    return {};
}

double InitialDatum::operator()(double x, double length) const
{
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Parabola: return x * (length - x);
    case Kind::Sine: return Eigenfunction{mode_, length}(x);
    case Kind::SineMix: {
        double acc = 0.0, w = 1.0;
        for (std::size_t i = 1; i <= 4; ++i, w *= 0.5)
            acc += w * Eigenfunction{i, length}(x);
        return acc;
    }
    case Kind::Samples: {
        const double pos = x / length * static_cast<double>(samples_.size() - 1);
        const auto k = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), samples_.size() - 2);
        const double f = pos - static_cast<double>(k);
        return (1.0 - f) * samples_[k] + f * samples_[k + 1];
    }
    }
    return 0.0;
}

SpectralCoefficients InitialDatum::project(const SpectralBasis& basis, std::size_t grid_points) const
{
    if (kind_ == Kind::Samples)
        return analyze(basis, samples_);
    const auto x = basis.grid(grid_points);
    std::vector<double> f(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        f[k] = (*this)(x[k], basis.length());
    // sin(i pi) is not exactly zero in floating point
    f.front() = 0.0;
    f.back() = 0.0;
    return analyze(basis, f);
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

void ModelSpec::validate() const
{
    if (!(diffusivity > 0.0))
        throw PreconditionError("model: diffusivity K must be positive");
    if (!(length > 0.0))
        throw PreconditionError("model: length L must be positive");
    if (!(horizon > 0.0))
        throw PreconditionError("model: horizon T must be positive");
    if (alpha.horizon() != horizon)
        throw PreconditionError("model: order horizon differs from model horizon T");
    if (u0.kind() == InitialDatum::Kind::Samples &&
        (std::abs(u0(0.0, length)) > 1e-12 || std::abs(u0(length, length)) > 1e-12))
        throw PreconditionError("model: initial datum must vanish at x = 0 and x = L");
}

ModelSpec ModelData::with_order(OrderFunction alpha) const
{
    return {diffusivity, length, horizon, reaction, std::move(alpha), u0};
}

ModelData without_order(const ModelSpec& spec)
{
    return {spec.diffusivity, spec.length, spec.horizon, spec.reaction, spec.u0};
}

double default_grading(double alpha0)
{
    if (alpha0 <= 0.0)
        return 1.0;
    return std::min(4.0, std::max(1.0, 2.0 / (1.0 - alpha0)));
}

std::vector<double> SolutionField::coefficients_at(std::size_t n) const
{
    std::vector<double> c(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        c[i] = modes[i].values.at(n);
    return c;
}

// ---------------------------------------------------------------------------
// Time stepping
// ---------------------------------------------------------------------------

namespace {

// Variable-step BDF2 is zero-stable for step ratios up to 1 + sqrt 2.
constexpr double kMaxBdf2Ratio = 1.0 + std::numbers::sqrt2;

struct DerivativeStencil {
    double current;  // coefficient of u_n
    double previous; // of u_{n-1}
    double older;    // of u_{n-2}
};

DerivativeStencil stencil(const TimeMesh& mesh, std::size_t n)
{
    const double tau = mesh.step(n);
    if (n >= 2) {
        const double ratio = tau / mesh.step(n - 1);
        if (ratio <= kMaxBdf2Ratio) {
            return {(1.0 + 2.0 * ratio) / ((1.0 + ratio) * tau),
                    -(1.0 + ratio) / tau,
                    ratio * ratio / ((1.0 + ratio) * tau)};
        }
    }
    return {1.0 / tau, -1.0 / tau, 0.0};
}

double dot_prefix(std::span<const double> w, std::span<const double> du, std::size_t count)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j)
        acc += w[j] * du[j];
    return acc;
}

// One implicit step solved for the increment y_n - y_{n-1}; increments du[m-1] =
// y_m - y_{m-1} are known for m < n. `source` is added to the step residual.
// Working in increments keeps them accurate when steps are tiny.
double implicit_increment(std::span<const double> y, std::span<const double> du,
                          std::span<const double> weights, const DerivativeStencil& d,
                          std::size_t n, double k, double lambda, double source)
{
    // d.current y_n + d.previous y_{n-1} + d.older y_{n-2}
    //   = d.current du_n - d.older du_{n-1}   (the stencil annihilates constants)
    const double history = dot_prefix(weights, du, n - 1);
    const double older_increment = n >= 2 ? du[n - 2] : 0.0;
    const double wn = weights[n - 1];
    const double rhs = -d.older * older_increment + k * history + lambda * y[n - 1] + source;
    const double diag = d.current + k * wn + lambda;
    if (!(std::abs(diag) > 0.0) || !std::isfinite(diag)) {
        std::ostringstream os;
        os << "mode stepping: singular step coefficient at n = " << n << " (lambda = " << lambda
           << ", k = " << k << ", L1 weight = " << wn << ")";
        throw NumericalError(os.str());
    }
    return -rhs / diag;
}

} // namespace

ModeBatch integrate_modes(const ModelSpec& spec, const TimeMesh& mesh,
                          std::span<const double> lambdas, std::span<const double> u0s,
                          std::size_t sensitivity_coeffs)
{
    if (lambdas.size() != u0s.size())
        throw DomainError("integrate_modes: eigenvalue and initial-value counts differ");
    if (mesh.horizon() != spec.horizon)
        throw DomainError("integrate_modes: mesh horizon differs from model horizon");
    for (double l : lambdas)
        if (!(l > 0.0))
            throw PreconditionError("integrate_modes: eigenvalues must be positive");

    const std::size_t modes = lambdas.size();
    const std::size_t nodes = mesh.size();
    const std::size_t coeffs = sensitivity_coeffs;

    ModeBatch out;
    out.values.assign(modes, std::vector<double>(nodes, 0.0));
    out.increments.assign(modes, std::vector<double>(nodes - 1, 0.0));
    auto& diffs = out.increments;
    out.sensitivities.assign(coeffs, std::vector<std::vector<double>>(modes, std::vector<double>(nodes, 0.0)));
    std::vector<std::vector<std::vector<double>>> sens_diffs(
        coeffs, std::vector<std::vector<double>>(modes, std::vector<double>(nodes - 1, 0.0)));

    for (std::size_t i = 0; i < modes; ++i)
        out.values[i][0] = u0s[i];

    std::vector<double> weights(nodes - 1);
    std::vector<double> dweights(coeffs > 0 ? nodes - 1 : 0);
    std::vector<double> tpow(coeffs);

    for (std::size_t n = 1; n < nodes; ++n) {
        const double tn = mesh[n];
        const double a = spec.alpha(tn);
        const double k = spec.reaction(tn);
        const auto d = stencil(mesh, n);

        if (a == 0.0)
            std::fill_n(weights.begin(), n, 1.0);
        else
            l1_weights(mesh, n, a, weights);
        if (coeffs > 0) {
            l1_weight_sensitivities(mesh, n, a, dweights);
            double p = 1.0;
            for (std::size_t j = 0; j < coeffs; ++j, p *= tn)
                tpow[j] = p;
        }

        for (std::size_t i = 0; i < modes; ++i) {
            auto& y = out.values[i];
            auto& du = diffs[i];
            du[n - 1] = implicit_increment(y, du, weights, d, n, k, lambdas[i], 0.0);
            y[n] = y[n - 1] + du[n - 1];
            if (!std::isfinite(y[n]))
                throw NumericalError("mode stepping: non-finite value at n = " + std::to_string(n));

            if (coeffs == 0)
                continue;
            // d/dalpha of the Caputo term at t_n, then chain rule d alpha / d c_j = t_n^j.
            const double order_sens = k * dot_prefix(dweights, du, n);
            for (std::size_t j = 0; j < coeffs; ++j) {
                auto& s = out.sensitivities[j][i];
                auto& ds = sens_diffs[j][i];
                ds[n - 1] = implicit_increment(s, ds, weights, d, n, k, lambdas[i],
                                               order_sens * tpow[j]);
                s[n] = s[n - 1] + ds[n - 1];
            }
        }
    }
    return out;
}

ModeTrajectory solve_mode(double lambda, double u0i, const ModelSpec& spec, const TimeMesh& mesh)
{
    const double l[] = {lambda};
    const double u[] = {u0i};
    auto batch = integrate_modes(spec, mesh, l, u);
    return {lambda, u0i, mesh, std::move(batch.values.front()), std::move(batch.increments.front())};
}

std::size_t default_grid_points(std::size_t modes)
{
    return std::max<std::size_t>(4 * modes, 1024) + 1;
}

SolutionField solve_forward(const ModelSpec& spec, const TimeMesh& mesh, std::size_t modes,
                            std::size_t grid_points)
{
    spec.validate();
    SpectralBasis basis(spec.diffusivity, spec.length, modes);
    const auto u0 = spec.u0.project(basis, grid_points ? grid_points : default_grid_points(modes));

    std::vector<double> lambdas(modes);
    for (std::size_t i = 0; i < modes; ++i)
        lambdas[i] = basis.eigenvalue(i + 1);

    auto batch = integrate_modes(spec, mesh, lambdas, u0.values);
    SolutionField field{basis, mesh, {}};
    field.modes.reserve(modes);
    for (std::size_t i = 0; i < modes; ++i)
        field.modes.push_back({lambdas[i], u0.values[i], mesh, std::move(batch.values[i]),
                               std::move(batch.increments[i])});
    return field;
}

double evaluate(const SolutionField& field, double x, std::size_t t_index)
{
    if (!(x >= 0.0 && x <= field.basis.length()))
        throw DomainError("evaluate: x outside [0, L]");
    if (t_index >= field.mesh.size())
        throw DomainError("evaluate: time index past end of mesh");
    double acc = 0.0;
    for (std::size_t i = 0; i < field.modes.size(); ++i)
        acc += field.modes[i].values[t_index] * Eigenfunction{i + 1, field.basis.length()}(x);
    return acc;
}

double stability_ratio(const SolutionField& field, const SpectralCoefficients& u0_coeffs,
                       double gamma)
{
    const double base = sobolev_norm(field.basis, u0_coeffs, gamma);
    if (!(base > 0.0))
        throw DomainError("stability_ratio: zero initial datum, ratio undefined");
    double worst = 0.0;
    for (std::size_t n = 0; n < field.mesh.size(); ++n)
        worst = std::max(worst, sobolev_norm(field.basis, field.coefficients_at(n), gamma));
    return worst / base;
}

double truncation_indicator(const SpectralCoefficients& u0_coeffs)
{
    double total = 0.0;
    for (double c : u0_coeffs.values)
        total += c * c;
    if (total == 0.0)
        return 0.0;
    return std::abs(u0_coeffs.values.back()) / std::sqrt(total);
}

} // namespace vofrac
