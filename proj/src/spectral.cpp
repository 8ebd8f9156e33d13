#include "vofrac/spectral.hpp"

#include "vofrac/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vofrac {

using std::numbers::pi;

double Eigenfunction::operator()(double x) const noexcept
{
    return std::sqrt(2.0 / length) * std::sin(static_cast<double>(index) * pi * x / length);
}

double Eigenfunction::second_derivative(double x) const noexcept
{
    const double w = static_cast<double>(index) * pi / length;
    return -w * w * (*this)(x);
}

SpectralBasis::SpectralBasis(double diffusivity, double length, std::size_t modes)
    : diffusivity_(diffusivity), length_(length), modes_(modes)
{
    if (!(diffusivity > 0.0) || !std::isfinite(diffusivity))
        throw PreconditionError("spectral basis: diffusivity K must be positive");
    if (!(length > 0.0) || !std::isfinite(length))
        throw PreconditionError("spectral basis: length L must be positive");
    if (modes < 1)
        throw PreconditionError("spectral basis: need at least one mode");
}

double SpectralBasis::eigenvalue(std::size_t i) const
{
    if (i < 1 || i > modes_)
        throw DomainError("spectral basis: mode index " + std::to_string(i) + " outside 1..N");
    const double w = static_cast<double>(i) * pi / length_;
    return diffusivity_ * w * w;
}

Eigenpair SpectralBasis::eigenpair(std::size_t i) const
{
    return {eigenvalue(i), Eigenfunction{i, length_}};
}

std::vector<double> SpectralBasis::grid(std::size_t points) const
{
    if (points < 2)
        throw DomainError("spectral grid: need at least two points");
    std::vector<double> x(points);
    const double h = length_ / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k)
        x[k] = h * static_cast<double>(k);
    x.back() = length_;
    return x;
}

double simpson(std::span<const double> samples, double length)
{
    const std::size_t n = samples.size();
    if (n < 3 || n % 2 == 0)
        throw DomainError("simpson: need an odd number (>= 3) of samples");
    const double h = length / static_cast<double>(n - 1);
    double odd = 0.0, even = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k)
        (k % 2 ? odd : even) += samples[k];
    return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

SpectralCoefficients analyze(const SpectralBasis& basis, std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < basis.min_samples())
        throw DomainError("analyze: need at least 4N+1 = " + std::to_string(basis.min_samples()) +
                          " samples, got " + std::to_string(n));
    if (n % 2 == 0)
        throw DomainError("analyze: composite Simpson needs an odd sample count");
    if (std::abs(samples.front()) > 1e-12 || std::abs(samples.back()) > 1e-12)
        throw PreconditionError("analyze: samples must vanish at x = 0 and x = L (Dirichlet data)");

    const auto x = basis.grid(n);
    SpectralCoefficients c{std::vector<double>(basis.modes())};
    std::vector<double> integrand(n);
    for (std::size_t i = 1; i <= basis.modes(); ++i) {
        const Eigenfunction phi{i, basis.length()};
        for (std::size_t k = 0; k < n; ++k)
            integrand[k] = samples[k] * phi(x[k]);
        c.values[i - 1] = simpson(integrand, basis.length());
    }
    return c;
}

double synthesize(const SpectralBasis& basis, std::span<const double> c, double x)
{
    double acc = 0.0;
    for (std::size_t i = 1; i <= c.size(); ++i)
        acc += c[i - 1] * Eigenfunction{i, basis.length()}(x);
    return acc;
}

std::vector<double> synthesize(const SpectralBasis& basis, const SpectralCoefficients& c,
                               std::span<const double> x_points)
{
    std::vector<double> out;
    out.reserve(x_points.size());
    for (double x : x_points) {
        if (!(x >= 0.0 && x <= basis.length()))
            throw DomainError("synthesize: x outside [0, L]");
        out.push_back(synthesize(basis, c.values, x));
    }
    return out;
}

double sobolev_norm(const SpectralBasis& basis, std::span<const double> c, double gamma)
{
    if (!(gamma >= 0.0))
        throw DomainError("sobolev_norm: gamma must be >= 0");
    double acc = 0.0;
    for (std::size_t i = 1; i <= c.size(); ++i) {
        const double w = static_cast<double>(i) * pi / basis.length();
        const double weight = gamma == 0.0 ? 1.0 : std::pow(basis.diffusivity() * w * w, gamma);
        acc += weight * c[i - 1] * c[i - 1];
    }
    return std::sqrt(acc);
}

double sobolev_norm(const SpectralBasis& basis, const SpectralCoefficients& c, double gamma)
{
    return sobolev_norm(basis, c.values, gamma);
}

} // namespace vofrac
