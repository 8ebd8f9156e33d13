#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vofrac {

/// Orthonormal Dirichlet sine mode phi_i(x) = sqrt(2/L) sin(i pi x / L).
struct Eigenfunction {
    std::size_t index;
    double length;

    double operator()(double x) const noexcept;
    double second_derivative(double x) const noexcept;
};

struct Eigenpair {
    double lambda;
    Eigenfunction phi;
};

struct SpectralCoefficients {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    bool operator==(const SpectralCoefficients&) const = default;
};

/// Eigenpairs of -K d^2/dx^2 on [0, L] with homogeneous Dirichlet data,
/// truncated at N modes: lambda_i = K i^2 pi^2 / L^2.
class SpectralBasis {
public:
    SpectralBasis(double diffusivity, double length, std::size_t modes);

    double diffusivity() const noexcept { return diffusivity_; }
    double length() const noexcept { return length_; }
    std::size_t modes() const noexcept { return modes_; }

    double eigenvalue(std::size_t i) const;
    Eigenpair eigenpair(std::size_t i) const;

    /// Minimum number of uniform sample points accepted by analyze().
    std::size_t min_samples() const noexcept { return 4 * modes_ + 1; }

    /// Uniform grid with `points` nodes on [0, L], endpoints included.
    std::vector<double> grid(std::size_t points) const;

private:
    double diffusivity_;
    double length_;
    std::size_t modes_;
};

/// Composite-Simpson projection of uniform samples (endpoints included, odd
/// count >= 4N+1, zero boundary values) onto the first N modes.
SpectralCoefficients analyze(const SpectralBasis& basis, std::span<const double> samples);

/// sum_i c_i phi_i(x) at each point of `x_points`.
std::vector<double> synthesize(const SpectralBasis& basis, const SpectralCoefficients& c,
                               std::span<const double> x_points);
double synthesize(const SpectralBasis& basis, std::span<const double> c, double x);

/// sqrt(sum_i lambda_i^gamma c_i^2).
double sobolev_norm(const SpectralBasis& basis, std::span<const double> c, double gamma);
double sobolev_norm(const SpectralBasis& basis, const SpectralCoefficients& c, double gamma);

/// Composite Simpson on uniform samples over [0, length]; odd sample count.
double simpson(std::span<const double> samples, double length);

} // namespace vofrac
