#pragma once

#include "vofrac/mesh.hpp"
#include "vofrac/order.hpp"
#include "vofrac/spectral.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vofrac {

/// Initial datum u0(x): a named analytic profile or uniform samples on [0, L].
class InitialDatum {
public:
    enum class Kind { Zero, Parabola, Sine, SineMix, Samples };

    static InitialDatum zero() { return InitialDatum(Kind::Zero); }
    /// x (L - x)
    static InitialDatum parabola() { return InitialDatum(Kind::Parabola); }
    /// Orthonormal mode phi_i.
    static InitialDatum sine(std::size_t mode);
    /// sum_{i=1..4} 2^{1-i} phi_i
    static InitialDatum sine_mix() { return InitialDatum(Kind::SineMix); }
    /// Uniform samples including both endpoints.
    static InitialDatum samples(std::vector<double> values);

    /// Parses "zero", "parabola", "sine:<i>", "sine_mix".
    static InitialDatum parse(const std::string& name);
    std::string name() const;

    Kind kind() const noexcept { return kind_; }
    double operator()(double x, double length) const;

    /// Spectral coefficients against the orthonormal basis.
    SpectralCoefficients project(const SpectralBasis& basis, std::size_t grid_points) const;

private:
    explicit InitialDatum(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::size_t mode_ = 1;
    std::vector<double> samples_;
};

/// u_t + k(t) D^{alpha(t)} u - K u_xx = 0 on [0, L] x (0, T], u(0,t) = u(L,t) = 0.
struct ModelSpec {
    double diffusivity;
    double length;
    double horizon;
    Polynomial reaction;
    OrderFunction alpha;
    InitialDatum u0;

    /// Checks the cross-field constraints (alpha horizon, boundary values of u0).
    void validate() const;
};

/// Model data without the order: what the inverse problem treats as known.
struct ModelData {
    double diffusivity;
    double length;
    double horizon;
    Polynomial reaction;
    InitialDatum u0;

    ModelSpec with_order(OrderFunction alpha) const;
};

ModelData without_order(const ModelSpec& spec);

/// Grading exponent that resolves the initial layer: 1 when alpha(0) = 0,
/// else min(4, max(1, 2 / (1 - alpha(0)))).
double default_grading(double alpha0);

struct ModeTrajectory {
    double lambda;
    double u0i;
    TimeMesh mesh;
    std::vector<double> values;
    /// increments[n-1] = values[n] - values[n-1] as produced by the stepper
    std::vector<double> increments;
};

struct SolutionField {
    SpectralBasis basis;
    TimeMesh mesh;
    std::vector<ModeTrajectory> modes;

    /// Coefficient vector (u_1(t_n), ..., u_N(t_n)).
    std::vector<double> coefficients_at(std::size_t n) const;
};

/// Joint solution of a batch of mode ODEs, optionally with the derivatives
/// of every trajectory with respect to the monomial coefficients of alpha.
struct ModeBatch {
    std::vector<std::vector<double>> values;                     ///< [mode][node]
    std::vector<std::vector<double>> increments;                 ///< [mode][step]
    std::vector<std::vector<std::vector<double>>> sensitivities; ///< [coeff][mode][node]
};

/// Implicit stepping of u_i' + k(t) D^{alpha(t)} u_i = -lambda_i u_i for all
/// given modes at once. The time derivative uses variable-step BDF2 (backward
/// Euler on the first step and wherever the step ratio exceeds 1 + sqrt 2);
/// the Caputo term uses L1 weights frozen at alpha(t_n), k at t_n.
ModeBatch integrate_modes(const ModelSpec& spec, const TimeMesh& mesh,
                          std::span<const double> lambdas, std::span<const double> u0s,
                          std::size_t sensitivity_coeffs = 0);

ModeTrajectory solve_mode(double lambda, double u0i, const ModelSpec& spec, const TimeMesh& mesh);

/// Default spatial quadrature grid: odd, at least 4N+1 and 1025 points.
std::size_t default_grid_points(std::size_t modes);

SolutionField solve_forward(const ModelSpec& spec, const TimeMesh& mesh, std::size_t modes,
                            std::size_t grid_points = 0);

double evaluate(const SolutionField& field, double x, std::size_t t_index);

/// max_n |u(t_n)|_gamma / |u0|_gamma.
double stability_ratio(const SolutionField& field, const SpectralCoefficients& u0_coeffs,
                       double gamma);

/// |u_{0,N}| / |u0|_{L2}: size of the last retained coefficient.
double truncation_indicator(const SpectralCoefficients& u0_coeffs);

} // namespace vofrac
