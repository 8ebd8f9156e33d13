#pragma once

#include "vofrac/forward.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vofrac {

struct NormSample {
    double t;
    double value;
};

enum class Verdict { Smooth, Singular };

std::string to_string(Verdict v);

struct FitWindow {
    double lo;
    double hi;
};

struct RegularityReport {
    double alpha0;
    double fitted_slope;
    double expected_slope;   ///< -alpha(0)
    double weighted_norm;    ///< C^2_{1-alpha(0)} norm; plain C^2 norm when alpha(0) = 0
    double unweighted_sup;   ///< sup_n |d^2u/dt^2 (t_n)|_gamma
    FitWindow fit_window;
    std::size_t fit_nodes;
    Verdict verdict;
};

inline constexpr std::size_t kMinDiagnosticSteps = 64;
inline constexpr std::size_t kMinFitSamples = 8;
inline constexpr double kSmoothSlopeThreshold = 0.1;
/// Interior nodes whose stencil reaches the first-order starting step.
inline constexpr std::size_t kStartupNodes = 2;

/// Three-point divided differences of the mode trajectories at the interior
/// nodes n > kStartupNodes, measured in the spectral H^gamma norm.
std::vector<NormSample> second_derivative_norms(const SolutionField& field, double gamma);

/// Least-squares slope of ln(value) against ln(t) over samples inside `window`.
/// Returns nullopt when a sample in the window is not positive.
std::optional<double> fit_singularity_exponent(const std::vector<NormSample>& norms,
                                               FitWindow window);

/// |w|_{C^1} + sup_n t_n^{1-mu} |d^2 w/dt^2 (t_n)|_gamma over the mesh (m = 2 only).
double weighted_cm_norm(const SolutionField& field, int m, double mu, double gamma);

/// Default fit window [T 1e-3, T 1e-1].
FitWindow default_fit_window(double horizon);

RegularityReport regularity_report(const SolutionField& field, double alpha0, double gamma,
                                   std::optional<FitWindow> window = std::nullopt);

} // namespace vofrac
