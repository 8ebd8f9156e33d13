#pragma once

#include "vofrac/forward.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace vofrac {

struct ObservationWindow {
    double a;
    double b;
};

/// Interior samples u(x_j, t_m) on (a, b) x [0, T]. values[j][m].
struct ObservationSet {
    ObservationWindow window;
    std::vector<double> x_points;
    std::vector<double> t_points;
    std::vector<std::vector<double>> values;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    /// Mesh the data were generated on (0 when unknown).
    std::size_t synthesis_steps = 0;
    double synthesis_grading = 1.0;

    std::size_t count() const noexcept { return x_points.size() * t_points.size(); }
    void validate(double length, double horizon) const;
};

/// Inversion mesh plus the refinement factor of the synthesis mesh.
struct MeshPair {
    std::size_t steps;
    double grading = 1.0;
    std::size_t synthesis_factor = 4;

    TimeMesh inversion(double horizon) const { return TimeMesh(horizon, steps, grading); }
    TimeMesh synthesis(double horizon) const
    {
        return TimeMesh(horizon, steps * synthesis_factor, grading);
    }
};

struct ObservationDesign {
    ObservationWindow window;
    std::size_t x_count;
    std::size_t t_count; ///< number of t-intervals sampled; must divide the inversion steps
    double noise_level = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr double kMaxNoiseLevel = 0.1;

/// Forward solve on the synthesis mesh, sampled at equispaced interior x and
/// at every (steps / t_count)-th inversion node, with multiplicative Gaussian
/// noise value * (1 + noise_level * xi), xi ~ N(0, 1) from a seeded mt19937_64.
ObservationSet synthesize_observations(const ModelSpec& spec, const ObservationDesign& design,
                                       const MeshPair& meshes, std::size_t modes);

struct ModeExtraction {
    std::vector<double> t_points;
    std::vector<std::vector<double>> modes; ///< [time][mode]
    std::vector<double> residuals;          ///< least-squares residual norm per time
    double condition;
};

inline constexpr double kMaxExtractionCondition = 1e8;

/// Per-time least squares values(., t_m) ~ sum_{i <= count} u_i(t_m) phi_i(x_j).
/// Throws IllPosedError when the design matrix condition number exceeds 1e8.
ModeExtraction extract_modes(const ObservationSet& obs, const SpectralBasis& basis,
                             std::size_t count);

struct InversionConfig {
    std::size_t degree = 1;
    std::size_t max_iter = 50;
    double gn_tolerance = 1e-12;   ///< stop when the RMS misfit drops below this
    double step_tolerance = 1e-6;  ///< stop when |step| <= tol (1 + |c|)
    double tikhonov = 0.0;
    double alpha_star = 0.95;
    std::size_t modes = 16;
    std::size_t modes_used = 4;    ///< modes extracted for the initialization diagnostics
    MeshPair meshes{256, 1.0, 4};
    std::optional<std::vector<double>> initial; ///< default: constant 0.5
    bool allow_inverse_crime = false;

    void validate() const;
};

struct InversionResult {
    std::vector<double> coeffs;
    std::vector<double> residual_history; ///< RMS misfit before each iteration and at exit
    bool converged = false;
    double final_misfit = 0.0;
    std::size_t iterations = 0;           ///< accepted Gauss-Newton updates
    bool inverse_crime = false;
    double extraction_condition = 0.0;    ///< of the diagnostic mode extraction (0 if skipped)
};

/// Observation misfit as a function of the order's monomial coefficients.
class OrderMisfit {
public:
    OrderMisfit(const ModelData& model, const ObservationSet& obs, const InversionConfig& config);

    /// Stacked u_candidate(x_j, t_m) - obs(x_j, t_m), ordered j-major.
    std::vector<double> residual(const std::vector<double>& coeffs) const;

    /// Residual and its Jacobian columns d r / d c_j (analytic, via the order sensitivity).
    std::pair<std::vector<double>, std::vector<std::vector<double>>>
    linearize(const std::vector<double>& coeffs) const;

    double rms(const std::vector<double>& residual) const;
    const TimeMesh& mesh() const noexcept { return mesh_; }
    double alpha_star() const noexcept { return alpha_star_; }

private:
    std::vector<double> assemble(const std::vector<std::vector<double>>& mode_values) const;
    std::pair<std::vector<double>, std::vector<std::vector<double>>>
    linearize_impl(const std::vector<double>& coeffs, bool jacobian) const;

    ModelData model_;
    const ObservationSet* obs_;
    double alpha_star_;
    TimeMesh mesh_;
    std::vector<double> lambdas_;
    std::vector<double> u0_;
    std::vector<std::vector<double>> phi_;     ///< [x][mode]
    std::vector<std::pair<std::size_t, double>> t_map_; ///< node and linear weight of next node
};

/// Residual vector for one candidate (forward solve on the inversion mesh).
std::vector<double> residual(const std::vector<double>& alpha_coeffs, const ObservationSet& obs,
                             const ModelData& model, const InversionConfig& config);

/// Projected Gauss-Newton with Tikhonov regularization and step halving.
InversionResult recover_order(const ObservationSet& obs, const ModelData& model,
                              const InversionConfig& config);

struct ScanEntry {
    std::vector<double> candidate;
    double misfit; ///< RMS residual
};

std::vector<ScanEntry> uniqueness_scan(const ObservationSet& obs, const ModelData& model,
                                       const std::vector<std::vector<double>>& grid,
                                       const InversionConfig& config);

/// Index of the smallest misfit.
std::size_t scan_argmin(const std::vector<ScanEntry>& scan);

/// Grid of constant orders lo, lo + step, ..., hi.
std::vector<std::vector<double>> constant_order_grid(double lo, double hi, double step);

/// Projection onto {c : 0 <= sum c_j t^j <= alpha_star on [0, T]} by repeated
/// clip-and-refit on the dense admissibility sample; nullopt if it fails.
std::optional<std::vector<double>> project_admissible(std::vector<double> coeffs,
                                                      double alpha_star, double horizon);

} // namespace vofrac
