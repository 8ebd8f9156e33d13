#include "vofrac/inverse.hpp"

#include "vofrac/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace vofrac {

namespace {

void check_window(ObservationWindow w, double length)
{
    if (!(w.a >= 0.0 && w.b <= length && w.a < w.b)) {
        std::ostringstream os;
        os << "observation window (" << w.a << ", " << w.b << ") must satisfy 0 <= a < b <= L = "
           << length;
        throw DomainError(os.str());
    }
}

double norm2(const std::vector<double>& v)
{
    double acc = 0.0;
    for (double x : v)
        acc += x * x;
    return std::sqrt(acc);
}

} // namespace

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

void ObservationSet::validate(double length, double horizon) const
{
    check_window(window, length);
    if (x_points.empty() || t_points.empty())
        throw DomainError("observations: empty sample set");
    for (double x : x_points)
        if (!(x > window.a && x < window.b))
            throw DomainError("observations: x point outside the open window (a, b)");
    for (double t : t_points)
        if (!(t >= 0.0 && t <= horizon * (1.0 + 1e-12)))
            throw DomainError("observations: t point outside [0, T]");
    for (std::size_t m = 1; m < t_points.size(); ++m)
        if (!(t_points[m] > t_points[m - 1]))
            throw DomainError("observations: t points must be strictly increasing");
    if (values.size() != x_points.size())
        throw DomainError("observations: value matrix has wrong number of rows");
    for (const auto& row : values)
        if (row.size() != t_points.size())
            throw DomainError("observations: value matrix has wrong number of columns");
    if (!(noise_level >= 0.0))
        throw DomainError("observations: negative noise level");
}

ObservationSet synthesize_observations(const ModelSpec& spec, const ObservationDesign& design,
                                       const MeshPair& meshes, std::size_t modes)
{
    spec.validate();
    check_window(design.window, spec.length);
    if (!(design.noise_level >= 0.0 && design.noise_level <= kMaxNoiseLevel))
        throw DomainError("synthesize_observations: noise level must lie in [0, 0.1]");
    if (design.x_count < 1)
        throw DomainError("synthesize_observations: need at least one x point");
    if (design.t_count < 1 || meshes.steps % design.t_count != 0)
        throw DomainError("synthesize_observations: t_count must divide the inversion mesh steps");
    if (meshes.synthesis_factor < 1)
        throw DomainError("synthesize_observations: synthesis factor must be >= 1");

    const TimeMesh fine = meshes.synthesis(spec.horizon);
    const TimeMesh coarse = meshes.inversion(spec.horizon);
    const SolutionField field = solve_forward(spec, fine, modes);

    ObservationSet obs;
    obs.window = design.window;
    obs.noise_level = design.noise_level;
    obs.seed = design.seed;
    obs.synthesis_steps = fine.steps();
    obs.synthesis_grading = fine.grading();

    const double width = design.window.b - design.window.a;
    for (std::size_t j = 0; j < design.x_count; ++j)
        obs.x_points.push_back(design.window.a + width * static_cast<double>(j + 1) /
                                                     static_cast<double>(design.x_count + 1));
    const std::size_t stride = coarse.steps() / design.t_count;
    std::vector<std::size_t> fine_nodes;
    for (std::size_t n = 0; n <= coarse.steps(); n += stride) {
        obs.t_points.push_back(coarse[n]);
        fine_nodes.push_back(n * meshes.synthesis_factor);
    }

    std::mt19937_64 rng(design.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    obs.values.assign(obs.x_points.size(), std::vector<double>(obs.t_points.size()));
    for (std::size_t j = 0; j < obs.x_points.size(); ++j) {
        for (std::size_t m = 0; m < obs.t_points.size(); ++m) {
            const double exact = evaluate(field, obs.x_points[j], fine_nodes[m]);
            obs.values[j][m] = design.noise_level > 0.0
                ? exact * (1.0 + design.noise_level * gauss(rng))
                : exact;
        }
    }
    return obs;
}

// ---------------------------------------------------------------------------
// Mode extraction
// ---------------------------------------------------------------------------

ModeExtraction extract_modes(const ObservationSet& obs, const SpectralBasis& basis,
                             std::size_t count)
{
    if (count < 1 || count > basis.modes())
        throw DomainError("extract_modes: mode count must lie in 1..N");
    const std::size_t nx = obs.x_points.size();
    if (nx < 2 * count)
        throw DomainError("extract_modes: need at least 2N' observation points");

    Eigen::MatrixXd design(nx, count);
    for (std::size_t j = 0; j < nx; ++j)
        for (std::size_t i = 0; i < count; ++i)
            design(j, i) = Eigenfunction{i + 1, basis.length()}(obs.x_points[j]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!(condition <= kMaxExtractionCondition)) {
        std::ostringstream os;
        os << "extract_modes: design matrix condition number " << condition
           << " exceeds 1e8; use fewer modes or a wider window";
        throw IllPosedError(os.str(), condition);
    }

    ModeExtraction out;
    out.t_points = obs.t_points;
    out.condition = condition;
    Eigen::VectorXd rhs(nx);
    for (std::size_t m = 0; m < obs.t_points.size(); ++m) {
        for (std::size_t j = 0; j < nx; ++j)
            rhs(j) = obs.values[j][m];
        const Eigen::VectorXd c = svd.solve(rhs);
        out.modes.emplace_back(c.data(), c.data() + c.size());
        out.residuals.push_back((design * c - rhs).norm());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Misfit
// ---------------------------------------------------------------------------

void InversionConfig::validate() const
{
    if (degree > kDefaultMaxOrderDegree)
        throw PreconditionError("inversion: polynomial degree exceeds 6");
    if (!(alpha_star > 0.0 && alpha_star < 1.0))
        throw PreconditionError("inversion: alpha_star violates 0 ≤ α(t) ≤ α_* < 1");
    if (!(tikhonov >= 0.0))
        throw PreconditionError("inversion: Tikhonov weight must be >= 0");
    if (modes < 1 || modes_used < 1 || modes_used > modes)
        throw PreconditionError("inversion: need 1 <= modes_used <= modes");
    if (meshes.steps < 1)
        throw PreconditionError("inversion: inversion mesh needs at least one step");
    if (initial && initial->size() != degree + 1)
        throw PreconditionError("inversion: initial guess must have degree + 1 coefficients");
}

OrderMisfit::OrderMisfit(const ModelData& model, const ObservationSet& obs,
                         const InversionConfig& config)
    : model_(model), obs_(&obs), alpha_star_(config.alpha_star),
      mesh_(config.meshes.inversion(model.horizon))
{
    obs.validate(model.length, model.horizon);
    SpectralBasis basis(model.diffusivity, model.length, config.modes);
    u0_ = model.u0.project(basis, default_grid_points(config.modes)).values;
    for (std::size_t i = 1; i <= config.modes; ++i)
        lambdas_.push_back(basis.eigenvalue(i));
    for (double x : obs.x_points) {
        std::vector<double> row(config.modes);
        for (std::size_t i = 0; i < config.modes; ++i)
            row[i] = Eigenfunction{i + 1, model.length}(x);
        phi_.push_back(std::move(row));
    }
    const auto nodes = mesh_.nodes();
    for (double t : obs.t_points) {
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        std::size_t n = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
        if (n >= mesh_.steps()) {
            t_map_.emplace_back(mesh_.steps(), 0.0);
            continue;
        }
        double w = (t - nodes[n]) / (nodes[n + 1] - nodes[n]);
        if (std::abs(t - nodes[n]) <= 1e-12 * model.horizon)
            w = 0.0;
        t_map_.emplace_back(n, w);
    }
}

std::vector<double> OrderMisfit::assemble(const std::vector<std::vector<double>>& mode_values) const
{
    const std::size_t nt = t_map_.size();
    std::vector<double> out(phi_.size() * nt, 0.0);
    for (std::size_t j = 0; j < phi_.size(); ++j) {
        for (std::size_t m = 0; m < nt; ++m) {
            const auto [n, w] = t_map_[m];
            double acc = 0.0;
            for (std::size_t i = 0; i < mode_values.size(); ++i) {
                const auto& u = mode_values[i];
                const double value = w == 0.0 ? u[n] : (1.0 - w) * u[n] + w * u[n + 1];
                acc += phi_[j][i] * value;
            }
            out[j * nt + m] = acc;
        }
    }
    return out;
}

std::vector<double> OrderMisfit::residual(const std::vector<double>& coeffs) const
{
    return linearize_impl(coeffs, false).first;
}

std::pair<std::vector<double>, std::vector<std::vector<double>>>
OrderMisfit::linearize(const std::vector<double>& coeffs) const
{
    return linearize_impl(coeffs, true);
}

std::pair<std::vector<double>, std::vector<std::vector<double>>>
OrderMisfit::linearize_impl(const std::vector<double>& coeffs, bool jacobian) const
{
    const ModelSpec spec = model_.with_order(OrderFunction(coeffs, alpha_star_, model_.horizon));
    const auto batch = integrate_modes(spec, mesh_, lambdas_, u0_, jacobian ? coeffs.size() : 0);
    auto r = assemble(batch.values);
    const std::size_t nt = t_map_.size();
    for (std::size_t j = 0; j < phi_.size(); ++j)
        for (std::size_t m = 0; m < nt; ++m)
            r[j * nt + m] -= obs_->values[j][m];
    std::vector<std::vector<double>> columns;
    for (const auto& s : batch.sensitivities)
        columns.push_back(assemble(s));
    return {std::move(r), std::move(columns)};
}

double OrderMisfit::rms(const std::vector<double>& residual) const
{
    return norm2(residual) / std::sqrt(static_cast<double>(residual.size()));
}

std::vector<double> residual(const std::vector<double>& alpha_coeffs, const ObservationSet& obs,
                             const ModelData& model, const InversionConfig& config)
{
    return OrderMisfit(model, obs, config).residual(alpha_coeffs);
}

// ---------------------------------------------------------------------------
// Gauss-Newton
// ---------------------------------------------------------------------------

std::optional<std::vector<double>> project_admissible(std::vector<double> coeffs,
                                                      double alpha_star, double horizon)
{
    if (OrderFunction::admissible(coeffs, alpha_star, horizon))
        return coeffs;

    const std::size_t samples = kOrderBoundSamples + 1;
    const std::size_t p = coeffs.size();
    Eigen::MatrixXd vander(samples, p);
    std::vector<double> ts(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        ts[s] = horizon * static_cast<double>(s) / static_cast<double>(kOrderBoundSamples);
        double power = 1.0;
        for (std::size_t j = 0; j < p; ++j, power *= ts[s])
            vander(s, j) = power;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vander);

    double margin = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        const Polynomial poly(coeffs);
        Eigen::VectorXd target(samples);
        for (std::size_t s = 0; s < samples; ++s)
            target(s) = std::clamp(poly(ts[s]), margin, alpha_star - margin);
        const Eigen::VectorXd fit = qr.solve(target);
        coeffs.assign(fit.data(), fit.data() + fit.size());
        if (OrderFunction::admissible(coeffs, alpha_star, horizon))
            return coeffs;
        margin = margin == 0.0 ? 1e-10 : std::min(2.0 * margin, 0.25 * alpha_star);
    }
    return std::nullopt;
}

InversionResult recover_order(const ObservationSet& obs, const ModelData& model,
                              const InversionConfig& config)
{
    config.validate();
    if (model.reaction(0.0) == 0.0)
        throw PreconditionError("recover_order: the order is not identifiable when k(0) = 0");

    SpectralBasis basis(model.diffusivity, model.length, config.modes);
    const auto u0 = model.u0.project(basis, default_grid_points(config.modes));
    const double u0_norm = sobolev_norm(basis, u0, 0.0);
    if (!(u0_norm > 0.0) || std::none_of(u0.values.begin(), u0.values.end(), [&](double c) {
            return std::abs(c) > 1e-12 * u0_norm;
        }))
        throw PreconditionError("recover_order: initial datum vanishes; the order is not identifiable");

    InversionResult result;
    if (obs.synthesis_steps != 0) {
        result.inverse_crime = obs.synthesis_steps < 4 * config.meshes.steps ||
                               obs.synthesis_grading != config.meshes.grading;
        if (result.inverse_crime && !config.allow_inverse_crime)
            throw PreconditionError(
                "recover_order: synthesis mesh must be at least 4x finer than the inversion mesh "
                "(set allow_inverse_crime to override)");
    }
    try {
        result.extraction_condition = extract_modes(obs, basis, config.modes_used).condition;
    } catch (const IllPosedError& e) {
        result.extraction_condition = e.condition();
    } catch (const DomainError&) {
        result.extraction_condition = 0.0;
    }

    std::vector<double> c = config.initial.value_or([&] {
        std::vector<double> v(config.degree + 1, 0.0);
        v[0] = 0.5;
        return v;
    }());
    if (!OrderFunction::admissible(c, config.alpha_star, model.horizon))
        throw PreconditionError("recover_order: initial guess violates 0 ≤ α(t) ≤ α_* < 1");
    const std::vector<double> prior = c;
    const std::size_t p = c.size();

    const OrderMisfit misfit(model, obs, config);
    auto objective = [&](const std::vector<double>& r, const std::vector<double>& coeffs) {
        double reg = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            reg += (coeffs[j] - prior[j]) * (coeffs[j] - prior[j]);
        const double rn = norm2(r);
        return rn * rn + config.tikhonov * reg;
    };

    auto [r, columns] = misfit.linearize(c);
    double f = objective(r, c);
    const double sqrt_tik = std::sqrt(config.tikhonov);

    for (std::size_t iter = 0;; ++iter) {
        const double rms = misfit.rms(r);
        result.residual_history.push_back(rms);
        if (rms <= config.gn_tolerance) {
            result.converged = true;
            break;
        }
        if (iter >= config.max_iter)
            break;

        const std::size_t rows = r.size();
        Eigen::MatrixXd a(rows + p, p);
        Eigen::VectorXd b(rows + p);
        for (std::size_t k = 0; k < rows; ++k) {
            for (std::size_t j = 0; j < p; ++j)
                a(k, j) = columns[j][k];
            b(k) = -r[k];
        }
        for (std::size_t j = 0; j < p; ++j) {
            a.row(rows + j).setZero();
            a(rows + j, j) = sqrt_tik;
            b(rows + j) = -sqrt_tik * (c[j] - prior[j]);
        }
        const Eigen::VectorXd step = a.colPivHouseholderQr().solve(b);
        const double c_norm = norm2(c);
        if (!step.allFinite())
            throw NumericalError("recover_order: Gauss-Newton step is not finite");
        if (step.norm() <= config.step_tolerance * (1.0 + c_norm)) {
            result.converged = true;
            break;
        }

        bool accepted = false;
        double scale = 1.0;
        for (int halving = 0; halving < 30 && !accepted; ++halving, scale *= 0.5) {
            std::vector<double> trial(p);
            for (std::size_t j = 0; j < p; ++j)
                trial[j] = c[j] + scale * step(static_cast<Eigen::Index>(j));
            auto projected = project_admissible(std::move(trial), config.alpha_star, model.horizon);
            if (!projected)
                continue;
            auto lin = misfit.linearize(*projected);
            const double f_trial = objective(lin.first, *projected);
            if (f_trial < f) {
                c = std::move(*projected);
                r = std::move(lin.first);
                columns = std::move(lin.second);
                const double decrease = f - f_trial;
                f = f_trial;
                accepted = true;
                ++result.iterations;
                if (decrease <= 1e-14 * f_trial) {
                    result.converged = true;
                    result.residual_history.push_back(misfit.rms(r));
                }
            }
        }
        if (!accepted) {
            // No descent along the projected step: stationary up to the line-search resolution.
            result.converged = step.norm() <= 1e-6 * (1.0 + c_norm);
            break;
        }
        if (result.converged)
            break;
    }

    result.coeffs = c;
    result.final_misfit = misfit.rms(r);
    return result;
}

// ---------------------------------------------------------------------------
// Scan
// ---------------------------------------------------------------------------

std::vector<ScanEntry> uniqueness_scan(const ObservationSet& obs, const ModelData& model,
                                       const std::vector<std::vector<double>>& grid,
                                       const InversionConfig& config)
{
    for (const auto& candidate : grid)
        if (!OrderFunction::admissible(candidate, config.alpha_star, model.horizon))
            throw PreconditionError("uniqueness_scan: candidate violates 0 ≤ α(t) ≤ α_* < 1");
    const OrderMisfit misfit(model, obs, config);
    std::vector<ScanEntry> out;
    out.reserve(grid.size());
    for (const auto& candidate : grid)
        out.push_back({candidate, misfit.rms(misfit.residual(candidate))});
    return out;
}

std::size_t scan_argmin(const std::vector<ScanEntry>& scan)
{
    if (scan.empty())
        throw DomainError("scan_argmin: empty scan");
    return static_cast<std::size_t>(
        std::min_element(scan.begin(), scan.end(),
                         [](const ScanEntry& x, const ScanEntry& y) { return x.misfit < y.misfit; }) -
        scan.begin());
}

std::vector<std::vector<double>> constant_order_grid(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo))
        throw DomainError("constant_order_grid: need lo <= hi and step > 0");
    std::vector<std::vector<double>> grid;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t s = 0; s <= count; ++s)
        grid.push_back({lo + step * static_cast<double>(s)});
    return grid;
}

} // namespace vofrac
