#include "vofrac/app.hpp"

#include "vofrac/csv.hpp"
#include "vofrac/diagnostics.hpp"
#include "vofrac/errors.hpp"
#include "vofrac/forward.hpp"
#include "vofrac/inverse.hpp"

#include <CLI11.hpp>

#include <functional>

namespace vofrac::app {

namespace fs = std::filesystem;

namespace {

struct Loaded {
    ConfigFile file;
    RunConfig config;
    fs::path out;
};

Loaded load(const Options& opts, std::initializer_list<const char*> required)
{
    ConfigFile file = ConfigFile::load(opts.config.string());
    for (const char* key : required)
        if (!file.has(key))
            throw ConfigError(file.source(), 0, std::string("missing required key '") + key + "'");
    RunConfig config = RunConfig::from(file);
    if (opts.seed)
        config.seed = *opts.seed;
    fs::path out = opts.out ? *opts.out : fs::path(config.output_dir);
    fs::create_directories(out);
    return {std::move(file), std::move(config), std::move(out)};
}

int guarded(const std::function<int()>& body, std::ostream& err)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kInputError;
    } catch (const CsvError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const IllPosedError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    }
}

ObservationSet read_observations(const fs::path& path)
{
    return observations_from(CsvTable::read(path.string()));
}

} // namespace

int cli_forward(const Options& opts, std::ostream& log)
{
    auto [file, cfg, out] = load(opts, {"model.alpha"});
    const ModelSpec spec = cfg.model_spec();
    const TimeMesh mesh = cfg.mesh();
    const SolutionField field = solve_forward(spec, mesh, cfg.N, cfg.grid);

    SpectralCoefficients u0;
    for (const auto& m : field.modes)
        u0.values.push_back(m.u0i);

    solution_table(field, cfg.output_x_count, cfg.output_t_stride).save((out / "solution.csv").string());
    modes_table(field).save((out / "modes.csv").string());
    const bool zero = sobolev_norm(field.basis, u0, cfg.stability_gamma) == 0.0;
    const double ratio = zero ? 0.0 : stability_ratio(field, u0, cfg.stability_gamma);
    stability_table(cfg.stability_gamma, ratio, truncation_indicator(u0))
        .save((out / "stability.csv").string());
    log << "forward: M = " << mesh.steps() << ", r = " << mesh.grading() << ", N = " << cfg.N
        << ", stability ratio = " << ratio << '\n';
    return kSuccess;
}

int cli_synth(const Options& opts, std::ostream& log)
{
    auto [file, cfg, out] = load(opts, {"model.alpha", "observe.a", "observe.b"});
    const auto obs = synthesize_observations(cfg.model_spec(), cfg.observation_design(),
                                             cfg.inversion_config().meshes, cfg.N);
    observations_table(obs).save((out / "observations.csv").string());
    log << "synth: " << obs.x_points.size() << " x " << obs.t_points.size()
        << " samples, noise = " << obs.noise_level << ", seed = " << obs.seed << '\n';
    return kSuccess;
}

int cli_invert(const Options& opts, std::ostream& log)
{
    auto [file, cfg, out] = load(opts, {});
    const fs::path obs_path = opts.observations ? *opts.observations : out / "observations.csv";
    const ObservationSet obs = read_observations(obs_path);
    const auto result = recover_order(obs, cfg.model_data(), cfg.inversion_config());
    inversion_table(result).save((out / "inversion.csv").string());
    history_table(result).save((out / "residual_history.csv").string());
    log << "invert: " << (result.converged ? "converged" : "NOT converged") << " after "
        << result.iterations << " updates, misfit = " << result.final_misfit << ", coeffs =";
    for (double c : result.coeffs)
        log << ' ' << c;
    log << '\n';
    if (result.inverse_crime)
        log << "invert: warning: observations were synthesized on the inversion mesh\n";
    return kSuccess;
}

int cli_diagnose(const Options& opts, std::ostream& log)
{
    auto [file, cfg, out] = load(opts, {});
    std::vector<std::vector<double>> orders = cfg.diagnose.orders;
    if (orders.empty()) {
        if (!cfg.alpha)
            throw ConfigError(file.source(), 0,
                              "missing required key 'model.alpha' (or diagnose.orders)");
        orders.push_back(*cfg.alpha);
    }
    std::optional<FitWindow> window;
    if (cfg.diagnose.window)
        window = FitWindow{cfg.diagnose.window->first, cfg.diagnose.window->second};

    std::vector<RegularityReport> reports;
    for (const auto& coeffs : orders) {
        const ModelSpec spec = cfg.model_data().with_order(OrderFunction(coeffs, cfg.alpha_star, cfg.T));
        const double alpha0 = spec.alpha(0.0);
        const TimeMesh mesh(cfg.T, cfg.M, cfg.r ? *cfg.r : default_grading(alpha0));
        const auto field = solve_forward(spec, mesh, cfg.N, cfg.grid);
        reports.push_back(regularity_report(field, alpha0, cfg.diagnose.gamma, window));
        const auto& r = reports.back();
        log << "diagnose: alpha(0) = " << alpha0 << ", slope = " << r.fitted_slope
            << " (expected " << r.expected_slope << "), weighted norm = " << r.weighted_norm
            << ", " << to_string(r.verdict) << '\n';
    }
    regularity_table(reports).save((out / "regularity.csv").string());
    return kSuccess;
}

int cli_scan(const Options& opts, std::ostream& log)
{
    auto [file, cfg, out] = load(opts, {});
    std::vector<std::vector<double>> grid = cfg.scan.candidates;
    if (cfg.scan.constant_range) {
        const auto& r = *cfg.scan.constant_range;
        for (auto& c : constant_order_grid(r[0], r[1], r[2]))
            grid.push_back(std::move(c));
    }
    if (grid.empty())
        throw ConfigError(file.source(), 0,
                          "missing required key 'scan.candidates' (or scan.constant_range)");

    const InversionConfig ic = cfg.inversion_config();
    ObservationSet obs;
    if (opts.observations) {
        obs = read_observations(*opts.observations);
    } else {
        if (!cfg.alpha || !cfg.observe)
            throw ConfigError(file.source(), 0,
                              "scan without --obs needs 'model.alpha' and 'observe.a'/'observe.b' "
                              "to synthesize observations");
        obs = synthesize_observations(cfg.model_spec(), cfg.observation_design(), ic.meshes, cfg.N);
    }
    const auto scan = uniqueness_scan(obs, cfg.model_data(), grid, ic);
    scan_table(scan).save((out / "scan.csv").string());
    const auto best = scan_argmin(scan);
    log << "scan: " << scan.size() << " candidates, argmin #" << best << " misfit "
        << scan[best].misfit << '\n';
    return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err)
{
    CLI::App cli{"Variable-order time-fractional diffusion: forward solves, regularity "
                 "diagnostics and order recovery"};
    cli.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*handler)(const Options&, std::ostream&);
        bool takes_obs;
    };
    const Command commands[] = {
        {"forward", "solve the forward problem (solution.csv, modes.csv, stability.csv)", cli_forward, false},
        {"synth", "synthesize interior observations (observations.csv)", cli_synth, false},
        {"invert", "recover the order from observations (inversion.csv, residual_history.csv)", cli_invert, true},
        {"diagnose", "regularity diagnostics near t = 0 (regularity.csv)", cli_diagnose, false},
        {"scan", "misfit over candidate orders (scan.csv)", cli_scan, true},
    };

    Options opts;
    std::string config, out, obs;
    std::uint64_t seed = 0;
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        CLI::App* sub = cli.add_subcommand(c.name, c.help);
        sub->add_option("--config", config, "configuration file")->required();
        sub->add_option("--out", out, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "random seed (overrides run.seed)");
        if (c.takes_obs)
            sub->add_option("--obs", obs, "observations CSV");
        subs.emplace_back(sub, &c);
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = cli.exit(e, log, msg);
        err << msg.str();
        return code == 0 ? kSuccess : kInputError;
    }

    opts.config = config;
    if (!out.empty())
        opts.out = out;
    if (!obs.empty())
        opts.observations = obs;
    for (const auto& [sub, cmd] : subs) {
        if (!sub->parsed())
            continue;
        if (sub->count("--seed"))
            opts.seed = seed;
        return guarded([&, h = cmd->handler] { return h(opts, log); }, err);
    }
    return kInputError;
}

} // namespace vofrac::app
