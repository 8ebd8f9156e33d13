#pragma once

#include "vofrac/forward.hpp"
#include "vofrac/inverse.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vofrac {

/// Configuration problem, optionally tied to a source line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Raw `section.key = value` entries with their line numbers. `#` starts a comment.
class ConfigFile {
public:
    struct Entry {
        std::string value;
        std::size_t line;
    };

    static ConfigFile parse(const std::string& text, const std::string& source = "<config>");
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const Entry* find(const std::string& key) const;
    const std::string& source() const noexcept { return source_; }
    const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::size_t count(const std::string& key) const;
    std::size_t count_or(const std::string& key, std::size_t fallback) const;
    std::vector<double> list(const std::string& key) const;
    /// `|`-separated coefficient lists.
    std::vector<std::vector<double>> list_of_lists(const std::string& key) const;
    std::string text(const std::string& key) const;
    bool flag_or(const std::string& key, bool fallback) const;

private:
    const Entry& require(const std::string& key) const;

    std::string source_;
    std::map<std::string, Entry> entries_;
};

struct ObserveSettings {
    double a;
    double b;
    std::size_t x_count = 16;
    std::size_t t_count = 0; ///< 0: every inversion node
    double noise = 0.0;
    std::size_t synthesis_factor = 4;
    bool operator==(const ObserveSettings&) const = default;
};

struct InvertSettings {
    std::size_t degree = 1;
    std::size_t max_iter = 50;
    double tol = 1e-12;
    double step_tol = 1e-6;
    double tikhonov = 0.0;
    std::optional<std::vector<double>> initial;
    std::size_t modes_used = 4;
    bool allow_inverse_crime = false;
    bool operator==(const InvertSettings&) const = default;
};

struct DiagnoseSettings {
    double gamma = 0.0;
    std::vector<std::vector<double>> orders; ///< empty: the model order
    std::optional<std::pair<double, double>> window;
    bool operator==(const DiagnoseSettings&) const = default;
};

struct ScanSettings {
    std::vector<std::vector<double>> candidates;
    std::optional<std::vector<double>> constant_range; ///< lo, hi, step
    bool operator==(const ScanSettings&) const = default;
};

/// Everything a CLI run needs.
struct RunConfig {
    double K = 1.0;
    double L = 1.0;
    double T = 1.0;
    std::vector<double> k{1.0};
    std::optional<std::vector<double>> alpha;
    double alpha_star = 0.95;
    std::string u0 = "parabola";          ///< profile name
    std::optional<std::string> u0_file;   ///< whitespace/comma separated uniform samples

    std::size_t M = 0;
    std::optional<double> r;              ///< nullopt: automatic grading
    std::size_t N = 32;
    std::size_t grid = 0;                 ///< 0: automatic

    double stability_gamma = 0.0;
    std::size_t output_x_count = 33;
    std::size_t output_t_stride = 1;
    std::string output_dir = ".";
    std::uint64_t seed = 0;

    std::optional<ObserveSettings> observe;
    InvertSettings invert;
    DiagnoseSettings diagnose;
    ScanSettings scan;

    bool operator==(const RunConfig&) const = default;

    static RunConfig from(const ConfigFile& file);
    static RunConfig load(const std::string& path);
    /// Canonical text form; `from(parse(emit()))` reproduces the config.
    std::string emit() const;

    /// Model with the configured order (requires model.alpha).
    ModelSpec model_spec() const;
    ModelData model_data() const;
    InitialDatum initial_datum() const;
    /// Grading exponent: configured, else from the configured (or initial) order at t = 0.
    double grading() const;
    TimeMesh mesh() const;
    InversionConfig inversion_config() const;
    ObservationDesign observation_design() const;
};

} // namespace vofrac
