#pragma once

#include "vofrac/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace vofrac::app {

enum ExitCode : int {
    kSuccess = 0,
    kNumericalFailure = 1,
    kInputError = 2,
};

struct Options {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> observations;
};

int cli_forward(const Options& opts, std::ostream& log);
int cli_synth(const Options& opts, std::ostream& log);
int cli_invert(const Options& opts, std::ostream& log);
int cli_diagnose(const Options& opts, std::ostream& log);
int cli_scan(const Options& opts, std::ostream& log);

/// Full command line: `<prog> <forward|synth|invert|diagnose|scan> --config PATH [--out DIR] [--seed N] [--obs PATH]`.
int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace vofrac::app
