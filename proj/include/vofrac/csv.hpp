#pragma once

#include "vofrac/diagnostics.hpp"
#include "vofrac/forward.hpp"
#include "vofrac/inverse.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace vofrac {

/// Shortest decimal that round-trips, '.' separator regardless of locale.
std::string format_double(double value);

/// Locale-independent strict parse of a whole token.
double parse_double(const std::string& token);

/// CSV with `# key = value` comment metadata, a header line and data rows.
struct CsvTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable read(const std::string& path);
    static CsvTable parse(const std::string& text, const std::string& source = "<csv>");
    void write(std::ostream& out) const;
    void save(const std::string& path) const;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// solution.csv: t,x,u
CsvTable solution_table(const SolutionField& field, std::size_t x_count, std::size_t t_stride);
// modes.csv: t,i,u_i
CsvTable modes_table(const SolutionField& field);
// stability.csv: gamma,ratio,truncation_indicator
CsvTable stability_table(double gamma, double ratio, double truncation);
// observations.csv: x,t,value
CsvTable observations_table(const ObservationSet& obs);
ObservationSet observations_from(const CsvTable& table);
// inversion.csv: coeff_index,value  (+ metadata)
CsvTable inversion_table(const InversionResult& result);
InversionResult inversion_from(const CsvTable& inversion, const CsvTable& history);
// residual_history.csv: iteration,misfit
CsvTable history_table(const InversionResult& result);
// scan.csv: candidate_id,c0,...,cd,misfit
CsvTable scan_table(const std::vector<ScanEntry>& scan);
std::vector<ScanEntry> scan_from(const CsvTable& table);
// regularity.csv: alpha0,fitted_slope,expected_slope,weighted_norm,verdict
CsvTable regularity_table(const std::vector<RegularityReport>& reports);

} // namespace vofrac
