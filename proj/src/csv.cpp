#include "vofrac/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vofrac {

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token)
{
    const char* first = token.data();
    const char* last = first + token.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first)))
        ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(last[-1])))
        --last;
    if (first < last && *first == '+')
        ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || first == last)
        throw std::invalid_argument("not a number: '" + token + "'");
    return v;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

} // namespace

CsvTable CsvTable::parse(const std::string& text, const std::string& source)
{
    CsvTable t;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        if (line.front() == '#') {
            const auto body = line.substr(1);
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                t.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            continue;
        }
        auto cells = split(line, ',');
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw CsvError(source + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(t.header.size()) + " columns");
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty())
        throw CsvError(source + ": missing header line");
    return t;
}

CsvTable CsvTable::read(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CsvError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void CsvTable::write(std::ostream& out) const
{
    for (const auto& [k, v] : meta)
        out << "# " << k << " = " << v << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c)
            out << (c ? "," : "") << cells[c];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
}

void CsvTable::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw CsvError("cannot write '" + path + "'");
    write(out);
    if (!out)
        throw CsvError("write failed for '" + path + "'");
}

std::size_t CsvTable::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw CsvError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const
{
    try {
        return parse_double(rows.at(row).at(col));
    } catch (const std::invalid_argument& e) {
        throw CsvError("row " + std::to_string(row + 1) + ", column '" + header.at(col) +
                       "': " + e.what());
    }
}

// ---------------------------------------------------------------------------

CsvTable solution_table(const SolutionField& field, std::size_t x_count, std::size_t t_stride)
{
    CsvTable t;
    t.header = {"t", "x", "u"};
    const auto xs = field.basis.grid(std::max<std::size_t>(x_count, 2));
    const std::size_t stride = std::max<std::size_t>(t_stride, 1);
    std::vector<std::size_t> nodes;
    for (std::size_t n = 0; n < field.mesh.size(); n += stride)
        nodes.push_back(n);
    if (nodes.back() != field.mesh.steps())
        nodes.push_back(field.mesh.steps());
    for (std::size_t n : nodes)
        for (double x : xs)
            t.rows.push_back({format_double(field.mesh[n]), format_double(x),
                              format_double(evaluate(field, x, n))});
    return t;
}

CsvTable modes_table(const SolutionField& field)
{
    CsvTable t;
    t.header = {"t", "i", "u_i"};
    for (std::size_t n = 0; n < field.mesh.size(); ++n)
        for (std::size_t i = 0; i < field.modes.size(); ++i)
            t.rows.push_back({format_double(field.mesh[n]), std::to_string(i + 1),
                              format_double(field.modes[i].values[n])});
    return t;
}

CsvTable stability_table(double gamma, double ratio, double truncation)
{
    CsvTable t;
    t.header = {"gamma", "ratio", "truncation_indicator"};
    t.rows.push_back({format_double(gamma), format_double(ratio), format_double(truncation)});
    return t;
}

CsvTable observations_table(const ObservationSet& obs)
{
    CsvTable t;
    t.meta["window_a"] = format_double(obs.window.a);
    t.meta["window_b"] = format_double(obs.window.b);
    t.meta["seed"] = std::to_string(obs.seed);
    t.meta["noise_level"] = format_double(obs.noise_level);
    t.meta["synthesis_steps"] = std::to_string(obs.synthesis_steps);
    t.meta["synthesis_grading"] = format_double(obs.synthesis_grading);
    t.header = {"x", "t", "value"};
    for (std::size_t j = 0; j < obs.x_points.size(); ++j)
        for (std::size_t m = 0; m < obs.t_points.size(); ++m)
            t.rows.push_back({format_double(obs.x_points[j]), format_double(obs.t_points[m]),
                              format_double(obs.values[j][m])});
    return t;
}

namespace {

const std::string& meta_of(const CsvTable& t, const std::string& key)
{
    const auto it = t.meta.find(key);
    if (it == t.meta.end())
        throw CsvError("missing metadata '# " + key + " = ...'");
    return it->second;
}

double meta_number(const CsvTable& t, const std::string& key)
{
    try {
        return parse_double(meta_of(t, key));
    } catch (const std::invalid_argument& e) {
        throw CsvError("metadata '" + key + "': " + e.what());
    }
}

std::uint64_t meta_count(const CsvTable& t, const std::string& key)
{
    const std::string& s = meta_of(t, key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw CsvError("metadata '" + key + "' is not a non-negative integer");
    return v;
}

} // namespace

ObservationSet observations_from(const CsvTable& table)
{
    ObservationSet obs;
    obs.window = {meta_number(table, "window_a"), meta_number(table, "window_b")};
    obs.seed = meta_count(table, "seed");
    obs.noise_level = meta_number(table, "noise_level");
    if (table.meta.count("synthesis_steps"))
        obs.synthesis_steps = meta_count(table, "synthesis_steps");
    if (table.meta.count("synthesis_grading"))
        obs.synthesis_grading = meta_number(table, "synthesis_grading");

    const auto cx = table.column("x"), ct = table.column("t"), cv = table.column("value");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double x = table.number(r, cx), t = table.number(r, ct);
        if (obs.x_points.empty() || obs.x_points.back() != x) {
            obs.x_points.push_back(x);
            obs.values.emplace_back();
        }
        if (obs.x_points.size() == 1)
            obs.t_points.push_back(t);
        const std::size_t m = obs.values.back().size();
        if (m >= obs.t_points.size() || obs.t_points[m] != t)
            throw CsvError("observations: rows must form a full x-major grid (row " +
                           std::to_string(r + 1) + ")");
        obs.values.back().push_back(table.number(r, cv));
    }
    if (obs.values.empty())
        throw CsvError("observations: no data rows");
    for (const auto& row : obs.values)
        if (row.size() != obs.t_points.size())
            throw CsvError("observations: incomplete x-major grid");
    return obs;
}

CsvTable inversion_table(const InversionResult& result)
{
    CsvTable t;
    t.meta["converged"] = result.converged ? "true" : "false";
    t.meta["iterations"] = std::to_string(result.iterations);
    t.meta["final_misfit"] = format_double(result.final_misfit);
    t.meta["inverse_crime"] = result.inverse_crime ? "true" : "false";
    t.meta["extraction_condition"] = format_double(result.extraction_condition);
    t.header = {"coeff_index", "value"};
    for (std::size_t j = 0; j < result.coeffs.size(); ++j)
        t.rows.push_back({std::to_string(j), format_double(result.coeffs[j])});
    return t;
}

CsvTable history_table(const InversionResult& result)
{
    CsvTable t;
    t.header = {"iteration", "misfit"};
    for (std::size_t k = 0; k < result.residual_history.size(); ++k)
        t.rows.push_back({std::to_string(k), format_double(result.residual_history[k])});
    return t;
}

InversionResult inversion_from(const CsvTable& inversion, const CsvTable& history)
{
    InversionResult r;
    r.converged = meta_of(inversion, "converged") == "true";
    r.iterations = meta_count(inversion, "iterations");
    r.final_misfit = meta_number(inversion, "final_misfit");
    r.inverse_crime = meta_of(inversion, "inverse_crime") == "true";
    r.extraction_condition = meta_number(inversion, "extraction_condition");
    const auto cv = inversion.column("value");
    for (std::size_t k = 0; k < inversion.rows.size(); ++k)
        r.coeffs.push_back(inversion.number(k, cv));
    const auto cm = history.column("misfit");
    for (std::size_t k = 0; k < history.rows.size(); ++k)
        r.residual_history.push_back(history.number(k, cm));
    return r;
}

CsvTable scan_table(const std::vector<ScanEntry>& scan)
{
    CsvTable t;
    std::size_t width = 0;
    for (const auto& e : scan)
        width = std::max(width, e.candidate.size());
    t.header.push_back("candidate_id");
    for (std::size_t j = 0; j < width; ++j)
        t.header.push_back("c" + std::to_string(j));
    t.header.push_back("misfit");
    for (std::size_t k = 0; k < scan.size(); ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (std::size_t j = 0; j < width; ++j)
            row.push_back(format_double(j < scan[k].candidate.size() ? scan[k].candidate[j] : 0.0));
        row.push_back(format_double(scan[k].misfit));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<ScanEntry> scan_from(const CsvTable& table)
{
    const auto cm = table.column("misfit");
    std::vector<ScanEntry> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        ScanEntry e{{}, table.number(r, cm)};
        for (std::size_t c = 1; c < cm; ++c)
            e.candidate.push_back(table.number(r, c));
        out.push_back(std::move(e));
    }
    return out;
}

CsvTable regularity_table(const std::vector<RegularityReport>& reports)
{
    CsvTable t;
    t.header = {"alpha0", "fitted_slope", "expected_slope", "weighted_norm", "verdict"};
    for (const auto& r : reports)
        t.rows.push_back({format_double(r.alpha0), format_double(r.fitted_slope),
                          format_double(r.expected_slope), format_double(r.weighted_norm),
                          to_string(r.verdict)});
    return t;
}

} // namespace vofrac
