#include "vofrac/config.hpp"

#include "vofrac/csv.hpp"
#include "vofrac/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace vofrac {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, std::size_t line)
{
    return line ? source + ":" + std::to_string(line) : source;
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "model.K", "model.L", "model.T", "model.k", "model.alpha", "model.alpha_star",
        "model.u0", "model.u0_file",
        "mesh.M", "mesh.r", "basis.N", "basis.grid",
        "forward.gamma", "output.x_count", "output.t_stride", "output.dir", "run.seed",
        "observe.a", "observe.b", "observe.x_count", "observe.t_count", "observe.noise",
        "observe.synthesis_factor",
        "invert.degree", "invert.max_iter", "invert.tol", "invert.step_tol", "invert.tikhonov",
        "invert.initial", "invert.modes_used", "invert.allow_inverse_crime",
        "diagnose.gamma", "diagnose.orders", "diagnose.window",
        "scan.candidates", "scan.constant_range",
    };
    return keys;
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? ", " : "") + format_double(v[k]);
    return out;
}

std::vector<double> split_numbers(const std::string& text)
{
    std::vector<double> out;
    std::istringstream is(text);
    std::string cell;
    while (std::getline(is, cell, ','))
        out.push_back(parse_double(trim(cell)));
    return out;
}

} // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(where(source, line) + ": " + message), line_(line)
{
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& source)
{
    ConfigFile file;
    file.source_ = source;
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source, lineno, "expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.find('.') == std::string::npos)
            throw ConfigError(source, lineno, "key '" + key + "' must have the form section.key");
        if (!known_keys().count(key))
            throw ConfigError(source, lineno, "unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError(source, lineno, "key '" + key + "' has an empty value");
        if (const auto prev = file.entries_.find(key); prev != file.entries_.end())
            throw ConfigError(source, lineno,
                              "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(prev->second.line) + ")");
        file.entries_[key] = {value, lineno};
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, 0, "cannot read config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

const ConfigFile::Entry* ConfigFile::find(const std::string& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void ConfigFile::fail(const std::string& key, const std::string& message) const
{
    const Entry* e = find(key);
    throw ConfigError(source_, e ? e->line : 0, "key '" + key + "': " + message);
}

const ConfigFile::Entry& ConfigFile::require(const std::string& key) const
{
    const Entry* e = find(key);
    if (!e)
        throw ConfigError(source_, 0, "missing required key '" + key + "'");
    return *e;
}

double ConfigFile::number(const std::string& key) const
{
    const Entry& e = require(key);
    try {
        return parse_double(e.value);
    } catch (const std::invalid_argument&) {
        fail(key, "expected a number, got '" + e.value + "'");
    }
}

double ConfigFile::number_or(const std::string& key, double fallback) const
{
    return has(key) ? number(key) : fallback;
}

std::size_t ConfigFile::count(const std::string& key) const
{
    const Entry& e = require(key);
    std::size_t v = 0;
    const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (res.ec != std::errc() || res.ptr != e.value.data() + e.value.size())
        fail(key, "expected a non-negative integer, got '" + e.value + "'");
    return v;
}

std::size_t ConfigFile::count_or(const std::string& key, std::size_t fallback) const
{
    return has(key) ? count(key) : fallback;
}

std::vector<double> ConfigFile::list(const std::string& key) const
{
    const Entry& e = require(key);
    try {
        return split_numbers(e.value);
    } catch (const std::invalid_argument&) {
        fail(key, "expected a comma-separated list of numbers, got '" + e.value + "'");
    }
}

std::vector<std::vector<double>> ConfigFile::list_of_lists(const std::string& key) const
{
    const Entry& e = require(key);
    std::vector<std::vector<double>> out;
    std::istringstream is(e.value);
    std::string group;
    try {
        while (std::getline(is, group, '|'))
            out.push_back(split_numbers(trim(group)));
    } catch (const std::invalid_argument&) {
        fail(key, "expected '|'-separated lists of numbers, got '" + e.value + "'");
    }
    return out;
}

std::string ConfigFile::text(const std::string& key) const
{
    return require(key).value;
}

bool ConfigFile::flag_or(const std::string& key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const std::string v = text(key);
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    fail(key, "expected true or false, got '" + v + "'");
}

// ---------------------------------------------------------------------------

RunConfig RunConfig::from(const ConfigFile& f)
{
    RunConfig c;
    c.K = f.number("model.K");
    c.L = f.number("model.L");
    c.T = f.number("model.T");
    c.M = f.count("mesh.M");
    if (!(c.K > 0.0))
        f.fail("model.K", "diffusivity must be positive");
    if (!(c.L > 0.0))
        f.fail("model.L", "length must be positive");
    if (!(c.T > 0.0))
        f.fail("model.T", "horizon must be positive");
    if (c.M < 1)
        f.fail("mesh.M", "need at least one time step");

    if (f.has("model.k"))
        c.k = f.list("model.k");
    c.alpha_star = f.number_or("model.alpha_star", c.alpha_star);
    if (!(c.alpha_star > 0.0 && c.alpha_star < 1.0))
        f.fail("model.alpha_star", "value " + format_double(c.alpha_star) +
                                       " violates the bound 0 ≤ α(t) ≤ α_* < 1");
    auto check_order = [&](const std::string& key, const std::vector<double>& coeffs) {
        if (coeffs.size() > kDefaultMaxOrderDegree + 1)
            f.fail(key, "order polynomial degree exceeds 6");
        const double v = OrderFunction::bound_violation(coeffs, c.alpha_star, c.T);
        if (v > 0.0)
            f.fail(key, "order leaves the admissible band by " + format_double(v) +
                            "; required 0 ≤ α(t) ≤ α_* < 1 on [0, T]");
    };
    if (f.has("model.alpha")) {
        c.alpha = f.list("model.alpha");
        check_order("model.alpha", *c.alpha);
    }
    if (f.has("model.u0"))
        c.u0 = f.text("model.u0");
    try {
        InitialDatum::parse(c.u0);
    } catch (const PreconditionError& e) {
        f.fail("model.u0", e.what());
    }
    if (f.has("model.u0_file"))
        c.u0_file = f.text("model.u0_file");

    if (f.has("mesh.r") && f.text("mesh.r") != "auto") {
        c.r = f.number("mesh.r");
        if (!(*c.r >= 1.0))
            f.fail("mesh.r", "grading exponent must be >= 1 (or 'auto')");
    }
    c.N = f.count_or("basis.N", c.N);
    if (c.N < 1)
        f.fail("basis.N", "need at least one mode");
    c.grid = f.count_or("basis.grid", c.grid);
    if (c.grid != 0 && (c.grid < 4 * c.N + 1 || c.grid % 2 == 0))
        f.fail("basis.grid", "quadrature grid must be odd and at least 4N+1");

    c.stability_gamma = f.number_or("forward.gamma", c.stability_gamma);
    if (!(c.stability_gamma >= 0.0))
        f.fail("forward.gamma", "gamma must be >= 0");
    c.output_x_count = f.count_or("output.x_count", c.output_x_count);
    if (c.output_x_count < 2)
        f.fail("output.x_count", "need at least two output points");
    c.output_t_stride = f.count_or("output.t_stride", c.output_t_stride);
    if (c.output_t_stride < 1)
        f.fail("output.t_stride", "stride must be >= 1");
    if (f.has("output.dir"))
        c.output_dir = f.text("output.dir");
    if (f.has("run.seed")) {
        const std::string s = f.text("run.seed");
        const auto res = std::from_chars(s.data(), s.data() + s.size(), c.seed);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            f.fail("run.seed", "expected a non-negative integer");
    }

    if (f.has("observe.a") || f.has("observe.b")) {
        ObserveSettings o{f.number("observe.a"), f.number("observe.b")};
        if (!(o.a >= 0.0 && o.b <= c.L && o.a < o.b))
            f.fail("observe.b", "window must satisfy 0 <= a < b <= L");
        o.x_count = f.count_or("observe.x_count", o.x_count);
        if (o.x_count < 1)
            f.fail("observe.x_count", "need at least one observation point");
        o.t_count = f.count_or("observe.t_count", o.t_count);
        if (o.t_count != 0 && c.M % o.t_count != 0)
            f.fail("observe.t_count", "must divide mesh.M");
        o.noise = f.number_or("observe.noise", o.noise);
        if (!(o.noise >= 0.0 && o.noise <= kMaxNoiseLevel))
            f.fail("observe.noise", "relative noise level must lie in [0, 0.1]");
        o.synthesis_factor = f.count_or("observe.synthesis_factor", o.synthesis_factor);
        if (o.synthesis_factor < 1)
            f.fail("observe.synthesis_factor", "must be >= 1");
        c.observe = o;
    }

    auto& inv = c.invert;
    inv.degree = f.count_or("invert.degree", inv.degree);
    if (inv.degree > kDefaultMaxOrderDegree)
        f.fail("invert.degree", "degree must be <= 6");
    inv.max_iter = f.count_or("invert.max_iter", inv.max_iter);
    inv.tol = f.number_or("invert.tol", inv.tol);
    inv.step_tol = f.number_or("invert.step_tol", inv.step_tol);
    inv.tikhonov = f.number_or("invert.tikhonov", inv.tikhonov);
    if (!(inv.tikhonov >= 0.0))
        f.fail("invert.tikhonov", "weight must be >= 0");
    if (f.has("invert.initial")) {
        inv.initial = f.list("invert.initial");
        if (inv.initial->size() != inv.degree + 1)
            f.fail("invert.initial", "needs invert.degree + 1 coefficients");
        check_order("invert.initial", *inv.initial);
    }
    inv.modes_used = f.count_or("invert.modes_used", std::min(inv.modes_used, c.N));
    if (inv.modes_used < 1 || inv.modes_used > c.N)
        f.fail("invert.modes_used", "must lie in 1..basis.N");
    inv.allow_inverse_crime = f.flag_or("invert.allow_inverse_crime", inv.allow_inverse_crime);

    c.diagnose.gamma = f.number_or("diagnose.gamma", c.diagnose.gamma);
    if (!(c.diagnose.gamma >= 0.0))
        f.fail("diagnose.gamma", "gamma must be >= 0");
    if (f.has("diagnose.orders")) {
        c.diagnose.orders = f.list_of_lists("diagnose.orders");
        for (const auto& o : c.diagnose.orders)
            check_order("diagnose.orders", o);
    }
    if (f.has("diagnose.window")) {
        const auto w = f.list("diagnose.window");
        if (w.size() != 2 || !(w[0] > 0.0 && w[1] > w[0] && w[1] <= c.T))
            f.fail("diagnose.window", "expected 'lo, hi' with 0 < lo < hi <= T");
        c.diagnose.window = std::make_pair(w[0], w[1]);
    }

    if (f.has("scan.candidates")) {
        c.scan.candidates = f.list_of_lists("scan.candidates");
        for (const auto& o : c.scan.candidates)
            check_order("scan.candidates", o);
    }
    if (f.has("scan.constant_range")) {
        const auto r = f.list("scan.constant_range");
        if (r.size() != 3 || !(r[2] > 0.0 && r[1] >= r[0]))
            f.fail("scan.constant_range", "expected 'lo, hi, step' with lo <= hi, step > 0");
        check_order("scan.constant_range", {r[0]});
        check_order("scan.constant_range", {r[1]});
        c.scan.constant_range = r;
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path)
{
    return from(ConfigFile::load(path));
}

std::string RunConfig::emit() const
{
    std::ostringstream os;
    auto put = [&](const std::string& key, const std::string& value) {
        os << key << " = " << value << '\n';
    };
    put("model.K", format_double(K));
    put("model.L", format_double(L));
    put("model.T", format_double(T));
    put("model.k", join(k));
    if (alpha)
        put("model.alpha", join(*alpha));
    put("model.alpha_star", format_double(alpha_star));
    put("model.u0", u0);
    if (u0_file)
        put("model.u0_file", *u0_file);
    put("mesh.M", std::to_string(M));
    put("mesh.r", r ? format_double(*r) : "auto");
    put("basis.N", std::to_string(N));
    put("basis.grid", std::to_string(grid));
    put("forward.gamma", format_double(stability_gamma));
    put("output.x_count", std::to_string(output_x_count));
    put("output.t_stride", std::to_string(output_t_stride));
    put("output.dir", output_dir);
    put("run.seed", std::to_string(seed));
    if (observe) {
        put("observe.a", format_double(observe->a));
        put("observe.b", format_double(observe->b));
        put("observe.x_count", std::to_string(observe->x_count));
        put("observe.t_count", std::to_string(observe->t_count));
        put("observe.noise", format_double(observe->noise));
        put("observe.synthesis_factor", std::to_string(observe->synthesis_factor));
    }
    put("invert.degree", std::to_string(invert.degree));
    put("invert.max_iter", std::to_string(invert.max_iter));
    put("invert.tol", format_double(invert.tol));
    put("invert.step_tol", format_double(invert.step_tol));
    put("invert.tikhonov", format_double(invert.tikhonov));
    if (invert.initial)
        put("invert.initial", join(*invert.initial));
    put("invert.modes_used", std::to_string(invert.modes_used));
    put("invert.allow_inverse_crime", invert.allow_inverse_crime ? "true" : "false");
    put("diagnose.gamma", format_double(diagnose.gamma));
    auto lists = [](const std::vector<std::vector<double>>& v) {
        std::string out;
        for (std::size_t k = 0; k < v.size(); ++k)
            out += (k ? " | " : "") + join(v[k]);
        return out;
    };
    if (!diagnose.orders.empty())
        put("diagnose.orders", lists(diagnose.orders));
    if (diagnose.window)
        put("diagnose.window", join({diagnose.window->first, diagnose.window->second}));
    if (!scan.candidates.empty())
        put("scan.candidates", lists(scan.candidates));
    if (scan.constant_range)
        put("scan.constant_range", join(*scan.constant_range));
    return os.str();
}

InitialDatum RunConfig::initial_datum() const
{
    if (!u0_file)
        return InitialDatum::parse(u0);
    std::ifstream in(*u0_file);
    if (!in)
        throw ConfigError(*u0_file, 0, "cannot read initial-datum samples");
    std::vector<double> samples;
    std::string token;
    while (in >> token) {
        std::istringstream cells(token);
        std::string cell;
        while (std::getline(cells, cell, ','))
            if (!cell.empty()) {
                try {
                    samples.push_back(parse_double(cell));
                } catch (const std::invalid_argument&) {
                    throw ConfigError(*u0_file, 0, "bad sample '" + cell + "'");
                }
            }
    }
    return InitialDatum::samples(std::move(samples));
}

ModelData RunConfig::model_data() const
{
    return {K, L, T, Polynomial(k), initial_datum()};
}

ModelSpec RunConfig::model_spec() const
{
    if (!alpha)
        throw ConfigError("<config>", 0, "missing required key 'model.alpha'");
    return model_data().with_order(OrderFunction(*alpha, alpha_star, T));
}

double RunConfig::grading() const
{
    if (r)
        return *r;
    if (alpha)
        return default_grading(alpha->front());
    if (invert.initial)
        return default_grading(invert.initial->front());
    return default_grading(0.5);
}

TimeMesh RunConfig::mesh() const
{
    return TimeMesh(T, M, grading());
}

InversionConfig RunConfig::inversion_config() const
{
    InversionConfig ic;
    ic.degree = invert.degree;
    ic.max_iter = invert.max_iter;
    ic.gn_tolerance = invert.tol;
    ic.step_tolerance = invert.step_tol;
    ic.tikhonov = invert.tikhonov;
    ic.alpha_star = alpha_star;
    ic.modes = N;
    ic.modes_used = invert.modes_used;
    ic.meshes = {M, grading(), observe ? observe->synthesis_factor : 4};
    ic.initial = invert.initial;
    ic.allow_inverse_crime = invert.allow_inverse_crime;
    return ic;
}

ObservationDesign RunConfig::observation_design() const
{
    if (!observe)
        throw ConfigError("<config>", 0, "missing required key 'observe.a'");
    return {{observe->a, observe->b}, observe->x_count, observe->t_count ? observe->t_count : M,
            observe->noise, seed};
}

} // namespace vofrac
