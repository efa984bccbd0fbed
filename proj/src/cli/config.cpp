#include "dfbopo/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace dfbopo::cli
{
namespace
{
std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

const std::set<std::string, std::less<>> &known_keys()
{
    static const std::set<std::string, std::less<>> keys = [] {
        std::set<std::string, std::less<>> k;
        for (const char *g : {"grating", "grating1", "grating2"})
            for (const char *f : {"kappa", "kappa_L", "rho", "rho_L", "length"})
                k.insert(std::string(g) + "." + f);
        k.insert("grating.xi");
        k.insert("grating.xi_L");
        for (const char *f : {"mid.length", "theta", "theta_over_pi", "convention", "pumps.p1",
                              "pumps.p2", "pumps.gamma_nl", "pumps.product",
                              "pumps.threshold_fraction", "output.format", "output.path",
                              "oracle.steps", "profile.samples", "verify.draws", "verify.seed",
                              "verify.kappa_L_max", "verify.xi_L_max", "verify.rho_L_max",
                              "verify.below_threshold_max"})
            k.insert(f);
        return k;
    }();
    return keys;
}

std::vector<double> axis_values(const std::map<std::string, std::string> &block, int line)
{
    auto get = [&](const char *key) -> const std::string * {
        const auto it = block.find(key);
        return it == block.end() ? nullptr : &it->second;
    };
    const std::string where = "sweep block ending at line " + std::to_string(line);
    std::vector<double> values;
    if (const std::string *list = get("values"))
    {
        if (get("from") || get("to") || get("points"))
            throw ConfigError(where + ": give either values or from/to/points");
        std::stringstream ss(*list);
        std::string item;
        while (std::getline(ss, item, ','))
            values.push_back(parse_number(trim(item), where));
    }
    else
    {
        const std::string *from = get("from"), *to = get("to"), *points = get("points");
        if (!from || !to || !points)
            throw ConfigError(where + ": needs from, to and points");
        const double a = parse_number(*from, where + " from");
        const double b = parse_number(*to, where + " to");
        const double n = parse_number(*points, where + " points");
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e7)
            throw ConfigError(where + ": points must be a positive integer");
        const std::string scale = get("scale") ? *get("scale") : "linear";
        if (scale != "linear" && scale != "log")
            throw ConfigError(where + ": scale must be linear or log");
        if (scale == "log" && !(a > 0.0 && b > 0.0))
            throw ConfigError(where + ": log scale needs positive bounds");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < count; ++i)
        {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            values.push_back(scale == "log" ? a * std::pow(b / a, t) : a + (b - a) * t);
        }
    }
    if (values.empty())
        throw ConfigError(where + ": no values");
    return values;
}

} // namespace

double parse_number(std::string_view text, std::string_view what)
{
    text = trim(text);
    double value = 0.0;
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not a finite number");
    return value;
}

bool is_known_key(std::string_view key)
{
    return known_keys().count(key) != 0;
}

double RunConfig::number(const std::string &key) const
{
    const auto it = values.find(key);
    if (it == values.end())
        throw ConfigError("missing key " + key);
    return parse_number(it->second, key);
}

double RunConfig::number_or(const std::string &key, double fallback) const
{
    return has(key) ? number(key) : fallback;
}

std::size_t RunConfig::count_or(const std::string &key, std::size_t fallback) const
{
    if (!has(key))
        return fallback;
    const double v = number(key);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
        throw ConfigError(key + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

std::string RunConfig::text_or(const std::string &key, const std::string &fallback) const
{
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

RunConfig parse_config(std::string_view text)
{
    RunConfig config;
    std::map<std::string, std::string> block;
    bool in_sweep = false;
    int line_no = 0;

    auto close_sweep = [&] {
        if (!in_sweep)
            return;
        const auto name = block.find("name");
        if (name == block.end())
            throw ConfigError("sweep block ending at line " + std::to_string(line_no) +
                              " has no name");
        if (!is_known_key(name->second))
            throw ConfigError("sweep over unknown parameter " + name->second);
        for (const SweepAxis &axis : config.sweeps)
            if (axis.name == name->second)
                throw ConfigError("parameter " + name->second + " swept twice");
        for (const auto &[key, value] : block)
            if (key != "name" && key != "from" && key != "to" && key != "points" &&
                key != "values" && key != "scale")
                throw ConfigError("unknown sweep field " + key);
        config.sweeps.push_back({name->second, axis_values(block, line_no)});
        if (config.sweeps.size() > kMaxSweepAxes)
            throw ConfigError("at most two sweep blocks are supported");
        block.clear();
        in_sweep = false;
    };

    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line != "[sweep]")
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section " +
                                  std::string(line));
            close_sweep();
            in_sweep = true;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        auto &target = in_sweep ? block : config.values;
        if (!in_sweep && !is_known_key(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + key);
        if (target.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);
        target[key] = value;
    }
    close_sweep();
    return config;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig &config, std::string_view assignment)
{
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("--set expects key=value, got " + std::string(assignment));
    const std::string key(trim(assignment.substr(0, eq)));
    const std::string value(trim(assignment.substr(eq + 1)));
    if (!is_known_key(key))
        throw ConfigError("--set: unknown key " + key);
    if (value.empty())
        throw ConfigError("--set: empty value for " + key);
    config.values[key] = value;
}

GratingParams grating_from(const RunConfig &config, const std::string &prefix)
{
    GratingParams g;
    g.length = config.number(prefix + ".length");
    if (!(g.length > 0.0))
        throw ConfigError(prefix + ".length must be > 0");
    auto rate = [&](const std::string &name) {
        const std::string si = prefix + "." + name;
        const std::string dimless = si + "_L";
        if (config.has(si) && config.has(dimless))
            throw ConfigError("give only one of " + si + " and " + dimless);
        if (config.has(dimless))
            return config.number(dimless) / g.length;
        return config.number_or(si, 0.0);
    };
    g.kappa = rate("kappa");
    g.rho = rate("rho");
    if (prefix == "grating")
        g.xi = rate("xi");
    try
    {
        g.validate();
    }
    catch (const InvalidArgument &e)
    {
        throw ConfigError(prefix + ": " + e.what());
    }
    return g;
}

CavitySpec cavity_from(const RunConfig &config)
{
    CavitySpec s;
    s.grating1 = grating_from(config, "grating1");
    s.grating2 = grating_from(config, "grating2");
    s.mid_length = config.number_or("mid.length", 0.0);
    if (config.has("theta") && config.has("theta_over_pi"))
        throw ConfigError("give only one of theta and theta_over_pi");
    s.theta = config.has("theta_over_pi") ? config.number("theta_over_pi") * std::numbers::pi
                                          : config.number_or("theta", 0.0);
    const std::string conv = config.text_or("convention", "pump_locked");
    if (conv == "pump_locked")
        s.convention = MidSectionConvention::kPumpLocked;
    else if (conv == "printed")
        s.convention = MidSectionConvention::kPrinted;
    else
        throw ConfigError("convention must be pump_locked or printed");

    s.pumps.gamma_nl = config.number("pumps.gamma_nl");
    const bool product = config.has("pumps.product");
    const bool fraction = config.has("pumps.threshold_fraction");
    const bool powers = config.has("pumps.p1") || config.has("pumps.p2");
    if (int(product) + int(fraction) + int(powers) > 1)
        throw ConfigError("give pump powers as p1/p2, product or threshold_fraction, not several");
    if (product)
    {
        const double p = config.number("pumps.product");
        if (!(p >= 0.0))
            throw ConfigError("pumps.product must be >= 0");
        s.pumps.p1 = s.pumps.p2 = std::sqrt(p);
    }
    else if (powers)
    {
        s.pumps.p1 = config.number_or("pumps.p1", 0.0);
        s.pumps.p2 = config.number_or("pumps.p2", 0.0);
    }
    // threshold_fraction is resolved by the commands once the threshold is known.
    try
    {
        s.validate();
    }
    catch (const InvalidArgument &e)
    {
        throw ConfigError(e.what());
    }
    return s;
}

} // namespace dfbopo::cli
