#include "dfbopo/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dfbopo/errors.hpp"
#include "dfbopo/oracle.hpp"
#include "dfbopo/quantum_stats.hpp"
#include "dfbopo/threshold.hpp"

namespace dfbopo::cli
{
namespace
{
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v)
{
    return fmt::format("{:.17g}", v);
}

// Every grid point of the sweep axes, first axis outermost, as a config with
// the swept keys substituted.
std::vector<RunConfig> grid_points(const RunConfig &config)
{
    std::vector<RunConfig> points{config};
    for (const SweepAxis &axis : config.sweeps)
    {
        std::vector<RunConfig> next;
        next.reserve(points.size() * axis.values.size());
        for (const RunConfig &p : points)
            for (double v : axis.values)
            {
                RunConfig c = p;
                c.values[axis.name] = format_number(v);
                next.push_back(std::move(c));
            }
        points = std::move(next);
    }
    return points;
}

// Sweep axes not represented by the subcommand's fixed columns become leading
// columns, so curves of an outer sweep stay distinguishable.
std::vector<std::string> extra_axes(const RunConfig &config, const std::set<std::string> &covered)
{
    std::vector<std::string> names;
    for (const SweepAxis &axis : config.sweeps)
        if (!covered.count(axis.name))
            names.push_back(axis.name);
    return names;
}

std::vector<Cell> leading_cells(const RunConfig &point, const std::vector<std::string> &names)
{
    std::vector<Cell> cells;
    for (const std::string &n : names)
        cells.emplace_back(point.number(n));
    return cells;
}

// Geometry identity for threshold caching: every key except the pump powers.
std::string geometry_key(const RunConfig &c)
{
    std::string key;
    for (const auto &[k, v] : c.values)
        if (k.rfind("pumps.", 0) != 0 || k == "pumps.gamma_nl")
            key += k + "=" + v + ";";
    return key;
}

void set_pump_product(CavitySpec &spec, double product)
{
    spec.pumps.p1 = spec.pumps.p2 = std::sqrt(product);
}

// Resolves pumps.threshold_fraction against the cavity's threshold.
CavitySpec cavity_with_pumps(const RunConfig &c, std::optional<ThresholdResult> &threshold)
{
    CavitySpec spec = cavity_from(c);
    if (c.has("pumps.threshold_fraction"))
    {
        const double f = c.number("pumps.threshold_fraction");
        if (!(f >= 0.0))
            throw ConfigError("pumps.threshold_fraction must be >= 0");
        if (!threshold)
            threshold = find_threshold(spec);
        set_pump_product(spec, f * threshold->pump_product);
    }
    return spec;
}

double pump_product(const CavitySpec &s)
{
    return s.pumps.p1 * s.pumps.p2;
}

void write_output(const std::string &text, const RunConfig &config, std::ostream &out)
{
    const std::string path = config.text_or("output.path", "-");
    if (path == "-")
    {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush())
        throw ConfigError("cannot write output file " + path);
}

} // namespace

std::string to_csv(const Table &table)
{
    std::string s;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        s += (i ? "," : "") + table.columns[i];
    s += '\n';
    for (const auto &row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                s += ',';
            if (const double *d = std::get_if<double>(&row[i]))
                s += format_number(*d);
            else
                s += std::get<std::string>(row[i]);
        }
        s += '\n';
    }
    return s;
}

std::string to_json(const Table &table)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : table.rows)
    {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (const double *d = std::get_if<double>(&row[i]))
                obj[table.columns[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d)
                                                          : nlohmann::ordered_json(nullptr);
            else
                obj[table.columns[i]] = std::get<std::string>(row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

Table run_spectrum(const RunConfig &config)
{
    const std::vector<std::string> extra = extra_axes(config, {"grating.rho", "grating.rho_L"});
    Table t;
    t.columns = extra;
    for (const char *c : {"rho", "transmission", "reflection", "photon_gain"})
        t.columns.emplace_back(c);
    for (const RunConfig &point : grid_points(config))
    {
        const GratingParams g = grating_from(point, "grating");
        const double rho[] = {g.rho};
        const SpectrumPoint p = reflection_spectrum(g, rho).front();
        if (!p.ok)
            throw Error(fmt::format("spectrum failed at rho = {:.17g} 1/m: {}", g.rho, p.error));
        std::vector<Cell> row = leading_cells(point, extra);
        for (double v : {p.rho, p.transmission, p.reflection, p.photon_gain})
            row.emplace_back(v);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_squeeze(const RunConfig &config)
{
    const std::vector<std::string> extra =
        extra_axes(config, {"pumps.product", "pumps.threshold_fraction", "pumps.p1", "pumps.p2"});
    Table t;
    t.columns = extra;
    for (const char *c : {"pump_product", "squeezing_db_b", "antisqueezing_db_b",
                          "squeezing_db_g", "n_b", "n_g", "status"})
        t.columns.emplace_back(c);

    std::map<std::string, ThresholdResult> thresholds;
    for (const RunConfig &point : grid_points(config))
    {
        std::optional<ThresholdResult> threshold;
        const std::string key = geometry_key(point);
        if (const auto it = thresholds.find(key); it != thresholds.end())
            threshold = it->second;
        const CavitySpec spec = cavity_with_pumps(point, threshold);
        if (!threshold)
            threshold = find_threshold(spec);
        thresholds.emplace(key, *threshold);

        std::vector<Cell> row = leading_cells(point, extra);
        row.emplace_back(pump_product(spec));
        bool above = spec.xi() >= threshold->xi_th;
        if (!above)
        {
            try
            {
                const CavityIO io = io_matrices(spec);
                const QuadratureStats b = output_variances(io, Port::kB);
                const QuadratureStats g = output_variances(io, Port::kG);
                for (double v : {b.squeezing_db, b.antisqueezing_db, g.squeezing_db,
                                 b.mean_photons, g.mean_photons})
                    row.emplace_back(v);
                row.emplace_back(std::string("ok"));
            }
            catch (const SingularResolvent &)
            {
                above = true;
            }
        }
        if (above)
        {
            row.resize(extra.size() + 1);
            for (int i = 0; i < 5; ++i)
                row.emplace_back(kNaN);
            row.emplace_back(std::string("above_threshold"));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_threshold(const RunConfig &config)
{
    const std::vector<std::string> extra = extra_axes(config, {"grating2.length", "mid.length"});
    Table t;
    t.columns = extra;
    for (const char *c : {"L2", "L3", "pump_product_threshold", "status"})
        t.columns.emplace_back(c);
    for (const RunConfig &point : grid_points(config))
    {
        const CavitySpec spec = cavity_from(point);
        std::vector<Cell> row = leading_cells(point, extra);
        row.emplace_back(spec.grating2.length);
        row.emplace_back(spec.mid_length);
        try
        {
            row.emplace_back(find_threshold(spec).pump_product);
            row.emplace_back(std::string("ok"));
        }
        catch (const NoThresholdInRange &)
        {
            row.emplace_back(kNaN);
            row.emplace_back(std::string("no_threshold"));
        }
        catch (const NoFeedback &)
        {
            row.emplace_back(kNaN);
            row.emplace_back(std::string("no_feedback"));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_profile(const RunConfig &config)
{
    if (!config.sweeps.empty())
        throw ConfigError("profile does not take sweep blocks");
    std::optional<ThresholdResult> threshold;
    const CavitySpec spec = cavity_with_pumps(config, threshold);
    const FieldProfile p =
        field_profile(spec, config.count_or("profile.samples", kDefaultProfileSamples));
    Table t;
    t.columns = {"z", "n_forward", "n_backward"};
    for (std::size_t i = 0; i < p.z.size(); ++i)
        t.rows.push_back({p.z[i], p.n_forward[i], p.n_backward[i]});
    return t;
}

std::string VerifyReport::to_json() const
{
    nlohmann::ordered_json j;
    j["draws"] = draws;
    j["oracle_steps"] = oracle_steps;
    j["seed"] = seed;
    j["max_oracle_deviation"] = max_oracle_deviation;
    j["max_forward_norm_residual"] = max_forward_norm_residual;
    j["max_backward_norm_residual"] = max_backward_norm_residual;
    j["max_io_symplectic_residual"] = max_io_symplectic_residual;
    j["io_checked"] = io_checked;
    j["io_skipped_above_threshold"] = io_skipped;
    j["convergence_order"] = convergence_order ? nlohmann::ordered_json(*convergence_order)
                                               : nlohmann::ordered_json(nullptr);
    j["convergence_error_coarse"] = convergence_error_coarse;
    j["convergence_error_fine"] = convergence_error_fine;
    j["tolerances"] = {{"oracle_deviation", kVerifyOracleTolerance},
                       {"norm_residual", kVerifyNormTolerance},
                       {"io_symplectic_residual", kVerifySymplecticTolerance},
                       {"convergence_order", {kVerifyOrderLow, kVerifyOrderHigh}}};
    j["checks"] = {{"oracle_deviation", oracle_ok},
                   {"norm_residual", norms_ok},
                   {"io_symplectic_residual", symplectic_ok},
                   {"convergence_order", order_ok}};
    j["passed"] = passed();
    return j.dump(2) + "\n";
}

VerifyReport run_verify(const RunConfig &config)
{
    if (!config.sweeps.empty())
        throw ConfigError("verify does not take sweep blocks");
    VerifyReport r;
    r.draws = config.count_or("verify.draws", 200);
    r.oracle_steps = config.count_or("oracle.steps", kDefaultOracleSteps);
    r.seed = static_cast<std::uint64_t>(config.number_or("verify.seed", 1.0));
    const double kl_max = config.number_or("verify.kappa_L_max", 5.0);
    const double xl_max = config.number_or("verify.xi_L_max", 2.0);
    const double rl_max = config.number_or("verify.rho_L_max", 10.0);
    if (!(kl_max >= 0.0 && xl_max >= 0.0 && rl_max >= 0.0))
        throw ConfigError("verify box bounds must be >= 0");
    if (r.oracle_steps < kMinOracleSteps)
        throw ConfigError(fmt::format("oracle.steps must be >= {}", kMinOracleSteps));

    const double length = 0.05;
    std::mt19937_64 rng(r.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        GratingParams g;
        g.length = length;
        g.kappa = kl_max * unit(rng) / length;
        g.xi = xl_max * unit(rng) / length;
        g.rho = rl_max * (2.0 * unit(rng) - 1.0) / length;
        return g;
    };

    for (std::size_t n = 0; n < r.draws; ++n)
    {
        const GratingParams g = draw();
        const ScatteringQuad end = scattering_general(g, length);
        const ScatteringQuad start = scattering_general(g, 0.0);
        r.max_forward_norm_residual =
            std::max(r.max_forward_norm_residual, std::abs(end.forward_norm() - 1.0));
        r.max_backward_norm_residual =
            std::max(r.max_backward_norm_residual, std::abs(start.backward_norm() - 1.0));
        r.max_oracle_deviation =
            std::max(r.max_oracle_deviation, scattering_deviation(g, r.oracle_steps));

        CavitySpec spec;
        spec.grating1 = g;
        spec.grating2 = draw();
        spec.mid_length = 4.0 * length * unit(rng);
        spec.theta = 2.0 * std::numbers::pi * unit(rng);
        spec.pumps = {0.0, 1.0, 1.0};
        set_pump_product(spec, std::pow(g.xi / 2.0, 2));
        if (!below_threshold(spec, spec.xi()))
        {
            ++r.io_skipped;
            continue;
        }
        r.max_io_symplectic_residual = std::max(
            r.max_io_symplectic_residual, metric_residual(io_matrices(spec).map(), commutator_metric()));
        ++r.io_checked;
    }

    // Box corner: the largest truncation error, well clear of roundoff.
    const GratingParams rep{kl_max / length, xl_max / length, rl_max / length, length};
    const ConvergenceEstimate est = convergence_order(rep);
    r.convergence_error_coarse = est.error_coarse;
    r.convergence_error_fine = est.error_fine;
    // Errors at roundoff level carry no order information.
    const bool exact = est.error_coarse < 1e-13;
    if (!exact)
        r.convergence_order = est.order;

    r.oracle_ok = r.max_oracle_deviation < kVerifyOracleTolerance;
    r.norms_ok = r.max_forward_norm_residual < kVerifyNormTolerance &&
                 r.max_backward_norm_residual < kVerifyNormTolerance;
    r.symplectic_ok = r.max_io_symplectic_residual < kVerifySymplecticTolerance;
    r.order_ok = exact || (est.order >= kVerifyOrderLow && est.order <= kVerifyOrderHigh);
    return r;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Squeezing and threshold calculations for gain-grating cavities", "dfbopo"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_path;
    std::string format;

    struct Command
    {
        const char *name;
        const char *help;
    };
    const Command commands[] = {
        {"spectrum", "transmission/reflection spectrum of one grating over detuning"},
        {"squeeze", "output squeezing of a two-grating cavity over pump power"},
        {"threshold", "oscillation threshold over cavity geometries"},
        {"profile", "intracavity photon-number profile"},
        {"verify", "analytic solver against the RK4 oracle on a random parameter box"},
    };
    for (const Command &c : commands)
    {
        CLI::App *sub = app.add_subcommand(c.name, c.help);
        auto *opt = sub->add_option("-c,--config", config_path, "config file");
        if (std::string(c.name) != "verify")
            opt->required();
        sub->add_option("--set", overrides, "override a config key (key=value)");
        sub->add_option("-o,--output", output_path, "output file (default stdout)");
        if (std::string(c.name) != "verify")
            sub->add_option("-f,--format", format, "csv or json")
                ->check(CLI::IsMember({"csv", "json"}));
    }

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try
    {
        app.parse(argv_rev);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    try
    {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (const std::string &o : overrides)
            apply_override(config, o);
        if (!output_path.empty())
            config.values["output.path"] = output_path;
        if (!format.empty())
            config.values["output.format"] = format;
        const std::string fmt_name = config.text_or("output.format", "csv");
        if (fmt_name != "csv" && fmt_name != "json")
            throw ConfigError("output.format must be csv or json");

        if (name == "verify")
        {
            const VerifyReport report = run_verify(config);
            write_output(report.to_json(), config, out);
            if (!report.passed())
            {
                err << "verification failed\n";
                return kExitVerification;
            }
            return kExitOk;
        }

        Table table;
        if (name == "spectrum")
            table = run_spectrum(config);
        else if (name == "squeeze")
            table = run_squeeze(config);
        else if (name == "threshold")
            table = run_threshold(config);
        else
            table = run_profile(config);
        write_output(fmt_name == "csv" ? to_csv(table) : to_json(table), config, out);
        return kExitOk;
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const InvalidArgument &e)
    {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace dfbopo::cli
