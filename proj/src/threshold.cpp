#include "dfbopo/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "dfbopo/errors.hpp"

namespace dfbopo
{
namespace
{
// A genuine zero of the determinant bisects to roundoff; a sign change through
// a pole leaves a large residual.
constexpr double kZeroResidual = 1e-9;
} // namespace

double default_xi_max(const CavitySpec &spec)
{
    double shortest = std::min(spec.grating1.length, spec.grating2.length);
    if (spec.mid_length > 0.0)
        shortest = std::min(shortest, spec.mid_length);
    return 10.0 / shortest;
}

ThresholdResult find_threshold(const CavitySpec &spec, const ThresholdOptions &opts)
{
    spec.validate();
    if (spec.grating1.kappa == 0.0 || spec.grating2.kappa == 0.0)
        throw NoFeedback("both gratings need kappa > 0 for the cavity to oscillate");
    if (opts.scan_points == 0)
        throw InvalidArgument("threshold scan needs at least one point");

    const double xi_max = opts.xi_max > 0.0 ? opts.xi_max : default_xi_max(spec);
    auto det = [&spec](double xi) { return threshold_determinant(spec, xi); };

    double lo = 0.0;
    double f_lo = det(0.0);
    if (!(f_lo > 0.0))
        throw NoThresholdInRange("passive cavity determinant is not positive");

    double hi = -1.0;
    for (std::size_t i = 1; i <= opts.scan_points; ++i)
    {
        const double xi = xi_max * static_cast<double>(i) / static_cast<double>(opts.scan_points);
        double f = 0.0;
        try
        {
            f = det(xi);
        }
        catch (const IllConditioned &e)
        {
            throw NoThresholdInRange("no threshold for xi < " + std::to_string(xi) +
                                     "; scan stopped: " + e.what());
        }
        if (f <= 0.0)
        {
            hi = xi;
            break;
        }
        lo = xi;
        f_lo = f;
    }
    if (hi < 0.0)
        throw NoThresholdInRange("no threshold for xi in (0, " + std::to_string(xi_max) + "]");

    const double rel = opts.relative_tolerance;
    auto done = [rel](double a, double b) {
        return std::abs(b - a) <= 0.5 * rel * std::min(std::abs(a), std::abs(b));
    };
    auto pole = [](double xi) {
        return NoThresholdInRange("determinant changes sign through a pole near xi = " +
                                  std::to_string(xi) +
                                  " (a single grating reaches its own threshold)");
    };
    auto guarded = [&](double xi) {
        try
        {
            return det(xi);
        }
        catch (const IllConditioned &)
        {
            throw pole(xi);
        }
    };
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::bisect(guarded, lo, hi, done, iterations);

    ThresholdResult r;
    r.bracket = bracket;
    r.iterations = static_cast<std::size_t>(iterations);
    r.xi_th = 0.5 * (bracket.first + bracket.second);
    r.residual = guarded(r.xi_th);
    if (!(std::abs(r.residual) < kZeroResidual))
        throw pole(r.xi_th);
    const double g = spec.pumps.gamma_nl;
    r.pump_product = g > 0.0 ? std::pow(r.xi_th / (2.0 * g), 2)
                             : std::numeric_limits<double>::infinity();
    return r;
}

bool below_threshold(const CavitySpec &spec, double xi, std::size_t scan_points)
{
    if (scan_points == 0)
        throw InvalidArgument("threshold scan needs at least one point");
    try
    {
        for (std::size_t i = 0; i <= scan_points; ++i)
        {
            const double x = xi * static_cast<double>(i) / static_cast<double>(scan_points);
            if (!(threshold_determinant(spec, x) > 0.0))
                return false;
        }
    }
    catch (const IllConditioned &)
    {
        return false;
    }
    return true;
}

ThresholdMap threshold_map(const CavitySpec &base, std::span<const double> l2_grid,
                           std::span<const double> l3_grid, const ThresholdOptions &opts)
{
    ThresholdMap map;
    map.l2_grid.assign(l2_grid.begin(), l2_grid.end());
    map.l3_grid.assign(l3_grid.begin(), l3_grid.end());
    map.cells.reserve(l2_grid.size() * l3_grid.size());
    for (double l2 : l2_grid)
    {
        for (double l3 : l3_grid)
        {
            ThresholdCell cell;
            cell.l2 = l2;
            cell.l3 = l3;
            try
            {
                CavitySpec spec = base;
                spec.grating2.length = l2;
                spec.mid_length = l3;
                cell.result = find_threshold(spec, opts);
            }
            catch (const Error &e)
            {
                cell.error = e.what();
            }
            map.cells.push_back(std::move(cell));
        }
    }
    return map;
}

} // namespace dfbopo
