// Acceptance suite: one PASS/FAIL line per primary criterion, measured values
// alongside the pinned tolerances. Exit status is nonzero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "dfbopo/cavity.hpp"
#include "dfbopo/errors.hpp"
#include "dfbopo/gain_grating.hpp"
#include "dfbopo/oracle.hpp"
#include "dfbopo/quantum_stats.hpp"
#include "dfbopo/threshold.hpp"
#include "support/classical_cmt.hpp"
#include "support/geometry.hpp"

using namespace dfbopo;

namespace
{
int failures = 0;

void report(bool ok, const std::string &name, const std::string &detail)
{
    if (!ok)
        ++failures;
    fmt::print("{}  {:<24} {}\n", ok ? "PASS" : "FAIL", name, detail);
}

void info(const std::string &name, const std::string &detail)
{
    fmt::print("INFO  {:<24} {}\n", name, detail);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CavitySpec pumped(CavitySpec s, double product)
{
    s.pumps.p1 = std::sqrt(product);
    s.pumps.p2 = std::sqrt(product);
    return s;
}

CavitySpec with_convention(CavitySpec s, MidSectionConvention c)
{
    s.convention = c;
    return s;
}

double b_squeezing(const CavitySpec &s, double fraction)
{
    const double pth = find_threshold(s).pump_product;
    return output_variances(pumped(s, fraction * pth), Port::kB).squeezing_db;
}

// Box of the symplectic and oracle criteria.
constexpr double kBoxLength = 0.05;
constexpr int kBoxDraws = 1000;

struct BoxDraw
{
    GratingParams g1, g2;
    double mid_length, theta;
};

std::vector<BoxDraw> box_draws()
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> kl(0.0, 5.0), xl(0.0, 2.0), rl(-10.0, 10.0),
        th(0.0, 2.0 * std::numbers::pi), mid(0.0, 4.0);
    std::vector<BoxDraw> draws;
    for (int n = 0; n < kBoxDraws; ++n)
    {
        BoxDraw d;
        const double xi = xl(rng) / kBoxLength;
        d.g1 = {kl(rng) / kBoxLength, xi, rl(rng) / kBoxLength, kBoxLength};
        d.g2 = {kl(rng) / kBoxLength, xi, rl(rng) / kBoxLength, kBoxLength};
        d.mid_length = mid(rng) * kBoxLength;
        d.theta = th(rng);
        draws.push_back(d);
    }
    return draws;
}

CavitySpec cavity_of(const BoxDraw &d, MidSectionConvention conv)
{
    CavitySpec s;
    s.grating1 = d.g1;
    s.grating2 = d.g2;
    s.mid_length = d.mid_length;
    s.theta = d.theta;
    s.pumps = {d.g1.xi / 2.0, 1.0, 1.0};
    s.convention = conv;
    return s;
}

void threshold_reproduction()
{
    bool ok = true;
    std::string detail;
    double worst_time = 0.0;
    for (const auto &[ratio, target] : {std::pair{2.0, 0.21}, std::pair{1.0, 0.84}})
    {
        const auto start = std::chrono::steady_clock::now();
        const double p = find_threshold(geometry::symmetric_cavity(ratio)).pump_product;
        const double t = seconds_since(start);
        worst_time = std::max(worst_time, t);
        ok = ok && std::abs(p - target) <= 0.10 * target && t < 5.0;
        detail += fmt::format("L2={}L1: {:.4f} W^2 (target {} +-10%); ", ratio, p, target);
    }
    report(ok, "threshold_reproduction", detail + fmt::format("max time {:.3f} s (< 5 s)", worst_time));

    const double p2 = find_threshold(with_convention(geometry::symmetric_cavity(2.0),
                                                     MidSectionConvention::kPrinted)).pump_product;
    const double p1 = find_threshold(with_convention(geometry::symmetric_cavity(1.0),
                                                     MidSectionConvention::kPrinted)).pump_product;
    info("threshold_printed_conv", fmt::format("L2=2L1: {:.4f} W^2; L2=L1: {:.4f} W^2", p2, p1));
}

void three_db_ceiling()
{
    const auto start = std::chrono::steady_clock::now();
    const CavitySpec s = geometry::symmetric_cavity(1.0);
    const double pth = find_threshold(s).pump_product;
    double best = -INFINITY, at = 0.0;
    constexpr int points = 1000;
    for (int i = 1; i <= points; ++i)
    {
        const double fraction = 0.999 * i / points;
        const double db = output_variances(pumped(s, fraction * pth), Port::kB).squeezing_db;
        if (db > best)
        {
            best = db;
            at = fraction;
        }
    }
    const double t = seconds_since(start);
    report(best >= 2.7 && best <= 3.2 && t < 10.0, "three_db_ceiling",
           fmt::format("max b-port squeezing {:.4f} dB at {:.3f} P_th (target [2.7, 3.2]); "
                       "{} points, {:.3f} s (< 10 s)",
                       best, at, points, t));
}

void squeezing_growth()
{
    std::vector<double> db;
    for (double ratio : {1.0, 1.5, 2.0})
        db.push_back(b_squeezing(geometry::symmetric_cavity(ratio), 0.95));
    report(db[0] < db[1] && db[1] < db[2], "squeezing_growth",
           fmt::format("b-port squeezing at 0.95 P_th for L2/L1 = 1, 1.5, 2: {:.4f}, {:.4f}, "
                       "{:.4f} dB (strictly increasing)",
                       db[0], db[1], db[2]));
}

void threshold_map_monotonicity()
{
    std::vector<double> l2, l3;
    for (int i = 0; i < 10; ++i)
    {
        l2.push_back(0.025 * (i + 1));
        l3.push_back(0.025 * (i + 1));
    }
    const ThresholdMap map = threshold_map(geometry::symmetric_cavity(), l2, l3);
    int missing = 0, violations = 0;
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < l2.size(); ++i)
        for (std::size_t j = 0; j < l3.size(); ++j)
        {
            const ThresholdCell &c = map.cell(i, j);
            if (!c.result)
            {
                ++missing;
                continue;
            }
            const double p = c.result->pump_product;
            lo = std::min(lo, p);
            hi = std::max(hi, p);
            if (j > 0 && map.cell(i, j - 1).result && p > map.cell(i, j - 1).result->pump_product)
                ++violations;
            if (i > 0 && map.cell(i - 1, j).result && p > map.cell(i - 1, j).result->pump_product)
                ++violations;
        }
    report(missing == 0 && violations == 0, "threshold_map_monotone",
           fmt::format("10x10 grid L2, L3 in [0.025, 0.25] m: {} violations, {} cells without "
                       "threshold, P_th from {:.4g} to {:.4g} W^2",
                       violations, missing, lo, hi));
}

void phase_shift_profile()
{
    CavitySpec s = geometry::phase_shift_grating();
    s = pumped(s, 0.9 * find_threshold(s).pump_product);
    const FieldProfile p = field_profile(s, kDefaultProfileSamples);
    std::size_t first = p.z.size(), last = 0;
    for (std::size_t i = 0; i < p.z.size(); ++i)
        if (p.section[i] == Section::kGrating2)
        {
            first = std::min(first, i);
            last = i;
        }
    // Strict interior local minima of grating 2.
    std::vector<std::size_t> minima;
    for (std::size_t i = first + 1; i < last; ++i)
        if (p.n_forward[i] < p.n_forward[i - 1] && p.n_forward[i] < p.n_forward[i + 1])
            minima.push_back(i);
    bool ok = !minima.empty();
    std::string detail = "no interior minimum in grating 2";
    if (ok)
    {
        const std::size_t m = minima.front();
        ok = p.n_forward.back() > p.n_forward[m];
        detail = fmt::format("n_forward minimum {:.4f} at z = {:.5f} m inside grating 2 "
                             "[{:.3f}, {:.3f}] m; output facet {:.4f} (> minimum); defect {:.4f}",
                             p.n_forward[m], p.z[m], p.z[first], p.z[last], p.n_forward.back(),
                             p.n_forward[first]);
    }
    report(ok, "phase_shift_profile", detail);
}

void classical_limits()
{
    // (a) no gain: no conjugate coupling anywhere in the box.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> kl(0.0, 5.0), rl(-10.0, 10.0), zf(0.0, 1.0);
    double conj = 0.0;
    for (int n = 0; n < 500; ++n)
    {
        const GratingParams g{kl(rng) / kBoxLength, 0.0, rl(rng) / kBoxLength, kBoxLength};
        const ScatteringQuad s = scattering_general(g, zf(rng) * kBoxLength);
        conj = std::max({conj, std::abs(s.v), std::abs(s.q), std::abs(s.v_bar), std::abs(s.q_bar)});
    }
    // (b) strong grating envelope.
    const double kappa = 20.0 / kBoxLength;
    const GratingParams strong{kappa, 0.0, 0.0, kBoxLength};
    double envelope = 0.0;
    for (int i = 0; i <= 200; ++i)
    {
        const double z = 10.0 / kappa * i / 200.0;
        const double expected = std::exp(-kappa * z);
        envelope = std::max(envelope, std::abs(std::abs(scattering_general(strong, z).u) - expected) / expected);
    }
    // (c) passive transmission against the classical RK4 oracle and sech^2.
    double trans = 0.0, closed = 0.0;
    for (double k : {0.5, 1.0, 2.0, 3.0, 5.0})
    {
        const GratingParams g{k / kBoxLength, 0.0, 0.0, kBoxLength};
        const double t = std::norm(scattering_general(g, kBoxLength).u);
        trans = std::max(trans, std::abs(t - std::norm(classical::integrate(g.kappa, 0.0, kBoxLength).t)));
        closed = std::max(closed, std::abs(t - std::pow(std::cosh(k), -2)));
    }
    report(conj < 1e-12 && envelope < 1e-6 && trans < 1e-8 && closed < 1e-8, "classical_limits",
           fmt::format("(a) max |v|,|q| at xi=0: {:.2e} (< 1e-12); (b) kappa L=20 envelope rel. "
                       "error {:.2e} (< 1e-6); (c) |T - T_rk4| {:.2e}, |T - sech^2| {:.2e} (< 1e-8)",
                       conj, envelope, trans, closed));
}

void symplectic_suite(const std::vector<BoxDraw> &draws)
{
    double norm = 0.0, grating_map = 0.0, io = 0.0;
    int checked = 0, skipped = 0;
    for (const BoxDraw &d : draws)
    {
        const ScatteringQuad end = scattering_general(d.g1, kBoxLength);
        const ScatteringQuad start = scattering_general(d.g1, 0.0);
        norm = std::max({norm, std::abs(end.forward_norm() - 1.0), std::abs(start.backward_norm() - 1.0)});
        grating_map = std::max(grating_map, metric_residual(scattering_matrix(end, start), commutator_metric()));
        for (auto conv : {MidSectionConvention::kPumpLocked, MidSectionConvention::kPrinted})
        {
            const CavitySpec s = cavity_of(d, conv);
            if (!below_threshold(s, s.xi()))
            {
                ++skipped;
                continue;
            }
            io = std::max(io, metric_residual(io_matrices(s).map(), commutator_metric()));
            ++checked;
        }
    }
    report(norm < 1e-9 && grating_map < 1e-8 && io < 1e-8 && checked >= 1000, "symplectic_suite",
           fmt::format("{} draws: max |norm - 1| {:.2e} (< 1e-9); grating 4x4 residual {:.2e}, "
                       "cavity I/O residual {:.2e} over {} below-threshold cavities, {} skipped "
                       "(< 1e-8)",
                       draws.size(), norm, grating_map, io, checked, skipped));
}

void oracle_equivalence(const std::vector<BoxDraw> &draws)
{
    const auto start = std::chrono::steady_clock::now();
    double deviation = 0.0;
    for (const BoxDraw &d : draws)
        deviation = std::max(deviation, scattering_deviation(d.g1, kDefaultOracleSteps));
    const ConvergenceEstimate est =
        convergence_order({5.0 / kBoxLength, 2.0 / kBoxLength, 10.0 / kBoxLength, kBoxLength});
    const double t = seconds_since(start);
    report(deviation < 1e-6 && est.order >= 3.5 && est.order <= 4.5 && t < 60.0,
           "oracle_equivalence",
           fmt::format("{} draws, {} RK4 steps: max deviation {:.2e} (< 1e-6); convergence order "
                       "{:.3f} (in [3.5, 4.5]); {:.1f} s (< 60 s)",
                       draws.size(), kDefaultOracleSteps, deviation, est.order, t));
}

void uncertainty_and_vacuum(const std::vector<BoxDraw> &draws)
{
    double worst_product = INFINITY;
    int checked = 0;
    double vacuum = 0.0;
    for (const BoxDraw &d : draws)
        for (auto conv : {MidSectionConvention::kPumpLocked, MidSectionConvention::kPrinted})
        {
            CavitySpec s = cavity_of(d, conv);
            if (below_threshold(s, s.xi()))
            {
                const CavityIO io = io_matrices(s);
                for (Port port : {Port::kB, Port::kG})
                {
                    const QuadratureStats st = output_variances(io, port);
                    worst_product = std::min(worst_product, st.var_x * st.var_p);
                }
                ++checked;
            }
            s.pumps.p1 = 0.0;
            for (Port port : {Port::kB, Port::kG})
            {
                const QuadratureStats st = output_variances(s, port);
                vacuum = std::max({vacuum, std::abs(st.squeezing_db), std::abs(st.antisqueezing_db),
                                   std::abs(st.mean_photons)});
            }
        }
    report(worst_product >= 0.25 - 1e-10 && vacuum < 1e-12, "uncertainty_vacuum",
           fmt::format("min var_x var_p {:.12f} over {} below-threshold cavities (>= 1/4 - 1e-10); "
                       "xi=0 max |dB|, |n| {:.2e} (< 1e-12)",
                       worst_product, checked, vacuum));
}

} // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    const std::vector<BoxDraw> draws = box_draws();
    auto guarded = [](const char *name, auto &&fn) {
        try
        {
            fn();
        }
        catch (const std::exception &e)
        {
            report(false, name, std::string("exception: ") + e.what());
        }
    };
    guarded("threshold_reproduction", threshold_reproduction);
    guarded("three_db_ceiling", three_db_ceiling);
    guarded("squeezing_growth", squeezing_growth);
    guarded("threshold_map_monotone", threshold_map_monotonicity);
    guarded("phase_shift_profile", phase_shift_profile);
    guarded("classical_limits", classical_limits);
    guarded("symplectic_suite", [&] { symplectic_suite(draws); });
    guarded("oracle_equivalence", [&] { oracle_equivalence(draws); });
    guarded("uncertainty_vacuum", [&] { uncertainty_and_vacuum(draws); });
    fmt::print("{} failed, total {:.1f} s\n", failures, seconds_since(start));
    return failures == 0 ? 0 : 1;
}
