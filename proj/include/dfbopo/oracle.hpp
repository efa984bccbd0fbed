#ifndef DFBOPO_ORACLE_HPP
#define DFBOPO_ORACLE_HPP

#include <cstddef>

#include "dfbopo/gain_grating.hpp"
#include "dfbopo/linalg.hpp"

namespace dfbopo
{
// Independent numerical route to a single grating: fixed-step classical RK4 of
// the lab-frame operator coupled-mode equations
//   a' = -xi a^+ - i kappa e^{i rho z} b,   b' = i kappa e^{-i rho z} a
// for the 4x4 state (a, a^+, b, b^+).

inline constexpr std::size_t kDefaultOracleSteps = 100000;
inline constexpr std::size_t kMinOracleSteps = 1000;

// Maps (a, a^+, b, b^+) at z = 0 to z = L. Preserves diag(1, -1, -1, 1).
Mat4 integrate_transfer(const GratingParams &g, std::size_t steps = kDefaultOracleSteps);

// Flux metric preserved by two-point transfer maps.
Mat4 transfer_metric();

// Rearranges a transfer map into input-output form: forward quadruple at L and
// backward quadruple at 0, inputs a(0) and b(L).
struct OracleScattering
{
    ScatteringQuad at_end;    // u, v, p, q valid
    ScatteringQuad at_start;  // u_bar, v_bar, p_bar, q_bar valid
};

OracleScattering transfer_to_scattering(const Mat4 &transfer, double length,
                                        double condition_bound = kDefaultConditionBound);

// Max entrywise deviation between the analytic solution and the oracle over
// the eight scattering coefficients.
double scattering_deviation(const GratingParams &g, std::size_t steps = kDefaultOracleSteps);

struct ConvergenceEstimate
{
    double order = 0.0;
    double error_coarse = 0.0;  // |T(N) - T(2N)|
    double error_fine = 0.0;    // |T(2N) - T(4N)|
};

// Richardson-style order from step counts N, 2N, 4N.
ConvergenceEstimate convergence_order(const GratingParams &g, std::size_t base_steps = kMinOracleSteps);

} // namespace dfbopo

#endif
