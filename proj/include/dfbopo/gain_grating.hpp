#ifndef DFBOPO_GAIN_GRATING_HPP
#define DFBOPO_GAIN_GRATING_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dfbopo/linalg.hpp"

namespace dfbopo
{
// One uniform Bragg grating section with co-propagating parametric gain.
// SI units throughout: rates in 1/m, length in m.
struct GratingParams
{
    double kappa = 0.0;  // grating coupling
    double xi = 0.0;     // parametric gain rate, real and >= 0
    double rho = 0.0;    // detuning beta - K
    double length = 0.0;

    void validate() const;
};

struct PumpConfig
{
    double p1 = 0.0;        // W
    double p2 = 0.0;        // W
    double gamma_nl = 0.0;  // 1/(W m)

    void validate() const;
};

// xi = 2 sqrt(P1 P2) gamma_NL
double xi_from_pumps(const PumpConfig &pumps);

// Roots of the characteristic quartic lambda^4 - sigma lambda^2 + tau = 0 of
// the coupled-mode generator. gammas[i] is the ratio v*/u of the exponential
// mode with root {+l+, -l+, +l-, -l-}[i]; it is infinite for a pure v* mode
// (possible only at xi = 0).
struct EigenStructure
{
    cplx lambda_plus;
    cplx lambda_minus;
    cplx lambda_plus_sq;
    cplx lambda_minus_sq;
    std::array<cplx, 4> roots;
    std::array<cplx, 4> gammas;
    bool degenerate = false;
};

inline constexpr double kDefaultDegeneracyTolerance = 1e-9;

EigenStructure eigen_structure(const GratingParams &g,
                               double degeneracy_tol = kDefaultDegeneracyTolerance);

// Value of the characteristic quartic at lambda.
cplx characteristic_polynomial(const GratingParams &g, cplx lambda);

// Input-output coefficients at position z. Inputs are a(0) and b(L):
//   a(z) = u a0 + v a0^+ + p bL + q bL^+
//   b(z) = u_bar a0 + v_bar a0^+ + p_bar bL + q_bar bL^+
struct ScatteringQuad
{
    cplx u, v, p, q;
    cplx u_bar, v_bar, p_bar, q_bar;
    double z = 0.0;

    double forward_norm() const;   // |u|^2 + |p|^2 - |v|^2 - |q|^2
    double backward_norm() const;  // same for the barred quadruple
};

struct BackwardCoefficients
{
    cplx u_bar, v_bar, p_bar, q_bar;
};

// Forward coefficients together with their z-derivatives.
struct ForwardCoefficients
{
    cplx u, v, p, q;
    cplx du, dv, dp, dq;
};

// b = (i/kappa) e^{-i rho z} (da/dz + xi a^+), applied coefficientwise.
// For kappa = 0 the backward field decouples: p_bar = 1, the rest vanish.
BackwardCoefficients backward_recovery(const GratingParams &g, const ForwardCoefficients &fwd,
                                       double z);

// Closed-form solution at exact Bragg resonance. Requires rho == 0.
ScatteringQuad scattering_rho0(const GratingParams &g, double z);

// Forward coefficients and derivatives from the rho = 0 closed forms.
ForwardCoefficients forward_rho0(const GratingParams &g, double z);

// Generator of the z-evolution of (a, a^+, B, B^+) with B = e^{i rho z} b;
// constant in z.
Mat4 generator(const GratingParams &g);

// exp(generator * z), assembled from the cosh/sinh of lambda_pm z.
Mat4 fundamental_matrix(const GratingParams &g, const EigenStructure &es, double z);

// Transfer map of (a, a^+, b, b^+) from 0 to z in the lab frame.
Mat4 analytic_transfer(const GratingParams &g, const EigenStructure &es, double z);

// Boundary-value solution of one grating; evaluates the coefficients at any
// interior z from the analytic basis.
class GratingSolution
{
public:
    explicit GratingSolution(const GratingParams &g);

    const GratingParams &params() const { return params_; }
    const EigenStructure &eigen() const { return eigen_; }

    // Rows (a, a^+, b, b^+), columns (a0, a0^+, bL, bL^+).
    Mat4 coefficients(double z) const;
    ScatteringQuad at(double z) const;
    ForwardCoefficients forward(double z) const;

private:
    GratingParams params_;
    EigenStructure eigen_;
    Mat4 boundary_;  // coefficients at z = 0
};

ScatteringQuad scattering_general(const GratingParams &g, double z);

// Full 4x4 scattering map (a0, a0^+, bL, bL^+) -> (aL, aL^+, b0, b0^+).
Mat4 scattering_matrix(const ScatteringQuad &at_end, const ScatteringQuad &at_start);

struct SpectrumPoint
{
    double rho = 0.0;
    double transmission = 0.0;  // |u(L)|^2
    double reflection = 0.0;    // |u_bar(0)|^2
    double photon_gain = 0.0;   // photons leaving both ends for vacuum input
    bool ok = true;
    std::string error;
};

std::vector<SpectrumPoint> reflection_spectrum(const GratingParams &g,
                                               std::span<const double> rho_grid);

} // namespace dfbopo

#endif
