#ifndef DFBOPO_CAVITY_HPP
#define DFBOPO_CAVITY_HPP

#include <optional>

#include "dfbopo/gain_grating.hpp"
#include "dfbopo/linalg.hpp"

namespace dfbopo
{
// How the unmodulated mid-section acts on the forward (c) and backward (d)
// passages.
//  kPumpLocked: forward passage is the pure squeeze [[C, -S], [-S, C]] with the
//    squeezing phase locked to the co-propagating pumps; the round-trip phase
//    2 theta is applied on the backward passage, Theta = diag(e^{2i theta}, c.c.).
//  kPrinted: Xi = [[e^{i theta} C, e^{-i theta} S], [e^{i theta} S, e^{-i theta} C]]
//    forward and Theta = diag(e^{i theta}, c.c.) backward.
// C = cosh(xi L3), S = sinh(xi L3). Both reach resonance at theta = pi/2 for rho = 0.
enum class MidSectionConvention
{
    kPumpLocked,
    kPrinted,
};

// Two gain gratings joined by an unmodulated section of length mid_length.
// All three sections share xi = xi_from_pumps(pumps); the xi fields of the
// grating parameters are ignored.
struct CavitySpec
{
    GratingParams grating1;
    GratingParams grating2;
    double mid_length = 0.0;
    double theta = 0.0;
    PumpConfig pumps;
    MidSectionConvention convention = MidSectionConvention::kPumpLocked;

    void validate() const;
    double xi() const { return xi_from_pumps(pumps); }
    double total_length() const { return grating1.length + mid_length + grating2.length; }
    double normalized_theta() const;
};

struct CavityMatrices
{
    Mat2 m_ca, m_cd, m_dc, m_df;
    Mat2 m_ba, m_bd, m_gf, m_gc;
    Mat2 theta;  // backward passage of the mid-section
    Mat2 xi;     // forward passage of the mid-section
};

// c = c_from_a a + c_from_f f, d = d_from_a a + d_from_f f
struct InternalFields
{
    Mat2 c_from_a, c_from_f;
    Mat2 d_from_a, d_from_f;
};

struct CavityIO
{
    Mat2 r_ba, t_bf;  // b = R_ba a + T_bf f
    Mat2 r_gf, t_ga;  // g = R_gf f + T_ga a
    double threshold_margin = 0.0;

    // (a, a^+, f, f^+) -> (b, b^+, g, g^+)
    Mat4 map() const;
};

// Solved cavity at one gain value. Holds the two grating solutions so interior
// fields can be evaluated without re-solving the boundary problems.
class Cavity
{
public:
    explicit Cavity(const CavitySpec &spec);
    Cavity(const CavitySpec &spec, double xi_override);

    const CavitySpec &spec() const { return spec_; }
    double xi() const { return xi_; }
    const GratingSolution &grating1() const { return g1_; }
    const GratingSolution &grating2() const { return g2_; }
    const CavityMatrices &matrices() const { return m_; }

    // det(I - M_cd Theta M_dc Xi), complex.
    cplx loop_determinant() const;
    // Real part, after checking the imaginary part vanishes.
    double threshold_margin() const;

    // Throw SingularResolvent unless strictly below the first threshold.
    InternalFields internal_fields() const;
    CavityIO io() const;

private:
    void require_below_threshold() const;

    CavitySpec spec_;
    double xi_;
    GratingSolution g1_;
    GratingSolution g2_;
    CavityMatrices m_;
};

Mat2 mid_section_forward(MidSectionConvention conv, double theta, double squeeze);
Mat2 mid_section_backward(MidSectionConvention conv, double theta);

CavityMatrices build_matrices(const CavitySpec &spec);
InternalFields internal_fields(const CavitySpec &spec);
CavityIO io_matrices(const CavitySpec &spec);

// Real threshold determinant with every section's gain set to xi_override.
double threshold_determinant(const CavitySpec &spec, double xi_override);

} // namespace dfbopo

#endif
