#include "dfbopo/cavity.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dfbopo/errors.hpp"

namespace dfbopo
{
namespace
{
GratingParams with_gain(GratingParams g, double xi)
{
    g.xi = xi;
    return g;
}

// Mode-pair matrix built from one coefficient pair of a scattering quadruple.
Mat2 pair(cplx alpha, cplx beta)
{
    return bogoliubov(alpha, beta);
}

} // namespace

void CavitySpec::validate() const
{
    grating1.validate();
    grating2.validate();
    pumps.validate();
    if (!(mid_length >= 0.0) || !std::isfinite(mid_length))
        throw InvalidArgument("mid-section length must be >= 0");
    if (!std::isfinite(theta))
        throw InvalidArgument("theta must be finite");
}

double CavitySpec::normalized_theta() const
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0)
        t += two_pi;
    return t >= two_pi ? 0.0 : t;
}

Mat2 mid_section_forward(MidSectionConvention conv, double theta, double squeeze)
{
    const double c = std::cosh(squeeze);
    const double s = std::sinh(squeeze);
    Mat2 m;
    if (conv == MidSectionConvention::kPrinted)
    {
        const cplx e = std::polar(1.0, theta);
        m << e * c, std::conj(e) * s, e * s, std::conj(e) * c;
    }
    else
    {
        m << c, -s, -s, c;
    }
    return m;
}

Mat2 mid_section_backward(MidSectionConvention conv, double theta)
{
    return phase_matrix(conv == MidSectionConvention::kPrinted ? theta : 2.0 * theta);
}

Mat4 CavityIO::map() const
{
    return block4(r_ba, t_bf, t_ga, r_gf);
}

Cavity::Cavity(const CavitySpec &spec) : Cavity(spec, spec.xi()) {}

Cavity::Cavity(const CavitySpec &spec, double xi_override)
    : spec_(spec), xi_(xi_override), g1_(with_gain(spec.grating1, xi_override)),
      g2_(with_gain(spec.grating2, xi_override))
{
    spec.validate();
    if (!(xi_override >= 0.0) || !std::isfinite(xi_override))
        throw InvalidArgument("gain override must be finite and >= 0");

    const double theta = spec.normalized_theta();
    const ScatteringQuad e1 = g1_.at(spec.grating1.length);
    const ScatteringQuad s1 = g1_.at(0.0);
    const ScatteringQuad e2 = g2_.at(spec.grating2.length);
    const ScatteringQuad s2 = g2_.at(0.0);

    m_.m_ca = pair(e1.u, e1.v);
    m_.m_cd = pair(e1.p, e1.q);
    m_.m_ba = pair(s1.u_bar, s1.v_bar);
    m_.m_bd = pair(s1.p_bar, s1.q_bar);
    m_.m_dc = pair(s2.u_bar, s2.v_bar);
    m_.m_df = pair(s2.p_bar, s2.q_bar);
    m_.m_gc = pair(e2.u, e2.v);
    m_.m_gf = pair(e2.p, e2.q);
    m_.theta = mid_section_backward(spec.convention, theta);
    m_.xi = mid_section_forward(spec.convention, theta, xi_override * spec.mid_length);
}

cplx Cavity::loop_determinant() const
{
    const Mat2 loop = m_.m_cd * m_.theta * m_.m_dc * m_.xi;
    return (Mat2::Identity() - loop).determinant();
}

double Cavity::threshold_margin() const
{
    const Mat2 loop = m_.m_cd * m_.theta * m_.m_dc * m_.xi;
    const cplx det = (Mat2::Identity() - loop).determinant();
    const double scale = 1.0 + std::abs(loop.trace()) + std::abs(loop.determinant());
    if (std::abs(det.imag()) > 1e-10 * (std::abs(det.real()) + scale))
        throw DeterminantNotReal("threshold determinant has imaginary part " +
                                 std::to_string(det.imag()));
    return det.real();
}

void Cavity::require_below_threshold() const
{
    const double margin = threshold_margin();
    if (!(margin > 0.0))
        throw SingularResolvent("cavity is at or above its oscillation threshold (margin " +
                                std::to_string(margin) + ")");
}

InternalFields Cavity::internal_fields() const
{
    require_below_threshold();
    const Mat2 &mcd = m_.m_cd, &mdc = m_.m_dc, &mca = m_.m_ca, &mdf = m_.m_df;
    const Mat2 &th = m_.theta, &xi = m_.xi;

    const Mat2 rc = resolvent(mcd * th * mdc * xi);
    const Mat2 rd = resolvent(mdc * xi * mcd * th);

    InternalFields f;
    f.c_from_a = rc * mca;
    f.c_from_f = rc * mcd * th * mdf;
    f.d_from_a = rd * mdc * xi * mca;
    f.d_from_f = rd * mdf;
    return f;
}

CavityIO Cavity::io() const
{
    const InternalFields f = internal_fields();
    CavityIO out;
    // Direct substitution of the solved internal fields into the output
    // relations b = M_ba a + M_bd Theta d and g = M_gf f + M_gc Xi c.
    out.r_ba = m_.m_ba + m_.m_bd * m_.theta * f.d_from_a;
    out.t_bf = m_.m_bd * m_.theta * f.d_from_f;
    out.r_gf = m_.m_gf + m_.m_gc * m_.xi * f.c_from_f;
    out.t_ga = m_.m_gc * m_.xi * f.c_from_a;
    out.threshold_margin = threshold_margin();
    return out;
}

CavityMatrices build_matrices(const CavitySpec &spec)
{
    return Cavity(spec).matrices();
}

InternalFields internal_fields(const CavitySpec &spec)
{
    return Cavity(spec).internal_fields();
}

CavityIO io_matrices(const CavitySpec &spec)
{
    return Cavity(spec).io();
}

double threshold_determinant(const CavitySpec &spec, double xi_override)
{
    return Cavity(spec, xi_override).threshold_margin();
}

} // namespace dfbopo
