#include "dfbopo/gain_grating.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "dfbopo/errors.hpp"

namespace dfbopo
{
namespace
{
constexpr cplx kI{0.0, 1.0};

// sinh(x)/x, entire.
cplx shc(cplx x)
{
    if (std::abs(x) < 1e-3)
    {
        const cplx x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
    }
    return std::sinh(x) / x;
}

// Divided difference over mu = lambda^2 of sinh(lambda z)/lambda between the
// two roots a^2 and b^2. Gauss-Legendre of the cosh divided difference along
// [0, z] when the roots are close; direct quotient otherwise.
cplx sinhc_divided(cplx a, cplx b, double z)
{
    const cplx diff = a - b;
    if (std::abs(diff) * z > 1.0)
        return (z * shc(a * z) - z * shc(b * z)) / ((a - b) * (a + b));

    using rule = boost::math::quadrature::gauss<double, 30>;
    const auto &x = rule::abscissa();
    const auto &w = rule::weights();
    const cplx sum_half = 0.5 * (a + b);
    const cplx diff_half = 0.5 * diff;
    auto integrand = [&](double s) { return 0.5 * s * s * shc(sum_half * s) * shc(diff_half * s); };
    cplx acc = 0.0;
    const double mid = 0.5 * z;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += w[i] * (integrand(mid + mid * x[i]) + integrand(mid - mid * x[i]));
    return acc * mid;
}

void check_position(const GratingParams &g, double z)
{
    if (!(z >= 0.0 && z <= g.length))
        throw InvalidArgument("position z=" + std::to_string(z) + " outside grating [0, " +
                              std::to_string(g.length) + "]");
}

Mat4 lab_frame(const GratingParams &g, double z)
{
    return Vec4(1.0, 1.0, std::polar(1.0, -g.rho * z), std::polar(1.0, g.rho * z)).asDiagonal();
}

} // namespace

void GratingParams::validate() const
{
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("grating length must be positive");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw InvalidArgument("grating coupling kappa must be >= 0");
    if (!(xi >= 0.0) || !std::isfinite(xi))
        throw InvalidArgument("gain rate xi must be >= 0");
    if (!std::isfinite(rho))
        throw InvalidArgument("detuning rho must be finite");
}

void PumpConfig::validate() const
{
    if (!(p1 >= 0.0) || !(p2 >= 0.0) || !(gamma_nl >= 0.0) || !std::isfinite(p1) ||
        !std::isfinite(p2) || !std::isfinite(gamma_nl))
        throw InvalidArgument("pump powers and gamma_nl must be finite and >= 0");
}

double xi_from_pumps(const PumpConfig &pumps)
{
    pumps.validate();
    return 2.0 * std::sqrt(pumps.p1 * pumps.p2) * pumps.gamma_nl;
}

cplx characteristic_polynomial(const GratingParams &g, cplx lambda)
{
    const double k2 = g.kappa * g.kappa;
    const double x2 = g.xi * g.xi;
    const double r2 = g.rho * g.rho;
    const cplx l2 = lambda * lambda;
    return l2 * l2 - (2.0 * k2 + x2 - r2) * l2 + (k2 * k2 - x2 * r2);
}

EigenStructure eigen_structure(const GratingParams &g, double degeneracy_tol)
{
    const double k2 = g.kappa * g.kappa;
    const double x2 = g.xi * g.xi;
    const double r2 = g.rho * g.rho;

    // lambda^2 = sigma/2 +- sqrt(sigma^2 - 4 tau)/2
    const double sigma = 2.0 * k2 + x2 - r2;
    const double tau = k2 * k2 - x2 * r2;
    const double disc_term = r2 - x2 - 2.0 * k2;
    const cplx root = std::sqrt(cplx(disc_term * disc_term + 4.0 * (x2 * r2 - k2 * k2), 0.0));

    cplx mu_plus = 0.5 * (sigma + root);
    cplx mu_minus = 0.5 * (sigma - root);
    // Recover the smaller root through the product to avoid cancellation.
    if (std::abs(mu_plus) >= std::abs(mu_minus))
    {
        if (mu_plus != 0.0)
            mu_minus = tau / mu_plus;
    }
    else
    {
        mu_plus = tau / mu_minus;
    }

    EigenStructure es;
    es.lambda_plus_sq = mu_plus;
    es.lambda_minus_sq = mu_minus;
    es.lambda_plus = std::sqrt(mu_plus);
    es.lambda_minus = std::sqrt(mu_minus);
    es.roots = {es.lambda_plus, -es.lambda_plus, es.lambda_minus, -es.lambda_minus};

    const double scale = k2 + x2 + r2 + std::numeric_limits<double>::min();
    es.degenerate = std::abs(mu_plus - mu_minus) < degeneracy_tol * scale;

    for (std::size_t i = 0; i < 4; ++i)
    {
        const cplx l = es.roots[i];
        const cplx ir = kI * g.rho;
        // Two equivalent forms; take the one with the better denominator.
        const cplx den1 = g.xi * (l - ir);
        const cplx den2 = -l * l - ir * l + k2;
        if (std::abs(den1) >= std::abs(den2))
            es.gammas[i] = (den1 == 0.0) ? cplx(std::numeric_limits<double>::infinity(), 0.0)
                                         : (-l * l + ir * l + k2) / den1;
        else
            es.gammas[i] = g.xi * (l + ir) / den2;
    }
    return es;
}

Mat4 generator(const GratingParams &g)
{
    const cplx ik = kI * g.kappa;
    const cplx ir = kI * g.rho;
    Mat4 k;
    k << 0.0, -g.xi, -ik, 0.0,
        -g.xi, 0.0, 0.0, ik,
        ik, 0.0, ir, 0.0,
        0.0, -ik, 0.0, -ir;
    return k;
}

Mat4 fundamental_matrix(const GratingParams &g, const EigenStructure &es, double z)
{
    // The generator K satisfies q(K^2) = 0 with q(mu) = (mu - l+^2)(mu - l-^2),
    // so any f(K^2) is its linear interpolant through the two roots:
    //   f(K^2) = f(l-^2) I + f[l+^2, l-^2] (K^2 - l-^2 I)
    // and exp(Kz) = cosh(sqrt(K^2) z) + (sinh(sqrt(K^2) z)/sqrt(K^2)) K.
    const Mat4 k = generator(g);
    const Mat4 k2 = k * k;
    const cplx a = es.lambda_plus;
    cplx b = es.lambda_minus;
    if (std::abs(a - b) > std::abs(a + b))
        b = -b;  // both interpolants are even in b

    const cplx cosh_b = std::cosh(b * z);
    const cplx sinhc_b = z * shc(b * z);
    const cplx cosh_dd = 0.5 * z * z * shc(0.5 * (a + b) * z) * shc(0.5 * (a - b) * z);
    const cplx sinhc_dd = sinhc_divided(a, b, z);

    const Mat4 shifted = k2 - es.lambda_minus_sq * Mat4::Identity();
    const Mat4 c = cosh_b * Mat4::Identity() + cosh_dd * shifted;
    const Mat4 s = sinhc_b * Mat4::Identity() + sinhc_dd * shifted;
    return c + s * k;
}

Mat4 analytic_transfer(const GratingParams &g, const EigenStructure &es, double z)
{
    return lab_frame(g, z) * fundamental_matrix(g, es, z);
}

double ScatteringQuad::forward_norm() const
{
    return std::norm(u) + std::norm(p) - std::norm(v) - std::norm(q);
}

double ScatteringQuad::backward_norm() const
{
    return std::norm(u_bar) + std::norm(p_bar) - std::norm(v_bar) - std::norm(q_bar);
}

GratingSolution::GratingSolution(const GratingParams &g) : params_(g), eigen_(eigen_structure(g))
{
    g.validate();
    // Unknown: the coefficient matrix W(0). Its a-rows are fixed by a(0) = a0,
    // and the b-rows of T(L) W(0) must equal b(L) = bL.
    const Mat4 t = analytic_transfer(g, eigen_, g.length);
    Mat4 conditions = Mat4::Zero();
    conditions(0, 0) = 1.0;
    conditions(1, 1) = 1.0;
    conditions.row(2) = t.row(2);
    conditions.row(3) = t.row(3);
    boundary_ = solve_linear_4(conditions, Mat4::Identity().eval());
}

Mat4 GratingSolution::coefficients(double z) const
{
    check_position(params_, z);
    return analytic_transfer(params_, eigen_, z) * boundary_;
}

ScatteringQuad GratingSolution::at(double z) const
{
    const Mat4 w = coefficients(z);
    ScatteringQuad s;
    s.u = w(0, 0);
    s.v = w(0, 1);
    s.p = w(0, 2);
    s.q = w(0, 3);
    s.u_bar = w(2, 0);
    s.v_bar = w(2, 1);
    s.p_bar = w(2, 2);
    s.q_bar = w(2, 3);
    s.z = z;
    return s;
}

ForwardCoefficients GratingSolution::forward(double z) const
{
    check_position(params_, z);
    // Row a of the lab-frame factor is trivial, so a' = (K Phi W0)_a.
    const Mat4 phi_w = fundamental_matrix(params_, eigen_, z) * boundary_;
    const Mat4 dphi_w = generator(params_) * phi_w;
    return {phi_w(0, 0), phi_w(0, 1), phi_w(0, 2), phi_w(0, 3),
            dphi_w(0, 0), dphi_w(0, 1), dphi_w(0, 2), dphi_w(0, 3)};
}

ScatteringQuad scattering_general(const GratingParams &g, double z)
{
    return GratingSolution(g).at(z);
}

BackwardCoefficients backward_recovery(const GratingParams &g, const ForwardCoefficients &f,
                                       double z)
{
    if (g.kappa == 0.0)
        return {0.0, 0.0, 1.0, 0.0};
    const cplx pre = kI / g.kappa * std::polar(1.0, -g.rho * z);
    // a^+ carries conj coefficients: coefficient of a0 in a^+ is conj(v), etc.
    return {pre * (f.du + g.xi * std::conj(f.v)), pre * (f.dv + g.xi * std::conj(f.u)),
            pre * (f.dp + g.xi * std::conj(f.q)), pre * (f.dq + g.xi * std::conj(f.p))};
}

ForwardCoefficients forward_rho0(const GratingParams &g, double z)
{
    g.validate();
    if (g.rho != 0.0)
        throw InvalidArgument("closed-form solution requires rho == 0");
    check_position(g, z);

    const double xi = g.xi;
    if (g.kappa == 0.0)
    {
        // Pure squeezer: a' = -xi a^+.
        const double c = std::cosh(xi * z);
        const double s = std::sinh(xi * z);
        return {c, -s, 0.0, 0.0, xi * s, -xi * c, 0.0, 0.0};
    }

    const double k2 = g.kappa * g.kappa;
    const double root = std::sqrt(xi * xi + 4.0 * k2);
    const double lp = 0.5 * (xi + root);
    const double lm = 0.5 * (root - xi);
    const double len = g.length;
    const double n = lp * lp + lm * lm + 2.0 * lm * lp * std::cosh((lp + lm) * len);

    const double c_coef = 0.5 * (lp * lp - lm * lm) / n;
    const double d_coef = -lp * lm * std::sinh((lp + lm) * len) / n;
    const cplx r_coef = kI * g.kappa * (lm * std::sinh(lp * len) - lp * std::sinh(lm * len)) / n;
    const cplx s_coef = -kI * g.kappa * (lm * std::cosh(lp * len) + lp * std::cosh(lm * len)) / n;

    const double chp = std::cosh(lp * z), shp = std::sinh(lp * z);
    const double chm = std::cosh(lm * z), shm = std::sinh(lm * z);

    const double u = 0.5 * (chp + chm) + c_coef * chp + d_coef * shp - c_coef * chm + d_coef * shm;
    const double vc = 0.5 * (-shp + shm) - c_coef * shp - d_coef * chp - c_coef * shm + d_coef * chm;
    const double du = 0.5 * (lp * shp + lm * shm) + c_coef * lp * shp + d_coef * lp * chp -
                      c_coef * lm * shm + d_coef * lm * chm;
    const double dvc = 0.5 * (-lp * chp + lm * chm) - c_coef * lp * chp - d_coef * lp * shp -
                       c_coef * lm * chm + d_coef * lm * shm;

    const cplx p = r_coef * chp + s_coef * shp - r_coef * chm + s_coef * shm;
    const cplx qc = -r_coef * shp - s_coef * chp - r_coef * shm + s_coef * chm;
    const cplx dp = r_coef * lp * shp + s_coef * lp * chp - r_coef * lm * shm + s_coef * lm * chm;
    const cplx dqc = -r_coef * lp * chp - s_coef * lp * shp - r_coef * lm * chm + s_coef * lm * shm;

    return {u, vc, p, std::conj(qc), du, dvc, dp, std::conj(dqc)};
}

ScatteringQuad scattering_rho0(const GratingParams &g, double z)
{
    const ForwardCoefficients f = forward_rho0(g, z);
    const BackwardCoefficients b = backward_recovery(g, f, z);
    ScatteringQuad s;
    s.u = f.u;
    s.v = f.v;
    s.p = f.p;
    s.q = f.q;
    s.u_bar = b.u_bar;
    s.v_bar = b.v_bar;
    s.p_bar = b.p_bar;
    s.q_bar = b.q_bar;
    s.z = z;
    return s;
}

Mat4 scattering_matrix(const ScatteringQuad &e, const ScatteringQuad &s)
{
    Mat4 m;
    m << e.u, e.v, e.p, e.q,
        std::conj(e.v), std::conj(e.u), std::conj(e.q), std::conj(e.p),
        s.u_bar, s.v_bar, s.p_bar, s.q_bar,
        std::conj(s.v_bar), std::conj(s.u_bar), std::conj(s.q_bar), std::conj(s.p_bar);
    return m;
}

std::vector<SpectrumPoint> reflection_spectrum(const GratingParams &g,
                                               std::span<const double> rho_grid)
{
    std::vector<SpectrumPoint> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid)
    {
        SpectrumPoint pt;
        pt.rho = rho;
        try
        {
            GratingParams gp = g;
            gp.rho = rho;
            const GratingSolution sol(gp);
            const ScatteringQuad end = sol.at(gp.length);
            const ScatteringQuad start = sol.at(0.0);
            pt.transmission = std::norm(end.u);
            pt.reflection = std::norm(start.u_bar);
            pt.photon_gain = std::norm(end.v) + std::norm(end.q) + std::norm(start.v_bar) +
                             std::norm(start.q_bar);
        }
        catch (const Error &e)
        {
            pt.ok = false;
            pt.error = e.what();
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace dfbopo
