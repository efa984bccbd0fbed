#include "dfbopo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dfbopo/errors.hpp"

namespace dfbopo
{
namespace
{
constexpr cplx kI{0.0, 1.0};

// Lab-frame generator at z; six nonzero entries, applied row by row.
struct Generator
{
    double xi;
    cplx ike;       // i kappa e^{i rho z}
    cplx ike_conj;  // i kappa e^{-i rho z}

    Generator(const GratingParams &g, double z)
    {
        const cplx e = std::polar(1.0, g.rho * z);
        xi = g.xi;
        ike = kI * g.kappa * e;
        ike_conj = kI * g.kappa * std::conj(e);
    }

    Mat4 operator*(const Mat4 &x) const
    {
        Mat4 y;
        y.row(0) = -xi * x.row(1) - ike * x.row(2);
        y.row(1) = -xi * x.row(0) + ike_conj * x.row(3);
        y.row(2) = ike_conj * x.row(0);
        y.row(3) = -ike * x.row(1);
        return y;
    }
};

} // namespace

Mat4 integrate_transfer(const GratingParams &g, std::size_t steps)
{
    g.validate();
    if (steps < kMinOracleSteps)
        throw InvalidArgument("oracle needs at least " + std::to_string(kMinOracleSteps) +
                              " steps");
    const double h = g.length / static_cast<double>(steps);
    Mat4 t = Mat4::Identity();
    Generator a0(g, 0.0);
    for (std::size_t n = 0; n < steps; ++n)
    {
        const double z = h * static_cast<double>(n);
        const Generator ah(g, z + 0.5 * h);
        const Generator a1(g, z + h);
        const Mat4 k1 = a0 * t;
        const Mat4 k2 = ah * (t + 0.5 * h * k1);
        const Mat4 k3 = ah * (t + 0.5 * h * k2);
        const Mat4 k4 = a1 * (t + h * k3);
        t += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        a0 = a1;
    }
    return t;
}

Mat4 transfer_metric()
{
    return Vec4(1.0, -1.0, -1.0, 1.0).asDiagonal();
}

OracleScattering transfer_to_scattering(const Mat4 &t, double length, double condition_bound)
{
    const Mat2 t11 = t.topLeftCorner<2, 2>();
    const Mat2 t12 = t.topRightCorner<2, 2>();
    const Mat2 t21 = t.bottomLeftCorner<2, 2>();
    const Mat2 t22 = t.bottomRightCorner<2, 2>();

    Eigen::JacobiSVD<Mat2> svd(t22);
    const double smin = svd.singularValues()(1);
    const double cond = smin > 0.0 ? svd.singularValues()(0) / smin
                                    : std::numeric_limits<double>::infinity();
    if (!(cond < condition_bound))
        throw IllConditioned("b-output block of transfer map has condition " +
                             std::to_string(cond));

    // b(L) = T21 a(0) + T22 b(0)  =>  b(0) = T22^-1 (b(L) - T21 a(0))
    const Mat2 t22_inv = t22.inverse();
    const Mat2 back_a = -t22_inv * t21;  // coefficient block of (a0, a0^+)
    const Mat2 back_b = t22_inv;         // coefficient block of (bL, bL^+)
    const Mat2 fwd_a = t11 + t12 * back_a;
    const Mat2 fwd_b = t12 * back_b;

    OracleScattering out;
    out.at_end.u = fwd_a(0, 0);
    out.at_end.v = fwd_a(0, 1);
    out.at_end.p = fwd_b(0, 0);
    out.at_end.q = fwd_b(0, 1);
    out.at_end.z = length;
    out.at_start.u = 1.0;
    out.at_start.u_bar = back_a(0, 0);
    out.at_start.v_bar = back_a(0, 1);
    out.at_start.p_bar = back_b(0, 0);
    out.at_start.q_bar = back_b(0, 1);
    out.at_start.z = 0.0;
    return out;
}

double scattering_deviation(const GratingParams &g, std::size_t steps)
{
    const OracleScattering o = transfer_to_scattering(integrate_transfer(g, steps), g.length);
    const GratingSolution sol(g);
    const ScatteringQuad e = sol.at(g.length);
    const ScatteringQuad s = sol.at(0.0);
    const cplx diffs[] = {e.u - o.at_end.u,           e.v - o.at_end.v,
                          e.p - o.at_end.p,           e.q - o.at_end.q,
                          s.u_bar - o.at_start.u_bar, s.v_bar - o.at_start.v_bar,
                          s.p_bar - o.at_start.p_bar, s.q_bar - o.at_start.q_bar};
    double worst = 0.0;
    for (const cplx &d : diffs)
        worst = std::max(worst, std::abs(d));
    return worst;
}

ConvergenceEstimate convergence_order(const GratingParams &g, std::size_t base_steps)
{
    const std::size_t n = std::max(base_steps, kMinOracleSteps);
    const Mat4 t1 = integrate_transfer(g, n);
    const Mat4 t2 = integrate_transfer(g, 2 * n);
    const Mat4 t4 = integrate_transfer(g, 4 * n);
    ConvergenceEstimate est;
    est.error_coarse = (t1 - t2).cwiseAbs().maxCoeff();
    est.error_fine = (t2 - t4).cwiseAbs().maxCoeff();
    if (est.error_fine > 0.0 && est.error_coarse > 0.0)
        est.order = std::log2(est.error_coarse / est.error_fine);
    return est;
}

} // namespace dfbopo
