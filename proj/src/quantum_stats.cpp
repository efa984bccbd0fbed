#include "dfbopo/quantum_stats.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dfbopo/errors.hpp"

namespace dfbopo
{
namespace
{
const Mat2 &quad_q()
{
    static const Mat2 q = [] {
        Mat2 m;
        m << 1.0, 1.0, cplx(0.0, -1.0), cplx(0.0, 1.0);
        return Mat2(m / std::numbers::sqrt2);
    }();
    return q;
}

const Mat2 &quad_q_inv()
{
    static const Mat2 qi = [] {
        Mat2 m;
        m << 1.0, cplx(0.0, 1.0), 1.0, cplx(0.0, -1.0);
        return Mat2(m / std::numbers::sqrt2);
    }();
    return qi;
}

// Creation-operator weight of a field row over inputs (w1, w1^+, w2, w2^+).
double vacuum_photons(const Eigen::Matrix<cplx, 1, 4> &row)
{
    return std::norm(row(1)) + std::norm(row(3));
}

std::vector<double> samples(double from, double to, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = to;
    return out;
}

} // namespace

RealMat2 quad_transform(const Mat2 &m)
{
    const Mat2 r = quad_q() * m * quad_q_inv();
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if (r.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw NotReal("quadrature transform of a non-Bogoliubov matrix");
    return r.real();
}

QuadratureStats QuadratureStats::from_covariance(const RealMat2 &cov)
{
    QuadratureStats s;
    s.var_x = cov(0, 0);
    s.var_p = cov(1, 1);
    s.cov_xp = 0.5 * (cov(0, 1) + cov(1, 0));
    const double mean = 0.5 * (s.var_x + s.var_p);
    const double half_diff = 0.5 * (s.var_x - s.var_p);
    const double radius = std::hypot(half_diff, s.cov_xp);
    s.max_var = mean + radius;
    // det / max_var keeps the small eigenvalue accurate under strong squeezing.
    s.min_var = (s.var_x * s.var_p - s.cov_xp * s.cov_xp) / s.max_var;
    s.squeezing_db = -10.0 * std::log10(2.0 * s.min_var);
    s.antisqueezing_db = 10.0 * std::log10(2.0 * s.max_var);
    s.mean_photons = 0.5 * (s.var_x + s.var_p - 1.0);
    return s;
}

RealMat2 QuadratureStats::covariance() const
{
    RealMat2 c;
    c << var_x, cov_xp, cov_xp, var_p;
    return c;
}

QuadratureStats output_variances(const CavityIO &io, Port port)
{
    const Mat2 &r = port == Port::kB ? io.r_ba : io.r_gf;
    const Mat2 &t = port == Port::kB ? io.t_bf : io.t_ga;
    const RealMat2 rq = quad_transform(r);
    const RealMat2 tq = quad_transform(t);
    const RealMat2 cov = 0.5 * (rq * rq.transpose() + tq * tq.transpose());
    return QuadratureStats::from_covariance(cov);
}

QuadratureStats output_variances(const CavitySpec &spec, Port port)
{
    return output_variances(io_matrices(spec), port);
}

QuadratureStats apply_loss(const QuadratureStats &stats, double eta)
{
    if (!(eta >= 0.0 && eta <= 1.0))
        throw InvalidArgument("transmission eta must lie in [0, 1]");
    RealMat2 cov = eta * stats.covariance() + 0.5 * (1.0 - eta) * RealMat2::Identity();
    return QuadratureStats::from_covariance(cov);
}

FieldProfile field_profile(const CavitySpec &spec, std::size_t samples_per_section)
{
    if (samples_per_section < 2)
        throw InvalidArgument("profile needs at least 2 samples per section");

    const Cavity cavity(spec);
    const InternalFields fields = cavity.internal_fields();
    const CavityMatrices &m = cavity.matrices();
    const double l1 = spec.grating1.length;
    const double l3 = spec.mid_length;
    const double theta = spec.normalized_theta();

    FieldProfile prof;
    auto push = [&prof](double z, double nf, double nb, Section s) {
        prof.z.push_back(z);
        prof.n_forward.push_back(nf);
        prof.n_backward.push_back(nb);
        prof.section.push_back(s);
    };

    // Grating 1 inputs: a0 = a, bL = Theta d.
    Mat4 in1 = Mat4::Zero();
    in1.topLeftCorner<2, 2>() = Mat2::Identity();
    in1.bottomLeftCorner<2, 2>() = m.theta * fields.d_from_a;
    in1.bottomRightCorner<2, 2>() = m.theta * fields.d_from_f;
    for (double z : samples(0.0, l1, samples_per_section))
    {
        const Mat4 w = cavity.grating1().coefficients(z) * in1;
        push(z, vacuum_photons(w.row(0)), vacuum_photons(w.row(2)), Section::kGrating1);
    }

    if (l3 > 0.0)
    {
        Eigen::Matrix<cplx, 2, 4> c;
        c << fields.c_from_a, fields.c_from_f;
        Eigen::Matrix<cplx, 2, 4> d;
        d << fields.d_from_a, fields.d_from_f;
        for (double s : samples(0.0, l3, samples_per_section))
        {
            const Mat2 partial = mid_section_forward(spec.convention, theta * s / l3, cavity.xi() * s);
            const Eigen::Matrix<cplx, 2, 4> fwd = partial * c;
            push(l1 + s, vacuum_photons(fwd.row(0)), vacuum_photons(d.row(0)), Section::kMid);
        }
    }

    // Grating 2 inputs: a0 = Xi c, bL = f.
    Mat4 in2 = Mat4::Zero();
    in2.topLeftCorner<2, 2>() = m.xi * fields.c_from_a;
    in2.topRightCorner<2, 2>() = m.xi * fields.c_from_f;
    in2.bottomRightCorner<2, 2>() = Mat2::Identity();
    const double start2 = l1 + l3;
    for (double z : samples(0.0, spec.grating2.length, samples_per_section))
    {
        const Mat4 w = cavity.grating2().coefficients(z) * in2;
        push(start2 + z, vacuum_photons(w.row(0)), vacuum_photons(w.row(2)), Section::kGrating2);
    }
    return prof;
}

} // namespace dfbopo
