#include "dfbopo/linalg.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "dfbopo/errors.hpp"

namespace dfbopo
{
Mat2 bogoliubov(cplx alpha, cplx beta)
{
    Mat2 m;
    m << alpha, beta, std::conj(beta), std::conj(alpha);
    return m;
}

double bogoliubov_defect(const Mat2 &m)
{
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double d21 = std::abs(m(1, 0) - std::conj(m(0, 1)));
    const double d22 = std::abs(m(1, 1) - std::conj(m(0, 0)));
    return std::max(d21, d22) / scale;
}

bool is_bogoliubov(const Mat2 &m, double tol)
{
    return m.allFinite() && bogoliubov_defect(m) <= tol;
}

Mat2 phase_matrix(double phi)
{
    return bogoliubov(std::polar(1.0, phi), 0.0);
}

Mat2 multiply(const Mat2 &a, const Mat2 &b)
{
    return a * b;
}

Mat2 resolvent(const Mat2 &m, double tol)
{
    const Mat2 k = Mat2::Identity() - m;
    const cplx det = k.determinant();
    if (!(std::abs(det) > tol))
        throw SingularResolvent("det(I - M) = " + std::to_string(std::abs(det)) +
                                " is below the resolvent tolerance");
    Mat2 inv;
    inv << k(1, 1), -k(0, 1), -k(1, 0), k(0, 0);
    return inv / det;
}

double condition_number(const Mat4 &a)
{
    Eigen::JacobiSVD<Mat4> svd(a);
    const auto &s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0))
        return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

namespace
{
// Row equilibration leaves the solution unchanged and removes the spurious
// ill-conditioning of rows that grow like e^{kappa L}.
template <typename Rhs>
Rhs solve_equilibrated(const Mat4 &a, const Rhs &rhs, double condition_bound)
{
    Eigen::Vector4d scale;
    for (int i = 0; i < 4; ++i)
    {
        const double m = a.row(i).cwiseAbs().maxCoeff();
        scale(i) = m > 0.0 ? 1.0 / m : 1.0;
    }
    const Mat4 scaled = scale.cast<cplx>().asDiagonal() * a;
    const double cond = condition_number(scaled);
    if (!(cond < condition_bound))
        throw IllConditioned("4x4 system condition number " + std::to_string(cond) +
                             " exceeds bound");
    const Rhs scaled_rhs = scale.cast<cplx>().asDiagonal() * rhs;
    return scaled.fullPivLu().solve(scaled_rhs);
}
} // namespace

Mat4 solve_linear_4(const Mat4 &a, const Mat4 &rhs, double condition_bound)
{
    return solve_equilibrated(a, rhs, condition_bound);
}

Vec4 solve_linear_4(const Mat4 &a, const Vec4 &rhs, double condition_bound)
{
    return solve_equilibrated(a, rhs, condition_bound);
}

Mat4 commutator_metric()
{
    return Eigen::Vector4cd(1.0, -1.0, 1.0, -1.0).asDiagonal();
}

double metric_residual(const Mat4 &s, const Mat4 &metric)
{
    return (s * metric * s.adjoint() - metric).cwiseAbs().maxCoeff();
}

Mat4 block4(const Mat2 &m11, const Mat2 &m12, const Mat2 &m21, const Mat2 &m22)
{
    Mat4 m;
    m.topLeftCorner<2, 2>() = m11;
    m.topRightCorner<2, 2>() = m12;
    m.bottomLeftCorner<2, 2>() = m21;
    m.bottomRightCorner<2, 2>() = m22;
    return m;
}

} // namespace dfbopo
