#ifndef DFBOPO_LINALG_HPP
#define DFBOPO_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace dfbopo
{
using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using RealMat2 = Eigen::Matrix2d;

inline constexpr double kDefaultResolventTolerance = 1e-12;
inline constexpr double kDefaultConditionBound = 1e12;

// Mode-pair matrix of the form [[alpha, beta], [conj(beta), conj(alpha)]]
// acting on (w, w^dagger).
Mat2 bogoliubov(cplx alpha, cplx beta);

// Largest entrywise deviation from Bogoliubov form, relative to max(1, |M|).
double bogoliubov_defect(const Mat2 &m);

bool is_bogoliubov(const Mat2 &m, double tol = 1e-12);

Mat2 phase_matrix(double phi);

Mat2 multiply(const Mat2 &a, const Mat2 &b);

// (I - M)^-1. Throws SingularResolvent when |det(I - M)| <= tol.
Mat2 resolvent(const Mat2 &m, double tol = kDefaultResolventTolerance);

// 2-norm condition number estimate from the singular values.
double condition_number(const Mat4 &a);

// Solves A x = rhs. Throws IllConditioned when the condition number of the
// row-equilibrated A exceeds the bound.
Vec4 solve_linear_4(const Mat4 &a, const Vec4 &rhs,
                    double condition_bound = kDefaultConditionBound);

// Same as above for four right-hand sides at once (columns of rhs).
Mat4 solve_linear_4(const Mat4 &a, const Mat4 &rhs,
                    double condition_bound = kDefaultConditionBound);

// Metric diag(+1, -1, +1, -1) of the ordered operator vector (w1, w1^+, w2, w2^+).
Mat4 commutator_metric();

// max |S G S^H - G| for the given metric G.
double metric_residual(const Mat4 &s, const Mat4 &metric);

// 4x4 map whose blocks act on (w1, w1^+) and (w2, w2^+).
Mat4 block4(const Mat2 &m11, const Mat2 &m12, const Mat2 &m21, const Mat2 &m22);

} // namespace dfbopo

#endif
