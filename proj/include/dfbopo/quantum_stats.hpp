#ifndef DFBOPO_QUANTUM_STATS_HPP
#define DFBOPO_QUANTUM_STATS_HPP

#include <cstddef>
#include <vector>

#include "dfbopo/cavity.hpp"
#include "dfbopo/linalg.hpp"

namespace dfbopo
{
// Quadratures x = (w + w^+)/sqrt(2), p = -i (w - w^+)/sqrt(2); vacuum variance 1/2.

// Q M Q^-1 for a Bogoliubov-form M. Throws NotReal if the result is not real.
RealMat2 quad_transform(const Mat2 &m);

struct QuadratureStats
{
    double var_x = 0.5;
    double var_p = 0.5;
    double cov_xp = 0.0;
    // Principal variances of the (x, p) covariance ellipse.
    double min_var = 0.5;
    double max_var = 0.5;
    double squeezing_db = 0.0;      // -10 log10(2 min_var)
    double antisqueezing_db = 0.0;  // 10 log10(2 max_var)
    double mean_photons = 0.0;      // (var_x + var_p - 1) / 2

    static QuadratureStats from_covariance(const RealMat2 &cov);
    RealMat2 covariance() const;
};

enum class Port
{
    kB,  // backward output at the first facet
    kG,  // forward output at the final facet
};

// Output statistics for vacuum at both inputs.
QuadratureStats output_variances(const CavityIO &io, Port port);
QuadratureStats output_variances(const CavitySpec &spec, Port port);

// Vacuum admixture: var -> eta var + (1 - eta)/2.
QuadratureStats apply_loss(const QuadratureStats &stats, double eta);

enum class Section
{
    kGrating1,
    kMid,
    kGrating2,
};

// Mean photon numbers of the interior modes in device coordinates
// z in [0, L1 + L3 + L2]. Interfaces are sampled from both sides.
struct FieldProfile
{
    std::vector<double> z;
    std::vector<double> n_forward;
    std::vector<double> n_backward;
    std::vector<Section> section;
};

inline constexpr std::size_t kDefaultProfileSamples = 200;

FieldProfile field_profile(const CavitySpec &spec,
                           std::size_t samples_per_section = kDefaultProfileSamples);

} // namespace dfbopo

#endif
