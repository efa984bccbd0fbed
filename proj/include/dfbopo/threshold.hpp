#ifndef DFBOPO_THRESHOLD_HPP
#define DFBOPO_THRESHOLD_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfbopo/cavity.hpp"

namespace dfbopo
{
struct ThresholdOptions
{
    std::size_t scan_points = 400;
    // Upper end of the coarse scan; <= 0 selects 10 / (shortest section length).
    double xi_max = 0.0;
    double relative_tolerance = 1e-12;
};

struct ThresholdResult
{
    double xi_th = 0.0;                  // 1/m
    double pump_product = 0.0;           // P1 P2 at threshold, W^2
    std::pair<double, double> bracket;   // final bisection bracket
    std::size_t iterations = 0;          // bisection steps
    double residual = 0.0;               // threshold determinant at xi_th
};

double default_xi_max(const CavitySpec &spec);

// Smallest positive gain at which the threshold determinant changes sign:
// coarse scan over (0, xi_max] followed by bisection. A boundary solve that
// becomes ill-conditioned before the first crossing ends the scan with
// NoThresholdInRange, as does a sign change through a pole of the
// determinant.
ThresholdResult find_threshold(const CavitySpec &spec, const ThresholdOptions &opts = {});

// True when the threshold determinant stays positive on a uniform scan of
// [0, xi], i.e. xi lies below the first threshold (zero or pole).
bool below_threshold(const CavitySpec &spec, double xi, std::size_t scan_points = 100);

struct ThresholdCell
{
    double l2 = 0.0;
    double l3 = 0.0;
    std::optional<ThresholdResult> result;
    std::string error;  // set when result is empty
};

// Row-major over (l2, l3): cell(i, j) = cells[i * l3.size() + j].
struct ThresholdMap
{
    std::vector<double> l2_grid;
    std::vector<double> l3_grid;
    std::vector<ThresholdCell> cells;

    const ThresholdCell &cell(std::size_t i, std::size_t j) const
    {
        return cells[i * l3_grid.size() + j];
    }
};

ThresholdMap threshold_map(const CavitySpec &base, std::span<const double> l2_grid,
                           std::span<const double> l3_grid, const ThresholdOptions &opts = {});

} // namespace dfbopo

#endif
