#ifndef DFBOPO_CLI_COMMANDS_HPP
#define DFBOPO_CLI_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dfbopo/cli/config.hpp"

namespace dfbopo::cli
{
enum ExitCode : int
{
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitVerification = 4,
};

using Cell = std::variant<double, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// CSV: header line, 17 significant digits, '\n' line endings.
std::string to_csv(const Table &table);
// JSON: array of row objects keyed by column name; non-finite numbers as null.
std::string to_json(const Table &table);

// Rows: rho, transmission, reflection, photon_gain.
Table run_spectrum(const RunConfig &config);
// Rows: pump_product, squeezing_db_b, antisqueezing_db_b, squeezing_db_g, n_b, n_g, status.
Table run_squeeze(const RunConfig &config);
// Rows: L2, L3, pump_product_threshold, status.
Table run_threshold(const RunConfig &config);
// Rows: z, n_forward, n_backward.
Table run_profile(const RunConfig &config);

struct VerifyReport
{
    std::size_t draws = 0;
    std::size_t oracle_steps = 0;
    std::uint64_t seed = 0;
    double max_oracle_deviation = 0.0;
    double max_forward_norm_residual = 0.0;
    double max_backward_norm_residual = 0.0;
    double max_io_symplectic_residual = 0.0;
    std::size_t io_checked = 0;
    std::size_t io_skipped = 0;  // draws at or above the first threshold
    std::optional<double> convergence_order;  // empty when the oracle is exact
    double convergence_error_coarse = 0.0;
    double convergence_error_fine = 0.0;
    bool oracle_ok = false;
    bool norms_ok = false;
    bool symplectic_ok = false;
    bool order_ok = false;

    bool passed() const { return oracle_ok && norms_ok && symplectic_ok && order_ok; }
    std::string to_json() const;
};

inline constexpr double kVerifyOracleTolerance = 1e-6;
inline constexpr double kVerifyNormTolerance = 1e-9;
inline constexpr double kVerifySymplecticTolerance = 1e-8;
inline constexpr double kVerifyOrderLow = 3.5;
inline constexpr double kVerifyOrderHigh = 4.5;

VerifyReport run_verify(const RunConfig &config);

// Full command line: dfbopo <subcommand> [options]. Returns the exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dfbopo::cli

#endif
