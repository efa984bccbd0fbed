#ifndef DFBOPO_CLI_CONFIG_HPP
#define DFBOPO_CLI_CONFIG_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dfbopo/cavity.hpp"
#include "dfbopo/errors.hpp"
#include "dfbopo/gain_grating.hpp"

namespace dfbopo::cli
{
// Malformed config text, unknown keys, bad values. Maps to exit code 2.
class ConfigError : public Error
{
public:
    using Error::Error;
};

struct SweepAxis
{
    std::string name;
    std::vector<double> values;
};

// Flat dotted-key config plus up to two sweep axes. Values stay as text until
// a device is built, so sweep points and overrides can replace any key.
//
//   # comment
//   grating1.kappa_L = 3
//   grating1.length = 0.05
//   [sweep]
//   name = pumps.threshold_fraction
//   from = 0.05
//   to = 0.99
//   points = 95
struct RunConfig
{
    std::map<std::string, std::string> values;
    std::vector<SweepAxis> sweeps;

    bool has(const std::string &key) const { return values.count(key) != 0; }
    double number(const std::string &key) const;
    double number_or(const std::string &key, double fallback) const;
    std::size_t count_or(const std::string &key, std::size_t fallback) const;
    std::string text_or(const std::string &key, const std::string &fallback) const;
};

inline constexpr std::size_t kMaxSweepAxes = 2;

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string &path);

// "key=value" from the command line; replaces any value from the file.
void apply_override(RunConfig &config, std::string_view assignment);

double parse_number(std::string_view text, std::string_view what);

bool is_known_key(std::string_view key);

// Device builders. Dimensionless keys (kappa_L, xi_L, rho_L) are divided by
// the section length; giving both forms of one quantity is an error.
GratingParams grating_from(const RunConfig &config, const std::string &prefix);
CavitySpec cavity_from(const RunConfig &config);

} // namespace dfbopo::cli

#endif
