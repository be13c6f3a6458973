#pragma once

// Parameter config files.
//
// A config is a UTF-8 JSON object. Physical parameters come in exactly one of
// two styles:
//
//   lab style     omega0, omegaF, gamma, F   (plus optional hbar)
//   scaled style  f, lambda, delta_omega     (plus optional hbar)
//
// Gamma and nbar are accepted with either style. Mixing lab-only and
// scaled-only keys is a ConfigError. Run settings (mode, out, f_min, f_max,
// f_points, nmax, steps, ...) live in the same object and are read by the CLI.

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "tripler/params.hpp"

namespace tripler {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScaledInput {
    double f = 0.0;
    double lambda = 0.3;
    double delta_omega = 1.0;
    double hbar = 1.0;
    double Gamma = 0.0;
    double nbar = 0.0;
};

using ParamsInput = std::variant<LabParams, ScaledInput>;

// Returns nullopt when the object has no physical keys at all.
std::optional<ParamsInput> parse_params(const nlohmann::json& obj);

nlohmann::json load_config_file(const std::string& path);

// f and lambda of either input style.
double input_f(const ParamsInput& in);
double input_lambda(const ParamsInput& in);

}  // namespace tripler
