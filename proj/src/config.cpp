#include "tripler/config.hpp"

#include <array>
#include <cmath>
#include <fstream>

namespace tripler {

namespace {

constexpr std::array<const char*, 4> kLabKeys{"omega0", "omegaF", "gamma", "F"};
constexpr std::array<const char*, 3> kScaledKeys{"f", "lambda", "delta_omega"};

double number(const nlohmann::json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
    return v.get<double>();
}

template <std::size_t N>
bool any_present(const nlohmann::json& obj, const std::array<const char*, N>& keys) {
    for (const char* k : keys)
        if (obj.contains(k)) return true;
    return false;
}

}  // namespace

std::optional<ParamsInput> parse_params(const nlohmann::json& obj) {
    if (!obj.is_object()) throw ConfigError("config must be a JSON object");
    const bool lab = any_present(obj, kLabKeys);
    const bool scaled = any_present(obj, kScaledKeys);
    if (lab && scaled) {
        throw ConfigError("config mixes lab keys (omega0, omegaF, gamma, F) with scaled keys "
                          "(f, lambda, delta_omega); use one style");
    }
    if (!lab && !scaled) return std::nullopt;

    const double hbar = obj.contains("hbar") ? number(obj, "hbar") : 1.0;
    const double Gamma = obj.contains("Gamma") ? number(obj, "Gamma") : 0.0;
    const double nbar = obj.contains("nbar") ? number(obj, "nbar") : 0.0;

    if (lab) {
        for (const char* k : kLabKeys)
            if (!obj.contains(k)) throw ConfigError(std::string("lab-style config is missing '") + k + "'");
        LabParams p;
        p.omega0 = number(obj, "omega0");
        p.omegaF = number(obj, "omegaF");
        p.gamma = number(obj, "gamma");
        p.F = number(obj, "F");
        p.hbar = hbar;
        p.Gamma = Gamma;
        p.nbar = nbar;
        return p;
    }
    ScaledInput s;
    if (obj.contains("f")) s.f = number(obj, "f");
    if (obj.contains("lambda")) s.lambda = number(obj, "lambda");
    if (obj.contains("delta_omega")) s.delta_omega = number(obj, "delta_omega");
    s.hbar = hbar;
    s.Gamma = Gamma;
    s.nbar = nbar;
    if (!(s.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(s.delta_omega > 0.0)) throw ConfigError("delta_omega must be positive");
    return s;
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("cannot parse config file '" + path + "': " + e.what());
    }
}

double input_f(const ParamsInput& in) {
    if (const auto* lab = std::get_if<LabParams>(&in)) return to_scaled(*lab).f;
    return std::abs(std::get<ScaledInput>(in).f);
}

double input_lambda(const ParamsInput& in) {
    if (const auto* lab = std::get_if<LabParams>(&in)) return to_scaled(*lab).lambda;
    return std::get<ScaledInput>(in).lambda;
}

}  // namespace tripler
