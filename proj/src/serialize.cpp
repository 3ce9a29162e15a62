#include "qkd3/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qkd3 {

double round9(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

std::string format9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void to_json(nlohmann::json& j, const ProtocolStats& s) {
    j = nlohmann::json{
        {"transmitted", s.transmitted},
        {"sifted", s.sifted},
        {"sifted_z", s.sifted_z},
        {"sifted_x", s.sifted_x},
        {"z_check_errors", s.z_check_errors},
        {"z_check_total", s.z_check_total},
        {"z_data_errors", s.z_data_errors},
        {"z_data_total", s.z_data_total},
        {"x_check_errors", s.x_check_errors},
        {"x_check_total", s.x_check_total},
        {"observed_eb", round9(s.observed_eb)},
        {"observed_alpha", round9(s.observed_alpha)},
    };
}

void to_json(nlohmann::json& j, const AzumaReport& r) {
    j = nlohmann::json{
        {"p_error", round9(r.p_error)},
        {"p_no_error", round9(r.p_no_error)},
        {"dev_error", round9(r.dev_error)},
        {"dev_no_error", round9(r.dev_no_error)},
        {"tolerance", round9(r.tolerance)},
        {"error_within", r.error_within},
        {"no_error_within", r.no_error_within},
        {"alpha_analytic", round9(r.alpha_analytic)},
        {"alpha_deviation", round9(r.alpha_deviation)},
    };
}

void to_json(nlohmann::json& j, const BoundResult& r) {
    j = nlohmann::json{
        {"ep_max", round9(r.ep_max)},
        {"ep_uncapped", round9(r.ep_uncapped)},
        {"ay_star", round9(r.ay_star)},
        {"witness", format_attack(r.witness)},
        {"method", to_string(r.method)},
    };
}

}  // namespace qkd3
