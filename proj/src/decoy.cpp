#include "qkd3/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qkd3/epbound.hpp"
#include "qkd3/errors.hpp"
#include "qkd3/keyrate.hpp"
#include "qkd3/numeric.hpp"

namespace qkd3 {

namespace {

constexpr int kMuScanPoints = 400;
constexpr double kMuTolerance = 1e-6;
constexpr double kDistanceResolution = 0.01;
constexpr double kDistanceStep = 50.0;
constexpr double kDistanceLimit = 1e4;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const char* to_string(Protocol p) noexcept {
    return p == Protocol::bb84 ? "bb84" : "three-state";
}

Protocol parse_protocol(std::string_view name) {
    if (name == "three-state") return Protocol::three_state;
    if (name == "bb84") return Protocol::bb84;
    throw ParseError("unknown protocol '" + std::string(name) + "'");
}

void ChannelParams::validate() const {
    auto nonneg = [](double v, const char* what) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError(std::string(what) + " must be finite and nonnegative");
    };
    nonneg(fiber_loss_db_per_km, "fiber_loss_db_per_km");
    nonneg(y0, "y0");
    auto unit = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must be in [0, 1]");
    };
    unit(eta_bob, "eta_bob");
    unit(e_det, "e_det");
    unit(e0, "e0");
    if (!(f_ec >= 1.0) || !std::isfinite(f_ec)) throw DomainError("f_ec must be >= 1");
}

ChannelParams parse_channel_params(std::string_view text) {
    ChannelParams p;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("params line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size())
            throw ParseError("params line " + std::to_string(lineno) + ": bad number '" + value + "'");
        if (key == "fiber_loss_db_per_km") p.fiber_loss_db_per_km = v;
        else if (key == "eta_bob") p.eta_bob = v;
        else if (key == "y0") p.y0 = v;
        else if (key == "e_det") p.e_det = v;
        else if (key == "e0") p.e0 = v;
        else if (key == "f_ec") p.f_ec = v;
        else throw ParseError("params line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    p.validate();
    return p;
}

ChannelParams load_channel_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read params file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_channel_params(buf.str());
}

std::string format_channel_params(const ChannelParams& p) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "fiber_loss_db_per_km = %.17g\neta_bob = %.17g\ny0 = %.17g\ne_det = %.17g\n"
                  "e0 = %.17g\nf_ec = %.17g\n",
                  p.fiber_loss_db_per_km, p.eta_bob, p.y0, p.e_det, p.e0, p.f_ec);
    return buf;
}

double channel_transmittance(const ChannelParams& params, double distance_km) {
    return params.eta_bob * std::pow(10.0, -params.fiber_loss_db_per_km * distance_km / 10.0);
}

DecoyObservables channel_observables(const ChannelParams& params, double distance_km, double mu) {
    if (!(distance_km >= 0.0)) throw DomainError("distance must be nonnegative");
    if (!(mu > 0.0)) throw DomainError("mean photon number must be positive");
    const double eta = channel_transmittance(params, distance_km);
    const double detect = -std::expm1(-eta * mu);  // 1 - e^{-eta mu}
    DecoyObservables o;
    o.q_mu = params.y0 + detect;
    o.e_mu = o.q_mu > 0.0 ? (params.e0 * params.y0 + params.e_det * detect) / o.q_mu : 0.0;
    o.q1 = (params.y0 + eta) * mu * std::exp(-mu);
    o.e1 = params.y0 + eta > 0.0 ? (params.e0 * params.y0 + params.e_det * eta) / (params.y0 + eta)
                                 : params.e0;
    return o;
}

double single_photon_phase_error(const DecoyObservables& obs, Protocol protocol) {
    if (protocol == Protocol::bb84) return obs.e1;
    if (obs.e1 > 0.5) return std::numeric_limits<double>::infinity();
    // Symmetric channel: the check-state error equals the Z-basis error.
    return exact_bound(obs.e1, obs.e1).ep_max;
}

double key_rate_decoy(const DecoyObservables& obs, const ChannelParams& params, double e_p) {
    if (!(e_p <= 1.0)) return -std::numeric_limits<double>::infinity();
    return -obs.q_mu * params.f_ec * binary_entropy(obs.e_mu) + obs.q1 * (1.0 - binary_entropy(e_p));
}

double key_rate_decoy(const DecoyObservables& obs, const ChannelParams& params, Protocol protocol) {
    return key_rate_decoy(obs, params, single_photon_phase_error(obs, protocol));
}

OptimalMu optimal_mu(const ChannelParams& params, double distance_km, Protocol protocol) {
    // e1 does not depend on mu, so the phase error bound is computed once.
    const double e_p = single_photon_phase_error(channel_observables(params, distance_km, 1.0), protocol);
    auto rate = [&](double mu) {
        return key_rate_decoy(channel_observables(params, distance_km, mu), params, e_p);
    };
    OptimalMu best{1.0 / kMuScanPoints, rate(1.0 / kMuScanPoints)};
    int best_k = 1;
    for (int k = 2; k <= kMuScanPoints; ++k) {
        const double mu = static_cast<double>(k) / kMuScanPoints;
        const double r = rate(mu);
        if (r > best.rate) {
            best = {mu, r};
            best_k = k;
        }
    }
    const double lo = static_cast<double>(best_k - 1) / kMuScanPoints;
    const double hi = static_cast<double>(std::min(best_k + 1, kMuScanPoints)) / kMuScanPoints;
    const auto [mu, r] = numeric::golden_maximize(
        [&](double m) { return m > 0.0 ? rate(m) : -std::numeric_limits<double>::infinity(); }, lo,
        hi, kMuTolerance);
    if (r > best.rate) best = {mu, r};
    return best;
}

double max_secure_distance(const ChannelParams& params, Protocol protocol) {
    params.validate();
    auto secure = [&](double L) { return optimal_mu(params, L, protocol).rate > 0.0; };
    if (!secure(0.0)) throw NoSecureDistance("no positive key rate at zero distance");
    double lo = 0.0, hi = kDistanceStep;
    while (secure(hi)) {
        lo = hi;
        hi += kDistanceStep;
        if (hi > kDistanceLimit) return std::numeric_limits<double>::infinity();
    }
    return numeric::bisect_last_true(secure, lo, hi, kDistanceResolution);
}

}  // namespace qkd3
