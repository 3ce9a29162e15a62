#pragma once

// Phase-randomized weak coherent source over fiber with threshold detectors,
// asymptotic (infinite-decoy) estimation of the single-photon gain and error,
// and the resulting key rate on the sifted key.

#include <filesystem>
#include <string>
#include <string_view>

namespace qkd3 {

enum class Protocol { three_state, bb84 };

const char* to_string(Protocol p) noexcept;
Protocol parse_protocol(std::string_view name);

/// Defaults are the Gobby-Yuan-Shields fiber experiment values.
struct ChannelParams {
    double fiber_loss_db_per_km = 0.21;
    double eta_bob = 0.045;
    double y0 = 1.7e-6;
    double e_det = 0.033;
    double e0 = 0.5;
    double f_ec = 1.22;

    void validate() const;
};

/// Flat "key = value" text; '#' starts a comment; unspecified keys keep defaults.
ChannelParams parse_channel_params(std::string_view text);
ChannelParams load_channel_params(const std::filesystem::path& path);
std::string format_channel_params(const ChannelParams& p);

struct DecoyObservables {
    double q_mu = 0.0;  ///< signal gain
    double e_mu = 0.0;  ///< signal QBER
    double q1 = 0.0;    ///< single-photon gain
    double e1 = 0.0;    ///< single-photon bit error rate
};

double channel_transmittance(const ChannelParams& params, double distance_km);

DecoyObservables channel_observables(const ChannelParams& params, double distance_km, double mu);

/// Single-photon phase error rate used by the rate formula: e1 for BB84,
/// exact_bound(e1, e1) for the three-state protocol (+inf if e1 > 1/2).
double single_photon_phase_error(const DecoyObservables& obs, Protocol protocol);

/// R = -Q_mu f H2(E_mu) + Q1 (1 - H2(e_p)). Returns -infinity for the
/// three-state protocol when e1 > 1/2.
double key_rate_decoy(const DecoyObservables& obs, const ChannelParams& params, Protocol protocol);

/// Same, with a precomputed single-photon phase error rate.
double key_rate_decoy(const DecoyObservables& obs, const ChannelParams& params, double e_p);

struct OptimalMu {
    double mu = 0.0;
    double rate = 0.0;
};

/// Maximizes the rate over mu in (0, 1]: 400-point scan then golden refinement to 1e-6.
OptimalMu optimal_mu(const ChannelParams& params, double distance_km, Protocol protocol);

/// Largest distance (0.01 km resolution) with a positive optimal rate.
/// Throws NoSecureDistance if the rate is not positive at L = 0;
/// returns +infinity if it stays positive out to 10^4 km.
double max_secure_distance(const ChannelParams& params, Protocol protocol);

}  // namespace qkd3
