#pragma once

// Eavesdropper attacks as Pauli-decomposed Kraus elements
//   E = a_I I + a_X X + a_Y Y + a_Z Z
// and the bit/check/phase error rates they induce.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qkd3 {

using Amplitude = std::complex<double>;

/// One Kraus element. Only magnitudes and the two interference terms
/// Re(a_I conj a_X), Re(i a_Y conj a_Z) enter the error rates.
struct KrausCoefficients {
    Amplitude a_i{};
    Amplitude a_x{};
    Amplitude a_y{};
    Amplitude a_z{};

    /// Sum of |a_beta|^2.
    double total_weight() const noexcept;
    /// |a_I + a_X|^2: weight of the no-error outcome on the |+> check state.
    double check_pass_weight() const noexcept;
    /// |i a_Y - a_Z|^2: weight of the |-> outcome on the |+> check state.
    double check_fail_weight() const noexcept;

    /// Throws DegenerateAttack when all coefficients vanish or any is non-finite.
    void validate() const;

    friend bool operator==(const KrausCoefficients&, const KrausCoefficients&) = default;
};

using AttackEnsemble = std::vector<KrausCoefficients>;

struct ErrorRates {
    double e_b = 0.0;    ///< Z-basis bit error rate
    double alpha = 0.0;  ///< |+> check-state error rate
    double e_p = 0.0;    ///< phase error rate of the data qubits
};

ErrorRates rates_from_ensemble(std::span<const KrausCoefficients> ensemble);
ErrorRates rates_of(const KrausCoefficients& element);

/// Interference cosines of a single element: c_ix for (a_I, a_X) and c_yz for
/// (i a_Y, a_Z), defined so that
///   |a_I + a_X|^2 = |a_I|^2 + |a_X|^2 + 2 c_ix |a_I||a_X|
///   |i a_Y - a_Z|^2 = |a_Y|^2 + |a_Z|^2 - 2 c_yz |a_Y||a_Z|.
/// Zero when the corresponding magnitude product vanishes.
struct InterferenceCosines {
    double c_ix = 0.0;
    double c_yz = 0.0;
};

InterferenceCosines interference_cosines(const KrausCoefficients& element) noexcept;

/// Merges two elements into one with the same summed magnitudes and summed
/// check-state weights, so rates_of(result) == rates_from_ensemble({s1, s2}).
KrausCoefficients combine_pair(const KrausCoefficients& s1, const KrausCoefficients& s2);

/// Same as combine_pair but also reports the cosines used for the merged element.
KrausCoefficients combine_pair(const KrausCoefficients& s1, const KrausCoefficients& s2,
                               InterferenceCosines& merged);

/// Left fold of combine_pair over the ensemble.
KrausCoefficients reduce_ensemble(std::span<const KrausCoefficients> ensemble);

/// Region filter for random_attack.
enum class AttackRegion { any, bounded_rates };

/// Deterministic random element with unit total weight. With
/// AttackRegion::bounded_rates, rejection-samples until e_b <= 1/2 and alpha <= 1/2.
KrausCoefficients random_attack(std::uint64_t seed, AttackRegion region = AttackRegion::any);

/// "re,im,re,im,re,im,re,im" in the order a_I, a_X, a_Y, a_Z.
KrausCoefficients parse_attack(std::string_view text);
std::string format_attack(const KrausCoefficients& element);

}  // namespace qkd3
