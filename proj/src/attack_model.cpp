#include "qkd3/attack_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qkd3/errors.hpp"
#include "qkd3/philox.hpp"

namespace qkd3 {

namespace {

constexpr Amplitude kI{0.0, 1.0};

constexpr std::uint32_t kAttackStreamTag = 0xA77AC0u;
constexpr int kRejectionBudget = 1'000'000;

double clamp_cos(double c) noexcept { return std::clamp(c, -1.0, 1.0); }

// Merged cosine for one interference pair. `dot_k` is c_k |u_k||v_k|, i.e.
// the pair's interference term; magnitudes enter squared.
double merged_cosine(double dot1, double dot2, double u_sq, double v_sq) noexcept {
    const double denom = std::sqrt(u_sq) * std::sqrt(v_sq);
    if (denom == 0.0) return 0.0;
    return clamp_cos((dot1 + dot2) / denom);
}

}  // namespace

double KrausCoefficients::total_weight() const noexcept {
    return std::norm(a_i) + std::norm(a_x) + std::norm(a_y) + std::norm(a_z);
}

double KrausCoefficients::check_pass_weight() const noexcept { return std::norm(a_i + a_x); }

double KrausCoefficients::check_fail_weight() const noexcept { return std::norm(kI * a_y - a_z); }

void KrausCoefficients::validate() const {
    for (const Amplitude& a : {a_i, a_x, a_y, a_z}) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw DegenerateAttack("Kraus coefficient is not finite");
    }
    if (total_weight() == 0.0) throw DegenerateAttack("all Kraus coefficients are zero");
}

ErrorRates rates_from_ensemble(std::span<const KrausCoefficients> ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("attack ensemble is empty");
    double total = 0.0, bit = 0.0, phase = 0.0, fail = 0.0, pass = 0.0;
    for (const auto& e : ensemble) {
        e.validate();
        total += e.total_weight();
        bit += std::norm(e.a_x) + std::norm(e.a_y);
        phase += std::norm(e.a_z) + std::norm(e.a_y);
        fail += e.check_fail_weight();
        pass += e.check_pass_weight();
    }
    if (total <= 0.0 || fail + pass <= 0.0) throw DegenerateAttack("degenerate attack");
    return {bit / total, fail / (fail + pass), phase / total};
}

ErrorRates rates_of(const KrausCoefficients& element) {
    return rates_from_ensemble(std::span<const KrausCoefficients>(&element, 1));
}

InterferenceCosines interference_cosines(const KrausCoefficients& e) noexcept {
    InterferenceCosines c;
    const double ix = std::abs(e.a_i) * std::abs(e.a_x);
    if (ix > 0.0) c.c_ix = clamp_cos(std::real(e.a_i * std::conj(e.a_x)) / ix);
    const double yz = std::abs(e.a_y) * std::abs(e.a_z);
    if (yz > 0.0) c.c_yz = clamp_cos(std::real(kI * e.a_y * std::conj(e.a_z)) / yz);
    return c;
}

KrausCoefficients combine_pair(const KrausCoefficients& s1, const KrausCoefficients& s2,
                               InterferenceCosines& merged) {
    s1.validate();
    s2.validate();
    const double i_sq = std::norm(s1.a_i) + std::norm(s2.a_i);
    const double x_sq = std::norm(s1.a_x) + std::norm(s2.a_x);
    const double y_sq = std::norm(s1.a_y) + std::norm(s2.a_y);
    const double z_sq = std::norm(s1.a_z) + std::norm(s2.a_z);

    merged.c_ix = merged_cosine(std::real(s1.a_i * std::conj(s1.a_x)),
                                std::real(s2.a_i * std::conj(s2.a_x)), i_sq, x_sq);
    merged.c_yz = merged_cosine(std::real(kI * s1.a_y * std::conj(s1.a_z)),
                                std::real(kI * s2.a_y * std::conj(s2.a_z)), y_sq, z_sq);

    // a_X real, a_I rotated by arccos(c_ix); a_Z real, i a_Y rotated by arccos(c_yz).
    KrausCoefficients out;
    out.a_x = std::sqrt(x_sq);
    out.a_i = std::polar(std::sqrt(i_sq), std::acos(merged.c_ix));
    out.a_z = std::sqrt(z_sq);
    out.a_y = -kI * std::polar(std::sqrt(y_sq), std::acos(merged.c_yz));
    return out;
}

KrausCoefficients combine_pair(const KrausCoefficients& s1, const KrausCoefficients& s2) {
    InterferenceCosines unused;
    return combine_pair(s1, s2, unused);
}

KrausCoefficients reduce_ensemble(std::span<const KrausCoefficients> ensemble) {
    if (ensemble.empty()) throw std::invalid_argument("attack ensemble is empty");
    KrausCoefficients acc = ensemble.front();
    acc.validate();
    for (const auto& e : ensemble.subspan(1)) acc = combine_pair(acc, e);
    return acc;
}

KrausCoefficients random_attack(std::uint64_t seed, AttackRegion region) {
    PhiloxStream rng(seed, kAttackStreamTag);
    auto coord = [&rng] { return 2.0 * rng.next_double() - 1.0; };
    for (int draw = 0; draw < kRejectionBudget; ++draw) {
        KrausCoefficients k;
        k.a_i = {coord(), coord()};
        k.a_x = {coord(), coord()};
        k.a_y = {coord(), coord()};
        k.a_z = {coord(), coord()};
        const double w = k.total_weight();
        if (w == 0.0) continue;
        const double scale = 1.0 / std::sqrt(w);
        k.a_i *= scale;
        k.a_x *= scale;
        k.a_y *= scale;
        k.a_z *= scale;
        if (region == AttackRegion::any) return k;
        if (k.check_fail_weight() + k.check_pass_weight() == 0.0) continue;
        const ErrorRates r = rates_of(k);
        if (r.e_b <= 0.5 && r.alpha <= 0.5) return k;
    }
    throw SamplingError("random_attack: rejection budget exhausted");
}

KrausCoefficients parse_attack(std::string_view text) {
    double v[8];
    std::size_t pos = 0;
    for (int k = 0; k < 8; ++k) {
        const std::size_t end = k < 7 ? text.find(',', pos) : text.size();
        if (end == std::string_view::npos)
            throw ParseError("attack needs 8 comma-separated values");
        std::string field(text.substr(pos, end - pos));
        field.erase(0, field.find_first_not_of(" \t"));
        field.erase(field.find_last_not_of(" \t") + 1);
        const char* first = field.data();
        const char* last = first + field.size();
        if (!field.empty() && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v[k]);
        if (ec != std::errc{} || ptr != last || field.empty())
            throw ParseError("attack field " + std::to_string(k) + " is not a decimal: '" +
                             field + "'");
        pos = end + 1;
    }
    KrausCoefficients out{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
    out.validate();
    return out;
}

std::string format_attack(const KrausCoefficients& e) {
    std::string out;
    char buf[32];
    for (const Amplitude& a : {e.a_i, e.a_x, e.a_y, e.a_z}) {
        for (double part : {a.real(), a.imag()}) {
            if (!out.empty()) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", part);
            out += buf;
        }
    }
    return out;
}

}  // namespace qkd3
