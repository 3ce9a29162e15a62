#include "qkd3/epbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qkd3/errors.hpp"
#include "qkd3/numeric.hpp"

namespace qkd3 {

namespace {

constexpr Amplitude kI{0.0, 1.0};
constexpr double kCap = 0.5;
constexpr int kScanPoints = 10'000;
constexpr double kAyTolerance = 1e-9;
// Radicands this close to zero are rounding noise on a double root.
constexpr double kRadicandSlack = 1e-12;

void check_region(double e_b, double alpha) {
    if (!(e_b >= 0.0 && e_b <= 0.5) || !(alpha >= 0.0 && alpha <= 0.5))
        throw DomainError("bound needs e_b, alpha in [0, 1/2]; got e_b=" + std::to_string(e_b) +
                          ", alpha=" + std::to_string(alpha));
}

double safe_sqrt(double x) noexcept { return std::sqrt(std::max(x, 0.0)); }

// Builds a Kraus element with the given magnitudes whose check-state odds
// |a_I + a_X|^2 / |i a_Y - a_Z|^2 equal alpha_hat. The magnitudes must admit
// such phases: (I-X)^2 <= alpha_hat (Y+Z)^2 and (I+X)^2 >= alpha_hat (Z-Y)^2.
KrausCoefficients realize(double mag_i, double mag_x, double mag_y, double mag_z,
                          double alpha_hat) {
    const double pass_sq =
        std::max((mag_i - mag_x) * (mag_i - mag_x), alpha_hat * (mag_y - mag_z) * (mag_y - mag_z));
    const double fail_sq = pass_sq / alpha_hat;

    double cos_ix = 1.0;
    if (mag_i * mag_x > 0.0)
        cos_ix = std::clamp((pass_sq - mag_i * mag_i - mag_x * mag_x) / (2.0 * mag_i * mag_x),
                            -1.0, 1.0);
    double cos_yz = 1.0;
    if (mag_y * mag_z > 0.0)
        cos_yz = std::clamp((mag_y * mag_y + mag_z * mag_z - fail_sq) / (2.0 * mag_y * mag_z),
                            -1.0, 1.0);

    KrausCoefficients k;
    k.a_i = std::polar(mag_i, std::acos(cos_ix));
    k.a_x = mag_x;
    k.a_y = std::polar(mag_y, std::acos(cos_yz));
    k.a_z = kI * mag_z;
    return k;
}

BoundResult limiting_bound(double e_b, double alpha) {
    BoundResult r;
    r.method = BoundMethod::limiting;
    if (e_b == 0.0 && alpha == 0.0) {
        r.witness.a_i = 1.0;
        return r;
    }
    if (e_b == 0.0) {
        // a_X = a_Y = 0 forces e_p = alpha.
        r.ep_max = r.ep_uncapped = alpha;
        r.witness.a_i = std::sqrt(1.0 - alpha);
        r.witness.a_z = kI * std::sqrt(alpha);
        return r;
    }
    // alpha = 0 forces a_Z = i a_Y, so e_p = 2|a_Y|^2 / total <= 2 e_b.
    r.ep_uncapped = 2.0 * e_b;
    r.ay_star = 1.0;
    r.witness.a_y = 1.0;
    r.witness.a_z = kI;
    if (r.ep_uncapped <= kCap) {
        r.ep_max = r.ep_uncapped;
        r.witness.a_i = std::sqrt(1.0 / e_b - 2.0);
    } else {
        // total weight 4 with |a_Y|^2 = 1 gives e_p = 1/2 exactly.
        r.ep_max = kCap;
        r.witness.a_i = std::sqrt(3.0 - 4.0 * e_b);
        r.witness.a_x = std::sqrt(4.0 * e_b - 1.0);
    }
    return r;
}

// Boundary attack of the (++-) branch at |a_Y| = ay.
KrausCoefficients branch_witness(double ay, double az, const HatParams& h) {
    return realize(safe_sqrt(h.eb_hat - az * az), safe_sqrt(1.0 - ay * ay), ay, az, h.alpha_hat);
}

// A feasible single element with e_p exactly 1/2, used when the uncapped
// maximum exceeds the cap. Walks the path
//   (|a_Y| = 0, |a_Z| from its smallest feasible value up to the branch)
//   -> along the branch to ay_star,
// on which e_p is continuous and starts below 1/2.
KrausCoefficients half_witness(double e_b, double ay_star, const HatParams& h) {
    const double edge = branch_objective(0.0, e_b, h).value_or(0.0);
    if (edge >= kCap) {
        const double az = std::sqrt(kCap / e_b);
        return realize(safe_sqrt(h.eb_hat - az * az), 1.0, 0.0, az, h.alpha_hat);
    }
    auto below_half = [&](double ay) {
        return branch_objective(ay, e_b, h).value_or(0.0) < kCap;
    };
    const double ay = numeric::bisect_last_true(below_half, 0.0, ay_star, 1e-15);
    return branch_witness(ay, az_branch(ay, h).value(), h);
}

}  // namespace

const char* to_string(BoundMethod m) noexcept {
    switch (m) {
        case BoundMethod::exact: return "exact";
        case BoundMethod::approximate: return "approximate";
        case BoundMethod::simple: return "simple";
        case BoundMethod::limiting: return "limiting";
    }
    return "?";
}

HatParams HatParams::from_rates(double e_b, double alpha) {
    if (!(e_b > 0.0 && e_b <= 0.5) || !(alpha > 0.0 && alpha <= 0.5))
        throw DomainError("odds ratios need e_b, alpha in (0, 1/2]");
    return {(1.0 - e_b) / e_b, (1.0 - alpha) / alpha};
}

std::optional<double> az_branch(double ay, const HatParams& h) noexcept {
    const double a = h.alpha_hat;
    const double root = std::sqrt(a * (1.0 - ay * ay));
    double radicand = -1.0 + h.eb_hat * (1.0 + a) - ay * ay * (a - 1.0) - 2.0 * ay * root;
    if (radicand < 0.0) {
        if (radicand < -kRadicandSlack) return std::nullopt;
        radicand = 0.0;
    }
    const double az = (a * ay + root + std::sqrt(radicand)) / (1.0 + a);
    if (az * az > h.eb_hat * (1.0 + 1e-12)) return std::nullopt;
    return az;
}

std::optional<double> branch_objective(double ay, double e_b, const HatParams& h) noexcept {
    const auto az = az_branch(ay, h);
    if (!az) return std::nullopt;
    return (*az * *az + ay * ay) * e_b;
}

BoundResult exact_bound(double e_b, double alpha) {
    check_region(e_b, alpha);
    if (e_b == 0.0 || alpha == 0.0) return limiting_bound(e_b, alpha);

    const HatParams h = HatParams::from_rates(e_b, alpha);
    constexpr double kInfeasible = -std::numeric_limits<double>::infinity();
    auto objective = [&](double ay) { return branch_objective(ay, e_b, h).value_or(kInfeasible); };

    int best = -1;
    double best_value = kInfeasible;
    for (int k = 0; k < kScanPoints; ++k) {
        const double v = objective(static_cast<double>(k) / (kScanPoints - 1));
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    if (best < 0) throw DomainError("exact bound: no feasible |a_Y|");

    double ay_star = static_cast<double>(best) / (kScanPoints - 1);
    const double lo = static_cast<double>(std::max(best - 1, 0)) / (kScanPoints - 1);
    const double hi = static_cast<double>(std::min(best + 1, kScanPoints - 1)) / (kScanPoints - 1);
    const auto [refined_ay, refined_value] = numeric::golden_maximize(objective, lo, hi, kAyTolerance);
    if (refined_value > best_value) {
        ay_star = refined_ay;
        best_value = refined_value;
    }

    BoundResult r;
    r.method = BoundMethod::exact;
    r.ay_star = ay_star;
    r.ep_uncapped = best_value;
    if (best_value <= kCap) {
        r.ep_max = best_value;
        r.witness = branch_witness(ay_star, az_branch(ay_star, h).value(), h);
    } else {
        r.ep_max = kCap;
        r.witness = half_witness(e_b, ay_star, h);
    }
    return r;
}

double approx_bound_uncapped(double e_b, double alpha) {
    check_region(e_b, alpha);
    return alpha + e_b * (2.0 - 2.0 * alpha - alpha * alpha) +
           2.0 * std::sqrt(alpha * (1.0 - alpha) * e_b * (1.0 - e_b - e_b * alpha));
}

double approx_bound(double e_b, double alpha) {
    return std::min(approx_bound_uncapped(e_b, alpha), kCap);
}

double simple_bound(double e_b, double alpha) {
    check_region(e_b, alpha);
    return alpha + 2.0 * e_b + 2.0 * std::sqrt(e_b * alpha);
}

double phase_error_bound(double e_b, double alpha, BoundMethod method) {
    switch (method) {
        case BoundMethod::exact:
        case BoundMethod::limiting: return exact_bound(e_b, alpha).ep_max;
        case BoundMethod::approximate: return approx_bound(e_b, alpha);
        case BoundMethod::simple: return std::min(simple_bound(e_b, alpha), kCap);
    }
    return kCap;
}

}  // namespace qkd3
