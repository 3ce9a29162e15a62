#pragma once

// Upper bounds on the phase error rate e_p given the observed Z-basis bit
// error rate e_b and the |+> check-state error rate alpha.
//
// All bounds are defined on the region e_b, alpha in [0, 1/2].

#include <optional>

#include "qkd3/attack_model.hpp"

namespace qkd3 {

enum class BoundMethod { exact, approximate, simple, limiting };

const char* to_string(BoundMethod m) noexcept;

/// Odds ratios (1 - e_b)/e_b and (1 - alpha)/alpha.
struct HatParams {
    double eb_hat = 1.0;
    double alpha_hat = 1.0;

    /// Requires e_b, alpha in (0, 1/2]; throws DomainError otherwise.
    static HatParams from_rates(double e_b, double alpha);
};

struct BoundResult {
    double ep_max = 0.0;       ///< reported bound, capped at 1/2
    double ep_uncapped = 0.0;  ///< maximum before the cap
    double ay_star = 0.0;      ///< maximizing |a_Y|
    KrausCoefficients witness; ///< attack with rates (e_b, alpha, ep_max)
    BoundMethod method = BoundMethod::exact;
};

/// (++-) root of the constraint quartic: largest |a_Z| compatible with
/// |a_Y| = ay. nullopt when the inner radicand is negative or |a_Z|^2 > eb_hat.
std::optional<double> az_branch(double ay, const HatParams& h) noexcept;

/// Objective (|a_Z|^2 + ay^2) e_b along the (++-) branch; nullopt if infeasible.
std::optional<double> branch_objective(double ay, double e_b, const HatParams& h) noexcept;

/// Exact bound by 1-D maximization over |a_Y| (grid scan + golden refinement).
BoundResult exact_bound(double e_b, double alpha);

/// Closed-form relaxation of the exact problem, capped at 1/2.
double approx_bound(double e_b, double alpha);
double approx_bound_uncapped(double e_b, double alpha);

/// alpha + 2 e_b + 2 sqrt(e_b alpha); equals 5 e_b on the diagonal.
double simple_bound(double e_b, double alpha);

/// Dispatches on method (exact, approximate, simple); result capped at 1/2.
double phase_error_bound(double e_b, double alpha, BoundMethod method);

}  // namespace qkd3
