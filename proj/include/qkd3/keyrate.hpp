#pragma once

// Single-photon key rates R = 1 - H2(e_b) - H2(e_p) and the secure region
// they define in the (e_b, alpha) plane.

#include <vector>

#include "qkd3/epbound.hpp"

namespace qkd3 {

/// H2(x) = -x log2 x - (1-x) log2 (1-x), with H2(0) = H2(1) = 0.
double binary_entropy(double x);

struct KeyRatePoint {
    double e_b = 0.0;
    double alpha = 0.0;
    double e_p_used = 0.0;
    double rate = 0.0;  ///< bits of key per sifted bit; negative means no key
};

/// method is exact or approximate.
KeyRatePoint key_rate_single_photon(double e_b, double alpha, BoundMethod method);

/// Largest e_b with a nonnegative rate at the given alpha (absolute tolerance 1e-6).
double tolerable_eb(double alpha, BoundMethod method);

/// Threshold on the diagonal e_b = alpha. approximate uses e_p = 5 e_b,
/// exact uses exact_bound(e, e).
double tolerable_eb_diagonal(BoundMethod method);

/// Threshold of 1 - 2 H2(e) = 0 (BB84, e_p = e_b).
double bb84_tolerable_eb();

struct FrontierPoint {
    double alpha = 0.0;
    double eb_max = 0.0;
};

/// alpha_steps uniformly spaced values of alpha over [0, 1/2], inclusive.
std::vector<FrontierPoint> secure_region_frontier(int alpha_steps, BoundMethod method);

}  // namespace qkd3
