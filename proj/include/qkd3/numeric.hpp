#pragma once

// Small 1-D search routines shared by the bound and rate modules.

#include <cmath>
#include <utility>

namespace qkd3::numeric {

/// Golden-section search for a maximum of a unimodal f on [lo, hi].
/// Returns (argmax, f(argmax)).
template <class F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    const double x = fc >= fd ? c : d;
    return {x, fc >= fd ? fc : fd};
}

/// Bisection for the sign change of f on [lo, hi] where pred(f(lo)) holds and
/// pred(f(hi)) does not. Returns the last point where pred holds.
template <class Pred>
double bisect_last_true(Pred&& pred, double lo, double hi, double tol, int max_iter = 200) {
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace qkd3::numeric
