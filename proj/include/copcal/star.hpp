#pragma once

#include <string>

#include "copcal/descriptor.hpp"

namespace copcal {

enum class Side { Left, Right };

/// Result of a Markov product.  `exact` is set when the result was computed
/// without discretization (shuffle compositions, complete dependence
/// compositions, push-forwards of grids, and the monoid identities for M and
/// Pi); otherwise the result lives on a grid of resolution `grid_n`.
struct StarResult {
    CopulaDescriptor copula;
    bool exact = false;
    int grid_n = 0;
    std::string provenance;
};

/// C*D(x,y) = int_0^1 d2C(x,t) d1D(t,y) dt on any representation pair.
/// `n` is the fallback grid resolution used when an operand must be
/// discretized.  Throws on a resolution mismatch between two grids.
StarResult star(const CopulaDescriptor& a, const CopulaDescriptor& b,
                int n = 256);

/// Coordinate swap C^T(x,y) = C(y,x).
CopulaDescriptor transpose(const CopulaDescriptor& d);

/// The T-shuffle of d: star(shuffle, d) on the left or star(d, shuffle) on
/// the right; realizes the push-forward mu = S_T * mu_d.
StarResult shuffle_of(const CopulaDescriptor& d, const IntervalExchange& t,
                      Side side, int n = 256);

}  // namespace copcal
