#pragma once

#include <optional>
#include <string>

#include "copcal/descriptor.hpp"

namespace copcal {

enum class NormScheme { ExactShuffle, ClosedForm, Grid };

struct NormReport {
    double norm_sq = 0.0;
    NormScheme scheme = NormScheme::Grid;
    int grid_n = 0;  // 0 when no discretization was involved
    bool bounds_ok = true;  // 2/3 - 1e-6 <= norm_sq <= 1 + 1e-6

    std::string scheme_name() const;
};

/// ||C||^2 = int int (d1C^2 + d2C^2).  Shuffles give exactly 1, Pi exactly
/// 2/3, parametric families and complete dependence maps their closed forms;
/// everything else is the exact norm of the checkerboard at resolution n.
NormReport sobolev_norm_sq(const CopulaDescriptor& d, int n = 256);

/// Forces the grid scheme: exact checkerboard norm of to_grid(d, n).
double grid_norm_sq(const CopulaDescriptor& d, int n);

/// ||A - B||^2 = int int |grad(A - B)|^2.  For two shuffles this is the
/// exact two-sided identity ||f1-f2||_L1 + ||f1^-1 - f2^-1||_L1; exact inner
/// products are used where available, otherwise a common grid.
double sobolev_dist_sq(const CopulaDescriptor& a, const CopulaDescriptor& b,
                       int n = 256);

/// The two one-sided L1 distances between support graphs, both exact.
struct GraphL1 {
    double forward = 0.0;  // int |f1 - f2|
    double inverse = 0.0;  // int |f1^-1 - f2^-1|
    double bound() const { return forward > inverse ? forward : inverse; }
};

GraphL1 graph_l1_sides(const IntervalExchange& f1, const IntervalExchange& f2);

/// max of the two one-sided graph distances; 2 * this certifies
/// ||C1 - C2||^2 for the shuffles supported on f1 and f2.
double graph_l1_distance(const IntervalExchange& f1,
                         const IntervalExchange& f2);

/// Gradient inner product int int (d1A d1B + d2A d2B) when available in
/// closed form (either operand Pi gives 2/3 for any copula; shuffle pairs by
/// exact geometry; convex combinations distribute).
std::optional<double> exact_gradient_inner(const CopulaDescriptor& a,
                                           const CopulaDescriptor& b);

}  // namespace copcal
