#pragma once

#include <vector>

#include "copcal/descriptor.hpp"
#include "copcal/interval_exchange.hpp"
#include "copcal/piecewise_affine.hpp"

namespace copcal {

/// Disjoint ordered intervals within [0,1]; degenerate intervals are dropped
/// and overlapping ones merged.
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<Interval> parts);

    const std::vector<Interval>& parts() const { return parts_; }
    double measure() const;
    bool empty() const { return parts_.empty(); }

private:
    std::vector<Interval> parts_;
};

/// The sorting shuffle s_A: on A, x -> m([0,x] cap A); off A,
/// x -> m(A) + m([0,x] \ A).  Measure-preserving with slope +1 on every
/// piece; maps A onto [0, m(A)) preserving order within A and within its
/// complement.
IntervalExchange sorting_shuffle(const IntervalUnion& a);

/// One diagonalization step: the shuffle applied and the exact (or grid)
/// squared norm of the working copula afterwards.
struct DiagonalizationStep {
    IntervalExchange shuffle;
    double norm_sq_after = 0.0;
};

struct DiagonalizationTrace {
    double initial_norm_sq = 0.0;
    std::vector<DiagonalizationStep> steps;
    IntervalExchange composed = IntervalExchange::identity();  // B_n = S_n*...*S_1
    bool grid_scheme = false;  // norms computed on a grid rather than exactly
};

/// Builds S_1..S_depth so that the support of B_k * C concentrates in the
/// 2^k diagonal squares: within each block, A is the preimage of the block's
/// lower half under the conditional support map and the blockwise sorting
/// shuffle is applied.  Inputs: shuffles and complete dependence maps run the
/// exact piece-geometry path; grids (and anything convertible) run at cell
/// granularity with the median-cell split.
DiagonalizationTrace diagonalize(const CopulaDescriptor& c, int depth,
                                 int n = 256);

/// Mirror of diagonalize for right-invertible inputs: diagonalizes the
/// transpose and transposes the witnesses, so that ||C * composed^T|| grows.
DiagonalizationTrace right_diagonalize(const CopulaDescriptor& c, int depth,
                                       int n = 256);

struct ShuffleApprox {
    IntervalExchange shuffle;
    double dist_sq = 0.0;       // certified bound (shuffle input) or exact
                                // grid distance (grid input)
    bool extracted_from_grid = false;
};

/// Approximates a unit-norm copula by a straight shuffle of Min with `bins`
/// image bins: preimages E_k = f^{-1}([k/bins,(k+1)/bins)) are mapped in
/// order onto their bins with slope +1.  For shuffle inputs the returned
/// dist_sq is the certified bound 2*graph_l1_distance(f, f_bins); grid
/// inputs use the cell-argmax extraction and report the exact grid distance.
/// Inputs whose norm^2 falls below 1 - eps are rejected.
ShuffleApprox approx_by_shuffles(const CopulaDescriptor& c, int bins,
                                 int n = 256, double eps = 0.05);

/// The dyadic self-similar shuffle sequence: S_0 is the identity and S_L is
/// obtained from S_{L-1} by horizontally flipping the support inside each of
/// the 2^L stripes of width 2^-(L+1) (the odd dyadic cells at that scale).
/// All breakpoints are dyadic rationals, exact in double precision; levels up
/// to 16 are supported.
IntervalExchange selfsimilar(int level);

}  // namespace copcal
