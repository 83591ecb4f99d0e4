#pragma once

#include <string>
#include <vector>

#include "copcal/interval_exchange.hpp"

namespace copcal {

/// Closed interval within [0,1].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// One affine piece t -> slope*t + intercept on [src_lo, src_hi).
struct AffinePiece {
    double src_lo = 0.0;
    double src_hi = 0.0;
    double slope = 1.0;  // any nonzero real
    double intercept = 0.0;

    double length() const { return src_hi - src_lo; }
    double value(double t) const { return slope * t + intercept; }
    double image_lo() const {
        return slope > 0 ? value(src_lo) : value(src_hi);
    }
    double image_hi() const {
        return slope > 0 ? value(src_hi) : value(src_lo);
    }
};

/// Exact piecewise-affine map [0,1] -> [0,1], possibly non-injective (e.g.
/// t -> 2t mod 1).  When measure-preserving, its graph supports a complete
/// dependence copula C(x,y) = m({t <= x : h(t) <= y}).
class PiecewiseAffineMap {
public:
    explicit PiecewiseAffineMap(std::vector<AffinePiece> pieces);
    explicit PiecewiseAffineMap(const IntervalExchange& s);

    /// t -> k*t mod 1 (k >= 1); mod_map(2) is the doubling map.
    static PiecewiseAffineMap mod_map(int k);
    /// The tent map t -> 2t on [0,1/2), 2-2t on [1/2,1].
    static PiecewiseAffineMap tent();

    const std::vector<AffinePiece>& pieces() const { return pieces_; }

    double operator()(double t) const;

    /// Preimage of [lo,hi] as a finite union of intervals, sorted.
    std::vector<Interval> preimage(double lo, double hi) const;

    /// Measure-preserving criterion: for a.e. y, sum of 1/|slope| over the
    /// pieces whose image covers y equals 1.  Checked on every elementary
    /// image interval.
    bool measure_preserving(double tol,
                            std::vector<std::string>* failures = nullptr) const;

    /// h o s for an interval exchange s (exact).
    PiecewiseAffineMap compose_after(const IntervalExchange& s) const;
    /// s o h (exact).
    PiecewiseAffineMap compose_before(const IntervalExchange& s) const;

    /// True when every slope is +-1 and the map is a bijection; such a map
    /// converts losslessly to an IntervalExchange.
    bool is_interval_exchange() const;
    IntervalExchange as_interval_exchange() const;

private:
    std::vector<AffinePiece> pieces_;  // sorted, tiling [0,1]
};

/// CDF of the complete dependence copula supported on the graph of h:
/// C(x,y) = m({t <= x : h(t) <= y}).  Exact.
double cd_cdf(const PiecewiseAffineMap& h, double x, double y);

/// d2 of the complete dependence copula at (x,y): the branch sum
/// sum over {t <= x : h(t) = y} of 1/|h'(t)| (a.e. value).
double cd_partial2(const PiecewiseAffineMap& h, double x, double y);

/// Exact squared Sobolev norm of the complete dependence copula of h:
/// int int d1C^2 = int (1 - h) and int int d2C^2 integrated in closed form
/// from the branch structure.
double cd_norm_sq(const PiecewiseAffineMap& h);

/// Exact cell mass m(I_i cap h^{-1}(J_j)) of the induced measure on an
/// n x n grid, row-major.
std::vector<double> cd_cell_mass(const PiecewiseAffineMap& h, int n);

}  // namespace copcal
