#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace copcal {

/// One affine piece of an interval exchange: maps [src_lo, src_hi) onto the
/// image interval [target, target + (src_hi - src_lo)).  With slope +1 the
/// piece is x -> target + (x - src_lo); with slope -1 it is
/// x -> target + (src_hi - x), i.e. the image interval is traversed backwards.
struct ExchangePiece {
    double src_lo = 0.0;
    double src_hi = 0.0;
    double target = 0.0;
    int slope = +1;  // +1 or -1

    double length() const { return src_hi - src_lo; }
    double image_lo() const { return target; }
    double image_hi() const { return target + length(); }
};

/// A segment of a support graph, oriented in increasing x.
struct SupportSegment {
    double x0, y0, x1, y1;
};

/// Exact piecewise-affine measure-preserving bijection of [0,1] with slopes
/// +-1.  The graph of such a map is the support of a shuffle of Min; all
/// geometric quantities (CDF, L1 graph distances, compositions) are computed
/// exactly from the piece structure, never by discretization.
class IntervalExchange {
public:
    /// Builds the map from pieces.  Pieces are sorted by source interval;
    /// throws std::invalid_argument if the sources do not tile [0,1], the
    /// images do not tile [0,1], or a slope is not +-1.
    explicit IntervalExchange(std::vector<ExchangePiece> pieces);

    static IntervalExchange identity();
    /// x -> x + c (mod 1).  rotation(0.5) is the half-swap; rotation(1 - a)
    /// is the straight shuffle with support on the diagonals of
    /// [0,a]x[1-a,1] and [a,1]x[0,1-a].
    static IntervalExchange rotation(double c);
    /// x -> 1 - x, the copula W.
    static IntervalExchange reflection();

    const std::vector<ExchangePiece>& pieces() const { return pieces_; }
    std::size_t piece_count() const { return pieces_.size(); }

    /// f(x); at internal breakpoints returns the right-piece value.
    double operator()(double x) const;
    /// Left limit f(x-) for x in (0,1]; left_limit(0) == f(0).
    double left_limit(double x) const;

    IntervalExchange inverse() const;
    /// Composition as maps: result(x) = (*this)(inner(x)).
    IntervalExchange compose_after(const IntervalExchange& inner) const;

    /// Shuffle-of-Min CDF: C(x,y) = m({ t <= x : f(t) <= y }).  Exact.
    double cdf(double x, double y) const;

    /// Support graph as oriented segments (one per piece), total horizontal
    /// length 1.
    std::vector<SupportSegment> support_segments() const;

    /// Structural checks beyond construction (tiling of source and image,
    /// slope values, measure preservation); appends human-readable failures.
    bool check(double tol, std::vector<std::string>* failures = nullptr) const;

    bool operator==(const IntervalExchange& other) const;

private:
    std::vector<ExchangePiece> pieces_;  // sorted by src_lo, tiling [0,1]

    std::size_t locate(double x) const;
};

/// Exact integral of |f1 - f2| over [0,1].
double l1_between(const IntervalExchange& f1, const IntervalExchange& f2);

/// Exact integral of (1 - max(f1, f2)) over [0,1]; this is
/// int int d1C1 * d1C2 for the shuffles supported on f1 and f2.
double integral_one_minus_max(const IntervalExchange& f1,
                              const IntervalExchange& f2);

}  // namespace copcal
