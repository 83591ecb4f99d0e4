#include "copcal/interval_exchange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace copcal {

namespace {

constexpr double kTileTol = 1e-12;

double piece_value(const ExchangePiece& p, double x) {
    return p.slope > 0 ? p.target + (x - p.src_lo) : p.target + (p.src_hi - x);
}

}  // namespace

IntervalExchange::IntervalExchange(std::vector<ExchangePiece> pieces)
    : pieces_(std::move(pieces)) {
    // Drop degenerate pieces, sort by source.
    pieces_.erase(std::remove_if(pieces_.begin(), pieces_.end(),
                                 [](const ExchangePiece& p) {
                                     return p.length() <= 0.0;
                                 }),
                  pieces_.end());
    std::sort(pieces_.begin(), pieces_.end(),
              [](const ExchangePiece& a, const ExchangePiece& b) {
                  return a.src_lo < b.src_lo;
              });
    // Merge adjacent pieces that continue the same affine branch, so
    // compositions come out in canonical form.
    std::vector<ExchangePiece> merged;
    for (const auto& p : pieces_) {
        if (!merged.empty()) {
            ExchangePiece& q = merged.back();
            if (q.src_hi == p.src_lo && q.slope == p.slope) {
                if (p.slope > 0 && p.target == q.image_hi()) {
                    q.src_hi = p.src_hi;
                    continue;
                }
                if (p.slope < 0 && q.target == p.image_hi()) {
                    q.src_hi = p.src_hi;
                    q.target = p.target;
                    continue;
                }
            }
        }
        merged.push_back(p);
    }
    pieces_ = std::move(merged);
    std::vector<std::string> failures;
    if (!check(kTileTol * 1e3, &failures)) {
        std::ostringstream msg;
        msg << "invalid interval exchange:";
        for (const auto& f : failures) msg << " " << f << ";";
        throw std::invalid_argument(msg.str());
    }
}

IntervalExchange IntervalExchange::identity() {
    return IntervalExchange({{0.0, 1.0, 0.0, +1}});
}

IntervalExchange IntervalExchange::rotation(double c) {
    c -= std::floor(c);
    if (c == 0.0) return identity();
    return IntervalExchange({{0.0, 1.0 - c, c, +1}, {1.0 - c, 1.0, 0.0, +1}});
}

IntervalExchange IntervalExchange::reflection() {
    return IntervalExchange({{0.0, 1.0, 0.0, -1}});
}

std::size_t IntervalExchange::locate(double x) const {
    // Rightmost piece with src_lo <= x; x == 1 falls in the last piece.
    auto it = std::upper_bound(
        pieces_.begin(), pieces_.end(), x,
        [](double v, const ExchangePiece& p) { return v < p.src_lo; });
    if (it == pieces_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
}

double IntervalExchange::operator()(double x) const {
    const ExchangePiece& p = pieces_[locate(x)];
    return piece_value(p, x);
}

double IntervalExchange::left_limit(double x) const {
    if (x <= pieces_.front().src_lo) return (*this)(x);
    std::size_t i = locate(x);
    if (x == pieces_[i].src_lo) i--;  // boundary: take the piece on the left
    return piece_value(pieces_[i], x);
}

IntervalExchange IntervalExchange::inverse() const {
    std::vector<ExchangePiece> inv;
    inv.reserve(pieces_.size());
    for (const auto& p : pieces_) {
        if (p.slope > 0) {
            inv.push_back({p.image_lo(), p.image_hi(), p.src_lo, +1});
        } else {
            // f(x) = target + (src_hi - x): inverse y -> src_hi - (y - target),
            // mapping [target, target+len) onto (src_lo, src_hi] reversed.
            inv.push_back({p.image_lo(), p.image_hi(), p.src_lo, -1});
        }
    }
    return IntervalExchange(std::move(inv));
}

IntervalExchange IntervalExchange::compose_after(
    const IntervalExchange& inner) const {
    // result(x) = outer(inner(x)): split each inner piece by the outer source
    // breakpoints intersected with the inner piece's image.
    std::vector<ExchangePiece> out;
    for (const auto& q : inner.pieces_) {
        const double ilo = q.image_lo(), ihi = q.image_hi();
        for (const auto& p : pieces_) {
            const double lo = std::max(ilo, p.src_lo);
            const double hi = std::min(ihi, p.src_hi);
            if (hi - lo <= kTileTol) continue;
            // source subinterval of q mapping onto [lo,hi)
            double slo, shi;
            if (q.slope > 0) {
                slo = q.src_lo + (lo - ilo);
                shi = q.src_lo + (hi - ilo);
            } else {
                slo = q.src_lo + (ihi - hi);
                shi = q.src_lo + (ihi - lo);
            }
            const int slope = p.slope * q.slope;
            // image of [lo,hi) under p
            double tlo;
            if (p.slope > 0) {
                tlo = p.target + (lo - p.src_lo);
            } else {
                tlo = p.target + (p.src_hi - hi);
            }
            out.push_back({slo, shi, tlo, slope});
        }
    }
    return IntervalExchange(std::move(out));
}

double IntervalExchange::cdf(double x, double y) const {
    // m({t <= x : f(t) <= y}) by exact piece geometry.
    double total = 0.0;
    for (const auto& p : pieces_) {
        if (p.src_lo >= x) break;
        const double hi = std::min(x, p.src_hi);
        double lo, cut;
        if (p.slope > 0) {
            // f(t) <= y  <=>  t <= src_lo + (y - target)
            cut = p.src_lo + (y - p.target);
            lo = p.src_lo;
            total += std::max(0.0, std::min(hi, cut) - lo);
        } else {
            // f(t) <= y  <=>  t >= src_hi - (y - target)
            cut = p.src_hi - (y - p.target);
            lo = std::max(p.src_lo, cut);
            total += std::max(0.0, hi - lo);
        }
    }
    return total;
}

std::vector<SupportSegment> IntervalExchange::support_segments() const {
    std::vector<SupportSegment> segs;
    segs.reserve(pieces_.size());
    for (const auto& p : pieces_) {
        if (p.slope > 0) {
            segs.push_back({p.src_lo, p.image_lo(), p.src_hi, p.image_hi()});
        } else {
            segs.push_back({p.src_lo, p.image_hi(), p.src_hi, p.image_lo()});
        }
    }
    return segs;
}

bool IntervalExchange::check(double tol,
                             std::vector<std::string>* failures) const {
    bool ok = true;
    auto fail = [&](const std::string& s) {
        ok = false;
        if (failures) failures->push_back(s);
    };
    if (pieces_.empty()) {
        fail("no pieces");
        return false;
    }
    for (const auto& p : pieces_) {
        if (p.slope != 1 && p.slope != -1) fail("slope not +-1");
        if (p.length() <= 0.0) fail("empty piece");
    }
    // Source tiling of [0,1].
    if (std::abs(pieces_.front().src_lo) > tol) fail("source does not start at 0");
    if (std::abs(pieces_.back().src_hi - 1.0) > tol) fail("source does not end at 1");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (std::abs(pieces_[i].src_hi - pieces_[i + 1].src_lo) > tol) {
            fail("source gap/overlap at piece " + std::to_string(i));
        }
    }
    // Image tiling of [0,1] (bijectivity + measure preservation for
    // slope +-1 pieces).
    std::vector<std::pair<double, double>> images;
    images.reserve(pieces_.size());
    for (const auto& p : pieces_) images.emplace_back(p.image_lo(), p.image_hi());
    std::sort(images.begin(), images.end());
    if (std::abs(images.front().first) > tol) fail("image does not start at 0");
    if (std::abs(images.back().second - 1.0) > tol) fail("image does not end at 1");
    for (std::size_t i = 0; i + 1 < images.size(); ++i) {
        if (std::abs(images[i].second - images[i + 1].first) > tol) {
            fail("image gap/overlap near " + std::to_string(images[i].second));
        }
    }
    return ok;
}

bool IntervalExchange::operator==(const IntervalExchange& other) const {
    if (pieces_.size() != other.pieces_.size()) return false;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& a = pieces_[i];
        const auto& b = other.pieces_[i];
        if (a.src_lo != b.src_lo || a.src_hi != b.src_hi ||
            a.target != b.target || a.slope != b.slope)
            return false;
    }
    return true;
}

namespace {

// Merged breakpoints of two exchanges.
std::vector<double> merged_breaks(const IntervalExchange& f1,
                                  const IntervalExchange& f2) {
    std::vector<double> cuts;
    for (const auto& p : f1.pieces()) {
        cuts.push_back(p.src_lo);
        cuts.push_back(p.src_hi);
    }
    for (const auto& p : f2.pieces()) {
        cuts.push_back(p.src_lo);
        cuts.push_back(p.src_hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

// Integrates g(x) = a + b*x piecewise over [lo,hi] given endpoint values.
double trapezoid(double lo, double hi, double vlo, double vhi) {
    return 0.5 * (vlo + vhi) * (hi - lo);
}

}  // namespace

double l1_between(const IntervalExchange& f1, const IntervalExchange& f2) {
    // On each merged piece, d(x) = f1(x) - f2(x) is affine with slope in
    // {-2, 0, 2}; split at the sign change if any and integrate exactly.
    const auto cuts = merged_breaks(f1, f2);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 0.0) continue;
        const double dlo = f1(lo) - f2(lo);
        const double dhi = f1.left_limit(hi) - f2.left_limit(hi);
        if ((dlo >= 0 && dhi >= 0) || (dlo <= 0 && dhi <= 0)) {
            total += std::abs(trapezoid(lo, hi, dlo, dhi));
        } else {
            // One sign change: d is affine, root at lo + dlo*(hi-lo)/(dlo-dhi)
            const double root = lo + dlo * (hi - lo) / (dlo - dhi);
            total += std::abs(trapezoid(lo, root, dlo, 0.0));
            total += std::abs(trapezoid(root, hi, 0.0, dhi));
        }
    }
    return total;
}

double integral_one_minus_max(const IntervalExchange& f1,
                              const IntervalExchange& f2) {
    const auto cuts = merged_breaks(f1, f2);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 0.0) continue;
        const double d_lo = f1(lo) - f2(lo);
        const double d_hi = f1.left_limit(hi) - f2.left_limit(hi);
        auto seg = [&](double a, double b, double v1lo, double v1hi,
                       double v2lo, double v2hi) {
            const double mlo = std::max(v1lo, v2lo);
            const double mhi = std::max(v1hi, v2hi);
            total += trapezoid(a, b, 1.0 - mlo, 1.0 - mhi);
        };
        const double f1lo = f1(lo), f2lo = f2(lo);
        const double f1hi = f1.left_limit(hi), f2hi = f2.left_limit(hi);
        if ((d_lo >= 0) == (d_hi >= 0)) {
            seg(lo, hi, f1lo, f1hi, f2lo, f2hi);
        } else {
            const double root = lo + d_lo * (hi - lo) / (d_lo - d_hi);
            const double f1r = f1lo + (f1hi - f1lo) * (root - lo) / (hi - lo);
            const double f2r = f2lo + (f2hi - f2lo) * (root - lo) / (hi - lo);
            seg(lo, root, f1lo, f1r, f2lo, f2r);
            seg(root, hi, f1r, f1hi, f2r, f2hi);
        }
    }
    return total;
}

}  // namespace copcal
