#include "copcal/piecewise_affine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace copcal {

namespace {
constexpr double kTol = 1e-12;
}

PiecewiseAffineMap::PiecewiseAffineMap(std::vector<AffinePiece> pieces)
    : pieces_(std::move(pieces)) {
    pieces_.erase(std::remove_if(pieces_.begin(), pieces_.end(),
                                 [](const AffinePiece& p) {
                                     return p.length() <= 0.0;
                                 }),
                  pieces_.end());
    std::sort(pieces_.begin(), pieces_.end(),
              [](const AffinePiece& a, const AffinePiece& b) {
                  return a.src_lo < b.src_lo;
              });
    if (pieces_.empty()) throw std::invalid_argument("piecewise map: no pieces");
    if (std::abs(pieces_.front().src_lo) > 1e-9 ||
        std::abs(pieces_.back().src_hi - 1.0) > 1e-9)
        throw std::invalid_argument("piecewise map: domain must be [0,1]");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (std::abs(pieces_[i].src_hi - pieces_[i + 1].src_lo) > 1e-9)
            throw std::invalid_argument("piecewise map: source gap/overlap");
    }
    for (const auto& p : pieces_) {
        if (p.slope == 0.0)
            throw std::invalid_argument("piecewise map: zero slope");
        if (p.image_lo() < -1e-9 || p.image_hi() > 1.0 + 1e-9)
            throw std::invalid_argument("piecewise map: image escapes [0,1]");
    }
}

PiecewiseAffineMap::PiecewiseAffineMap(const IntervalExchange& s) {
    for (const auto& p : s.pieces()) {
        if (p.slope > 0) {
            pieces_.push_back({p.src_lo, p.src_hi, 1.0, p.target - p.src_lo});
        } else {
            pieces_.push_back({p.src_lo, p.src_hi, -1.0, p.target + p.src_hi});
        }
    }
}

PiecewiseAffineMap PiecewiseAffineMap::mod_map(int k) {
    if (k < 1) throw std::invalid_argument("mod_map: k must be >= 1");
    std::vector<AffinePiece> ps;
    for (int i = 0; i < k; ++i) {
        ps.push_back({static_cast<double>(i) / k,
                      static_cast<double>(i + 1) / k, static_cast<double>(k),
                      static_cast<double>(-i)});
    }
    return PiecewiseAffineMap(std::move(ps));
}

PiecewiseAffineMap PiecewiseAffineMap::tent() {
    return PiecewiseAffineMap({{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, -2.0, 2.0}});
}

double PiecewiseAffineMap::operator()(double t) const {
    auto it = std::upper_bound(
        pieces_.begin(), pieces_.end(), t,
        [](double v, const AffinePiece& p) { return v < p.src_lo; });
    std::size_t i = (it == pieces_.begin())
                        ? 0
                        : static_cast<std::size_t>(
                              std::distance(pieces_.begin(), it)) -
                              1;
    return pieces_[i].value(t);
}

std::vector<Interval> PiecewiseAffineMap::preimage(double lo, double hi) const {
    std::vector<Interval> out;
    for (const auto& p : pieces_) {
        double t0, t1;
        if (p.slope > 0) {
            t0 = (lo - p.intercept) / p.slope;
            t1 = (hi - p.intercept) / p.slope;
        } else {
            t0 = (hi - p.intercept) / p.slope;
            t1 = (lo - p.intercept) / p.slope;
        }
        t0 = std::max(t0, p.src_lo);
        t1 = std::min(t1, p.src_hi);
        if (t1 - t0 > kTol) out.push_back({t0, t1});
    }
    std::sort(out.begin(), out.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    // merge adjacent
    std::vector<Interval> merged;
    for (const auto& iv : out) {
        if (!merged.empty() && iv.lo <= merged.back().hi + kTol) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

bool PiecewiseAffineMap::measure_preserving(
    double tol, std::vector<std::string>* failures) const {
    std::vector<double> cuts;
    for (const auto& p : pieces_) {
        cuts.push_back(p.image_lo());
        cuts.push_back(p.image_hi());
    }
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= kTol) continue;
        const double y = 0.5 * (cuts[i] + cuts[i + 1]);
        if (y < 0.0 || y > 1.0) continue;
        double cover = 0.0;
        for (const auto& p : pieces_) {
            if (p.image_lo() <= y && y <= p.image_hi())
                cover += 1.0 / std::abs(p.slope);
        }
        if (std::abs(cover - 1.0) > tol) {
            ok = false;
            if (failures) {
                std::ostringstream msg;
                msg << "coverage " << cover << " != 1 on image interval ["
                    << cuts[i] << "," << cuts[i + 1] << "]";
                failures->push_back(msg.str());
            }
        }
    }
    return ok;
}

PiecewiseAffineMap PiecewiseAffineMap::compose_after(
    const IntervalExchange& s) const {
    // (h o s)(x): split each s-piece by this map's breakpoints in its image.
    std::vector<AffinePiece> out;
    for (const auto& q : s.pieces()) {
        const double ilo = q.image_lo(), ihi = q.image_hi();
        for (const auto& p : pieces_) {
            const double lo = std::max(ilo, p.src_lo);
            const double hi = std::min(ihi, p.src_hi);
            if (hi - lo <= kTol) continue;
            double slo, shi;
            if (q.slope > 0) {
                slo = q.src_lo + (lo - ilo);
                shi = q.src_lo + (hi - ilo);
            } else {
                slo = q.src_lo + (ihi - hi);
                shi = q.src_lo + (ihi - lo);
            }
            // s on [slo,shi): x -> u = c + d*x with d = q.slope
            const double d = q.slope;
            const double c = (q.slope > 0) ? q.target - q.src_lo
                                           : q.target + q.src_hi;
            // h(u) = p.slope*u + p.intercept -> slope p.slope*d
            out.push_back({slo, shi, p.slope * d, p.slope * c + p.intercept});
        }
    }
    return PiecewiseAffineMap(std::move(out));
}

PiecewiseAffineMap PiecewiseAffineMap::compose_before(
    const IntervalExchange& s) const {
    // (s o h)(t): split each h-piece at preimages of s breakpoints.
    std::vector<AffinePiece> out;
    for (const auto& p : pieces_) {
        const double ilo = p.image_lo(), ihi = p.image_hi();
        for (const auto& q : s.pieces()) {
            const double lo = std::max(ilo, q.src_lo);
            const double hi = std::min(ihi, q.src_hi);
            if (hi - lo <= kTol) continue;
            double t0, t1;
            if (p.slope > 0) {
                t0 = (lo - p.intercept) / p.slope;
                t1 = (hi - p.intercept) / p.slope;
            } else {
                t0 = (hi - p.intercept) / p.slope;
                t1 = (lo - p.intercept) / p.slope;
            }
            const double d = q.slope;
            const double c = (q.slope > 0) ? q.target - q.src_lo
                                           : q.target + q.src_hi;
            out.push_back({t0, t1, d * p.slope, d * p.intercept + c});
        }
    }
    return PiecewiseAffineMap(std::move(out));
}

bool PiecewiseAffineMap::is_interval_exchange() const {
    for (const auto& p : pieces_) {
        if (std::abs(std::abs(p.slope) - 1.0) > kTol) return false;
    }
    return measure_preserving(1e-9);
}

IntervalExchange PiecewiseAffineMap::as_interval_exchange() const {
    std::vector<ExchangePiece> ps;
    for (const auto& p : pieces_) {
        ps.push_back({p.src_lo, p.src_hi, p.image_lo(),
                      p.slope > 0 ? +1 : -1});
    }
    return IntervalExchange(std::move(ps));
}

double cd_cdf(const PiecewiseAffineMap& h, double x, double y) {
    double total = 0.0;
    for (const auto& p : h.pieces()) {
        if (p.src_lo >= x) continue;
        const double hi = std::min(x, p.src_hi);
        if (p.slope > 0) {
            const double cut = (y - p.intercept) / p.slope;
            total += std::max(0.0, std::min(hi, cut) - p.src_lo);
        } else {
            const double cut = (y - p.intercept) / p.slope;
            total += std::max(0.0, hi - std::max(p.src_lo, cut));
        }
    }
    return total;
}

double cd_partial2(const PiecewiseAffineMap& h, double x, double y) {
    double w = 0.0;
    for (const auto& p : h.pieces()) {
        if (p.image_lo() <= y && y <= p.image_hi()) {
            const double t = (y - p.intercept) / p.slope;
            if (t <= x && t >= p.src_lo - 1e-15 && t <= p.src_hi + 1e-15)
                w += 1.0 / std::abs(p.slope);
        }
    }
    return w;
}

double cd_norm_sq(const PiecewiseAffineMap& h) {
    // d1 side: int int chi{y > h(t)} dy dt squared is the indicator itself,
    // so int int d1C^2 = int (1 - h).
    double d1 = 0.0;
    for (const auto& p : h.pieces()) {
        const double mean = 0.5 * (p.value(p.src_lo) + p.value(p.src_hi));
        d1 += (1.0 - mean) * p.length();
    }

    // d2 side: for fixed y the derivative is a step function in x jumping by
    // 1/|slope| at each branch location t_p(y) = (y - b_p)/a_p.  Between
    // consecutive y-events (image endpoints and branch crossings) the active
    // set and branch order are constant and the inner integral is affine in
    // y, so the midpoint value integrates it exactly.
    const auto& ps = h.pieces();
    std::vector<double> cuts = {0.0, 1.0};
    for (const auto& p : ps) {
        cuts.push_back(p.image_lo());
        cuts.push_back(p.image_hi());
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const double ai = ps[i].slope, bi = ps[i].intercept;
            const double aj = ps[j].slope, bj = ps[j].intercept;
            if (ai == aj) continue;
            // (y-bi)/ai == (y-bj)/aj
            const double y = (bj * ai - bi * aj) / (ai - aj);
            if (y > 0.0 && y < 1.0) cuts.push_back(y);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double d2 = 0.0;
    std::vector<std::pair<double, double>> branches;  // (t, weight)
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double y0 = std::max(0.0, cuts[i]);
        const double y1 = std::min(1.0, cuts[i + 1]);
        if (y1 - y0 <= kTol) continue;
        const double ym = 0.5 * (y0 + y1);
        branches.clear();
        for (const auto& p : ps) {
            if (p.image_lo() <= ym && ym <= p.image_hi()) {
                branches.emplace_back((ym - p.intercept) / p.slope,
                                      1.0 / std::abs(p.slope));
            }
        }
        std::sort(branches.begin(), branches.end());
        double inner = 0.0, w = 0.0, prev = 0.0;
        for (const auto& [t, wt] : branches) {
            inner += w * w * (t - prev);
            w += wt;
            prev = t;
        }
        inner += w * w * (1.0 - prev);
        d2 += inner * (y1 - y0);
    }
    return d1 + d2;
}

std::vector<double> cd_cell_mass(const PiecewiseAffineMap& h, int n) {
    std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& p : h.pieces()) {
        const double ilo = p.image_lo(), ihi = p.image_hi();
        const int j0 = std::max(0, static_cast<int>(std::floor(ilo * n)));
        const int j1 = std::min(n - 1, static_cast<int>(std::ceil(ihi * n)) - 1);
        for (int j = j0; j <= j1; ++j) {
            const double ylo = std::max(ilo, static_cast<double>(j) / n);
            const double yhi = std::min(ihi, static_cast<double>(j + 1) / n);
            if (yhi - ylo <= 0.0) continue;
            double t0, t1;
            if (p.slope > 0) {
                t0 = (ylo - p.intercept) / p.slope;
                t1 = (yhi - p.intercept) / p.slope;
            } else {
                t0 = (yhi - p.intercept) / p.slope;
                t1 = (ylo - p.intercept) / p.slope;
            }
            t0 = std::max(t0, p.src_lo);
            t1 = std::min(t1, p.src_hi);
            if (t1 - t0 <= 0.0) continue;
            int i0 = std::max(0, static_cast<int>(std::floor(t0 * n)));
            int i1 = std::min(n - 1, static_cast<int>(std::ceil(t1 * n)) - 1);
            for (int i = i0; i <= i1; ++i) {
                const double xlo = std::max(t0, static_cast<double>(i) / n);
                const double xhi = std::min(t1, static_cast<double>(i + 1) / n);
                if (xhi > xlo)
                    mass[static_cast<std::size_t>(i) * n + j] += xhi - xlo;
            }
        }
    }
    return mass;
}

}  // namespace copcal
