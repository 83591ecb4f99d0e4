#include "copcal/shuffle_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "copcal/norms.hpp"
#include "copcal/star.hpp"

namespace copcal {

IntervalUnion::IntervalUnion(std::vector<Interval> parts)
    : parts_(std::move(parts)) {
    parts_.erase(std::remove_if(parts_.begin(), parts_.end(),
                                [](const Interval& iv) {
                                    return iv.length() <= 0.0;
                                }),
                 parts_.end());
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : parts_) {
        if (iv.lo < -1e-12 || iv.hi > 1.0 + 1e-12)
            throw std::invalid_argument("interval union escapes [0,1]");
        if (!merged.empty() && iv.lo <= merged.back().hi + 1e-15) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    parts_ = std::move(merged);
}

double IntervalUnion::measure() const {
    double m = 0.0;
    for (const auto& iv : parts_) m += iv.length();
    return m;
}

IntervalExchange sorting_shuffle(const IntervalUnion& a) {
    // Walk [0,1] alternating between A-segments and complement segments.
    const double ma = a.measure();
    std::vector<ExchangePiece> pieces;
    double in_cum = 0.0;   // measure of A seen so far
    double out_cum = 0.0;  // measure of the complement seen so far
    double pos = 0.0;
    auto emit_out = [&](double lo, double hi) {
        if (hi - lo <= 0.0) return;
        pieces.push_back({lo, hi, ma + out_cum, +1});
        out_cum += hi - lo;
    };
    for (const auto& iv : a.parts()) {
        emit_out(pos, iv.lo);
        pieces.push_back({iv.lo, iv.hi, in_cum, +1});
        in_cum += iv.length();
        pos = iv.hi;
    }
    emit_out(pos, 1.0);
    return IntervalExchange(std::move(pieces));
}

namespace {

// Blockwise sorting shuffle: within [lo,hi), sort A-parts (already clipped to
// the block) to the front.
void append_block_sorting(std::vector<ExchangePiece>& pieces, double lo,
                          double hi, const std::vector<Interval>& a_parts) {
    double ma = 0.0;
    for (const auto& iv : a_parts) ma += iv.length();
    double in_cum = 0.0, out_cum = 0.0, pos = lo;
    auto emit_out = [&](double s0, double s1) {
        if (s1 - s0 <= 0.0) return;
        pieces.push_back({s0, s1, lo + ma + out_cum, +1});
        out_cum += s1 - s0;
    };
    for (const auto& iv : a_parts) {
        emit_out(pos, iv.lo);
        if (iv.length() > 0.0)
            pieces.push_back({iv.lo, iv.hi, lo + in_cum, +1});
        in_cum += iv.length();
        pos = iv.hi;
    }
    emit_out(pos, hi);
}

std::vector<Interval> clip_to_block(const std::vector<Interval>& ivs,
                                    double lo, double hi) {
    std::vector<Interval> out;
    for (const auto& iv : ivs) {
        const double a = std::max(iv.lo, lo);
        const double b = std::min(iv.hi, hi);
        if (b - a > 1e-15) out.push_back({a, b});
    }
    return out;
}

DiagonalizationTrace diagonalize_exact(PiecewiseAffineMap h, int depth) {
    DiagonalizationTrace trace;
    trace.initial_norm_sq = cd_norm_sq(h);
    IntervalExchange composed = IntervalExchange::identity();
    for (int k = 1; k <= depth; ++k) {
        const long blocks = 1L << (k - 1);
        const double w = 1.0 / static_cast<double>(blocks);
        std::vector<ExchangePiece> sort_pieces;
        for (long b = 0; b < blocks; ++b) {
            const double lo = b * w, hi = (b + 1) * w;
            const auto pre = h.preimage(lo, lo + 0.5 * w);
            append_block_sorting(sort_pieces, lo, hi,
                                 clip_to_block(pre, lo, hi));
        }
        const IntervalExchange s(std::move(sort_pieces));
        const IntervalExchange step = s.inverse();  // support map of S_k
        h = h.compose_after(step);
        composed = composed.compose_after(step);
        trace.steps.push_back({step, cd_norm_sq(h)});
    }
    trace.composed = composed;
    return trace;
}

DiagonalizationTrace diagonalize_grid(const GridCopula& g, int depth) {
    const int n = g.n();
    if ((1 << depth) > n)
        throw std::invalid_argument(
            "diagonalize: depth exceeds log2(grid n); resolution exhausted");
    DiagonalizationTrace trace;
    trace.grid_scheme = true;
    trace.initial_norm_sq = g.norm_sq();
    GridCopula cur = g;
    IntervalExchange composed = IntervalExchange::identity();
    // Block boundaries in cell indices, refined by bisection each step.
    std::vector<int> bounds = {0, n};
    for (int k = 1; k <= depth; ++k) {
        std::vector<ExchangePiece> sort_pieces;
        std::vector<int> next_bounds = {0};
        for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
            const int lo = bounds[b], hi = bounds[b + 1];
            const int mid = lo + (hi - lo) / 2;
            next_bounds.push_back(mid);
            next_bounds.push_back(hi);
            // A = cells whose conditional median lies in the lower half.
            std::vector<Interval> a_parts;
            for (int i = lo; i < hi; ++i) {
                double row = 0.0;
                for (int j = lo; j < hi; ++j) row += cur.mass(i, j);
                if (row <= 0.0) continue;
                double cum = 0.0;
                int median = hi - 1;
                for (int j = lo; j < hi; ++j) {
                    cum += cur.mass(i, j);
                    if (cum >= 0.5 * row) {
                        median = j;
                        break;
                    }
                }
                if (median < mid)
                    a_parts.push_back({static_cast<double>(i) / n,
                                       static_cast<double>(i + 1) / n});
            }
            append_block_sorting(sort_pieces, static_cast<double>(lo) / n,
                                 static_cast<double>(hi) / n,
                                 IntervalUnion(std::move(a_parts)).parts());
        }
        const IntervalExchange s(std::move(sort_pieces));
        const IntervalExchange step = s.inverse();
        cur = cur.shuffled_rows(step);
        composed = composed.compose_after(step);
        trace.steps.push_back({step, cur.norm_sq()});
        bounds = std::move(next_bounds);
        std::sort(bounds.begin(), bounds.end());
        bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    }
    trace.composed = composed;
    return trace;
}

}  // namespace

DiagonalizationTrace diagonalize(const CopulaDescriptor& c, int depth,
                                 int n) {
    if (depth < 0) throw std::invalid_argument("diagonalize: depth < 0");
    if (const auto s = c.as_exact_shuffle())
        return diagonalize_exact(PiecewiseAffineMap(*s), depth);
    if (c.is_cdmap()) {
        const auto& m = c.as_cdmap();
        if (m.transposed)
            throw std::invalid_argument(
                "diagonalize: input is right-invertible (transposed cd map); "
                "use right_diagonalize");
        return diagonalize_exact(m.map, depth);
    }
    if (c.is_grid()) return diagonalize_grid(c.as_grid(), depth);
    return diagonalize_grid(to_grid(c, n), depth);
}

DiagonalizationTrace right_diagonalize(const CopulaDescriptor& c, int depth,
                                       int n) {
    DiagonalizationTrace t = diagonalize(transpose(c), depth, n);
    for (auto& step : t.steps) step.shuffle = step.shuffle.inverse();
    t.composed = t.composed.inverse();
    return t;
}

namespace {

// Straight shuffle mapping each preimage union onto its bin in order.
IntervalExchange straight_from_preimages(
    const std::vector<std::vector<Interval>>& preimages, int bins) {
    std::vector<ExchangePiece> pieces;
    for (int k = 0; k < bins; ++k) {
        double cum = static_cast<double>(k) / bins;
        for (const auto& iv : preimages[static_cast<std::size_t>(k)]) {
            pieces.push_back({iv.lo, iv.hi, cum, +1});
            cum += iv.length();
        }
    }
    return IntervalExchange(std::move(pieces));
}

}  // namespace

ShuffleApprox approx_by_shuffles(const CopulaDescriptor& c, int bins, int n,
                                 double eps) {
    if (bins < 1) throw std::invalid_argument("approx_by_shuffles: bins < 1");
    if (const auto s = c.as_exact_shuffle()) {
        // Already at bin granularity: the input is its own approximation.
        bool aligned = true;
        for (const auto& p : s->pieces()) {
            const double scaled_lo = p.src_lo * bins;
            const double scaled_t = p.target * bins;
            if (std::abs(scaled_lo - std::round(scaled_lo)) > 1e-12 ||
                std::abs(scaled_t - std::round(scaled_t)) > 1e-12) {
                aligned = false;
                break;
            }
        }
        if (aligned) return {*s, 0.0, false};
        const PiecewiseAffineMap f(*s);
        std::vector<std::vector<Interval>> preimages;
        preimages.reserve(bins);
        for (int k = 0; k < bins; ++k)
            preimages.push_back(f.preimage(static_cast<double>(k) / bins,
                                           static_cast<double>(k + 1) / bins));
        const IntervalExchange fb = straight_from_preimages(preimages, bins);
        return {fb, 2.0 * graph_l1_distance(*s, fb), false};
    }

    // Grid input: certify near-unit norm, then extract the support map by
    // cell-wise argmax transport (flagged as a pragmatic extension).
    const GridCopula g = c.is_grid() ? c.as_grid() : to_grid(c, n);
    const double nsq = g.norm_sq();
    if (nsq < 1.0 - eps)
        throw std::invalid_argument(
            "approx_by_shuffles: input norm^2 " + std::to_string(nsq) +
            " below the declared unit-norm threshold 1 - " +
            std::to_string(eps));
    const int gn = g.n();
    if (bins > gn)
        throw std::invalid_argument("approx_by_shuffles: bins exceed grid n");
    std::vector<int> argmax(gn);
    for (int i = 0; i < gn; ++i) {
        int best = 0;
        for (int j = 1; j < gn; ++j)
            if (g.mass(i, j) > g.mass(i, best)) best = j;
        argmax[i] = best;
    }
    // Assign cells to bins by argmax order (stable in the cell index), with
    // equal quotas so the result is measure-preserving.
    std::vector<int> order(gn);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return argmax[a] < argmax[b];
    });
    std::vector<std::vector<Interval>> preimages(bins);
    const int base = gn / bins, extra = gn % bins;
    std::size_t pos = 0;
    for (int k = 0; k < bins; ++k) {
        const int quota = base + (k < extra ? 1 : 0);
        std::vector<Interval> cells;
        for (int q = 0; q < quota; ++q, ++pos) {
            const int i = order[pos];
            cells.push_back({static_cast<double>(i) / gn,
                             static_cast<double>(i + 1) / gn});
        }
        preimages[static_cast<std::size_t>(k)] =
            IntervalUnion(std::move(cells)).parts();
    }
    const IntervalExchange fb = straight_from_preimages(preimages, bins);
    const double d =
        GridCopula::dist_sq(g, to_grid(CopulaDescriptor::shuffle(fb), gn));
    return {fb, d, true};
}

IntervalExchange selfsimilar(int level) {
    if (level < 0 || level > 16)
        throw std::invalid_argument(
            "selfsimilar: level must lie in [0,16] (piece budget)");
    if (level == 0) return IntervalExchange::identity();
    // Integer lattice of N = 2^(level+1) cells: cell c maps onto cell
    // perm[c] with slope sign[c].  Flipping a stripe reverses its cell order
    // and negates the slopes; all arithmetic stays integral.
    const long N = 1L << (level + 1);
    std::vector<long> perm(N);
    std::vector<int> sign(N, +1);
    std::iota(perm.begin(), perm.end(), 0L);
    for (int lev = 1; lev <= level; ++lev) {
        const long stripes = 1L << (lev + 1);     // cells at scale 2^-(lev+1)
        const long width = N / stripes;           // lattice cells per stripe
        for (long s = 1; s < stripes; s += 2) {   // odd dyadic cells form F_lev
            const long lo = s * width;
            const long hi = lo + width;  // exclusive
            for (long i = 0; i < width / 2; ++i) {
                std::swap(perm[lo + i], perm[hi - 1 - i]);
                std::swap(sign[lo + i], sign[hi - 1 - i]);
            }
            for (long i = lo; i < hi; ++i) sign[i] = -sign[i];
        }
    }
    // Merge consecutive lattice cells into maximal affine pieces.
    std::vector<ExchangePiece> pieces;
    const double inv = 1.0 / static_cast<double>(N);
    long run_start = 0;
    for (long c = 1; c <= N; ++c) {
        const bool extends =
            c < N && sign[c] == sign[c - 1] &&
            perm[c] == perm[c - 1] + (sign[c - 1] > 0 ? 1 : -1);
        if (extends) continue;
        const long img_lo = sign[run_start] > 0 ? perm[run_start]
                                                : perm[c - 1];
        pieces.push_back({run_start * inv, c * inv, img_lo * inv,
                          sign[run_start]});
        run_start = c;
    }
    return IntervalExchange(std::move(pieces));
}

}  // namespace copcal
