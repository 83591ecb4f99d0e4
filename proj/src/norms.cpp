#include "copcal/norms.hpp"

#include <cmath>

namespace copcal {

std::string NormReport::scheme_name() const {
    switch (scheme) {
        case NormScheme::ExactShuffle: return "exact-shuffle";
        case NormScheme::ClosedForm: return "closed-form";
        default: return "grid(" + std::to_string(grid_n) + ")";
    }
}

namespace {

bool is_pi(const CopulaDescriptor& d) {
    return d.is_parametric() &&
           d.as_parametric().family == Parametric::Family::Pi;
}

struct SchemeValue {
    double value = 0.0;
    NormScheme scheme = NormScheme::Grid;
    int grid_n = 0;
};

SchemeValue norm_sq_impl(const CopulaDescriptor& d, int n);

// Closed-form norm when no discretization is needed anywhere in the tree.
std::optional<double> exact_norm_sq(const CopulaDescriptor& d) {
    if (d.as_exact_shuffle()) return 1.0;
    if (d.is_cdmap()) return cd_norm_sq(d.as_cdmap().map);  // transpose-invariant
    if (d.is_parametric()) {
        const auto& p = d.as_parametric();
        switch (p.family) {
            case Parametric::Family::Pi: return 2.0 / 3.0;
            case Parametric::Family::FGM:
                return 2.0 / 3.0 + p.theta * p.theta / 45.0;
            default: return 1.0;  // M, W are shuffles
        }
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        const auto na = exact_norm_sq(*c.left);
        const auto nb = exact_norm_sq(*c.right);
        const auto inner = exact_gradient_inner(*c.left, *c.right);
        if (na && nb && inner) {
            const double a = c.alpha;
            return a * a * *na + (1.0 - a) * (1.0 - a) * *nb +
                   2.0 * a * (1.0 - a) * *inner;
        }
        return std::nullopt;
    }
    if (d.is_ordinal()) {
        // ||C||^2 = sum_k w_k^2 ||C_k||^2 + 2 sum_k w_k (1 - a_k): inside the
        // k-th diagonal square the gradient is the rescaled component's, and
        // above the square d1C = 1 (below it vanishes); mirrored for d2C.
        const auto& o = d.as_ordinal();
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < o.partition.size(); ++k) {
            const double w = o.partition[k + 1] - o.partition[k];
            const auto nk = exact_norm_sq(*o.components[k]);
            if (!nk) return std::nullopt;
            total += w * w * *nk + 2.0 * w * (1.0 - o.partition[k + 1]);
        }
        return total;
    }
    return std::nullopt;  // grid norms are tied to their resolution
}

SchemeValue norm_sq_impl(const CopulaDescriptor& d, int n) {
    if (d.as_exact_shuffle()) return {1.0, NormScheme::ExactShuffle, 0};
    if (const auto exact = exact_norm_sq(d)) {
        const NormScheme s =
            d.is_shuffle() ? NormScheme::ExactShuffle : NormScheme::ClosedForm;
        return {*exact, s, 0};
    }
    if (d.is_grid()) {
        const auto& g = d.as_grid();
        return {g.norm_sq(), NormScheme::Grid, g.n()};
    }
    if (d.is_ordinal()) {
        // The coupling formula is exact given the component norms; grid-backed
        // components contribute their checkerboard norms.
        const auto& o = d.as_ordinal();
        double total = 0.0;
        int gn = 0;
        for (std::size_t k = 0; k + 1 < o.partition.size(); ++k) {
            const double w = o.partition[k + 1] - o.partition[k];
            const int sub_n = std::max(2, static_cast<int>(std::lround(w * n)));
            const SchemeValue nk = norm_sq_impl(*o.components[k], sub_n);
            gn = std::max(gn, nk.grid_n);
            total += w * w * nk.value + 2.0 * w * (1.0 - o.partition[k + 1]);
        }
        return {total, NormScheme::Grid, gn == 0 ? n : gn};
    }
    const GridCopula g = to_grid(d, n);
    return {g.norm_sq(), NormScheme::Grid, n};
}

}  // namespace

std::optional<double> exact_gradient_inner(const CopulaDescriptor& a,
                                           const CopulaDescriptor& b) {
    // <C, Pi> = 2/3 for every copula C: int_0^1 d1C(x,y) dx = y, so the d1
    // part integrates y^2 to 1/3, and d2 matches by symmetry.
    if (is_pi(a) || is_pi(b)) return 2.0 / 3.0;
    const auto sa = a.as_exact_shuffle();
    const auto sb = b.as_exact_shuffle();
    if (sa && sb) {
        // d1 indicators multiply to chi{y > max(f_a, f_b)}.
        return integral_one_minus_max(*sa, *sb) +
               integral_one_minus_max(sa->inverse(), sb->inverse());
    }
    if (a.is_convex()) {
        const auto& c = a.as_convex();
        const auto l = exact_gradient_inner(*c.left, b);
        const auto r = exact_gradient_inner(*c.right, b);
        if (l && r) return c.alpha * *l + (1.0 - c.alpha) * *r;
        return std::nullopt;
    }
    if (b.is_convex()) return exact_gradient_inner(b, a);
    return std::nullopt;
}

NormReport sobolev_norm_sq(const CopulaDescriptor& d, int n) {
    const SchemeValue v = norm_sq_impl(d, n);
    NormReport rep;
    rep.norm_sq = v.value;
    rep.scheme = v.scheme;
    rep.grid_n = v.grid_n;
    rep.bounds_ok =
        v.value >= 2.0 / 3.0 - 1e-6 && v.value <= 1.0 + 1e-6;
    return rep;
}

double grid_norm_sq(const CopulaDescriptor& d, int n) {
    return to_grid(d, n).norm_sq();
}

GraphL1 graph_l1_sides(const IntervalExchange& f1, const IntervalExchange& f2) {
    return {l1_between(f1, f2), l1_between(f1.inverse(), f2.inverse())};
}

double graph_l1_distance(const IntervalExchange& f1,
                         const IntervalExchange& f2) {
    return graph_l1_sides(f1, f2).bound();
}

double sobolev_dist_sq(const CopulaDescriptor& a, const CopulaDescriptor& b,
                       int n) {
    const auto sa = a.as_exact_shuffle();
    const auto sb = b.as_exact_shuffle();
    if (sa && sb) {
        // |d1C1 - d1C2| is the indicator of y lying between f1(x) and f2(x),
        // so the squared distance is the two-sided L1 identity.
        const GraphL1 g = graph_l1_sides(*sa, *sb);
        return g.forward + g.inverse;
    }
    {
        const auto na = exact_norm_sq(a);
        const auto nb = exact_norm_sq(b);
        const auto inner = exact_gradient_inner(a, b);
        if (na && nb && inner) return *na + *nb - 2.0 * *inner;
    }
    if (a.is_grid() && b.is_grid() && a.as_grid().n() == b.as_grid().n())
        return GridCopula::dist_sq(a.as_grid(), b.as_grid());
    int gn = n;
    if (a.is_grid()) gn = a.as_grid().n();
    if (b.is_grid()) gn = b.as_grid().n();
    return GridCopula::dist_sq(a.is_grid() ? a.as_grid() : to_grid(a, gn),
                               b.is_grid() ? b.as_grid() : to_grid(b, gn));
}

}  // namespace copcal
