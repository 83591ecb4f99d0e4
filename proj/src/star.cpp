#include "copcal/star.hpp"

#include <stdexcept>

namespace copcal {

namespace {

bool is_pi(const CopulaDescriptor& d) {
    return d.is_parametric() &&
           d.as_parametric().family == Parametric::Family::Pi;
}

bool is_m(const CopulaDescriptor& d) {
    return d.is_parametric() &&
           d.as_parametric().family == Parametric::Family::M;
}

StarResult exact_result(CopulaDescriptor c, std::string why) {
    return {std::move(c), true, 0, std::move(why)};
}

}  // namespace

CopulaDescriptor transpose(const CopulaDescriptor& d) {
    if (d.is_grid()) return CopulaDescriptor::grid(d.as_grid().transposed());
    if (d.is_shuffle())
        return CopulaDescriptor::shuffle(d.as_shuffle().inverse());
    if (d.is_cdmap()) {
        const auto& c = d.as_cdmap();
        return CopulaDescriptor::cdmap(c.map, !c.transposed);
    }
    if (d.is_parametric()) return d;  // M, W, Pi, FGM are all symmetric
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        return CopulaDescriptor::convex(c.alpha, transpose(*c.left),
                                        transpose(*c.right));
    }
    const auto& o = d.as_ordinal();
    std::vector<CopulaDescriptor> comps;
    comps.reserve(o.components.size());
    for (const auto& c : o.components) comps.push_back(transpose(*c));
    return CopulaDescriptor::ordinal(o.partition, std::move(comps));
}

StarResult star(const CopulaDescriptor& a, const CopulaDescriptor& b, int n) {
    const std::string ops = a.kind() + "*" + b.kind() + ": ";
    // Monoid identities hold exactly: Pi is the null element, M the identity.
    if (is_pi(a) || is_pi(b))
        return exact_result(CopulaDescriptor::Pi(), ops + "null element Pi");
    if (is_m(a)) return exact_result(b, ops + "identity M on the left");
    if (is_m(b)) return exact_result(a, ops + "identity M on the right");

    // The product is bilinear, so it distributes over convex combinations;
    // distributing first preserves exact branches.
    if (a.is_convex()) {
        const auto& c = a.as_convex();
        StarResult l = star(*c.left, b, n);
        StarResult r = star(*c.right, b, n);
        const bool exact = l.exact && r.exact;
        const int gn = std::max(l.grid_n, r.grid_n);
        return {CopulaDescriptor::convex(c.alpha, std::move(l.copula),
                                         std::move(r.copula)),
                exact, gn, ops + "distributed over convex combination"};
    }
    if (b.is_convex()) {
        const auto& c = b.as_convex();
        StarResult l = star(a, *c.left, n);
        StarResult r = star(a, *c.right, n);
        const bool exact = l.exact && r.exact;
        const int gn = std::max(l.grid_n, r.grid_n);
        return {CopulaDescriptor::convex(c.alpha, std::move(l.copula),
                                         std::move(r.copula)),
                exact, gn, ops + "distributed over convex combination"};
    }

    const auto sa = a.as_exact_shuffle();
    const auto sb = b.as_exact_shuffle();

    // Shuffle * Shuffle: the product is the shuffle supported on f_b o f_a.
    if (sa && sb) {
        return exact_result(
            CopulaDescriptor::shuffle(sb->compose_after(*sa)),
            ops + "shuffle composition");
    }

    // Shuffle against a complete dependence copula composes the support maps
    // exactly.
    if (sa && b.is_cdmap()) {
        const auto& c = b.as_cdmap();
        if (!c.transposed) {
            // (S * C_h) has support map h o f_S.
            return exact_result(
                CopulaDescriptor::cdmap(c.map.compose_after(*sa), false),
                ops + "cd composition");
        }
        // S * C_h^T = (C_h * S^T)^T with support map f_S^{-1} o h.
        return exact_result(
            CopulaDescriptor::cdmap(c.map.compose_before(sa->inverse()), true),
            ops + "cd composition (transposed)");
    }
    if (a.is_cdmap() && sb) {
        const auto& c = a.as_cdmap();
        if (!c.transposed) {
            // (C_h * S) has support map f_S o h.
            return exact_result(
                CopulaDescriptor::cdmap(c.map.compose_before(*sb), false),
                ops + "cd composition");
        }
        // C_h^T * S = (S^T * C_h)^T with support map h o f_S^{-1}.
        return exact_result(
            CopulaDescriptor::cdmap(c.map.compose_after(sb->inverse()), true),
            ops + "cd composition (transposed)");
    }

    // Shuffle * Grid and Grid * Shuffle: exact push-forward of cell mass.
    if (sa && b.is_grid()) {
        return {CopulaDescriptor::grid(b.as_grid().shuffled_rows(*sa)), true,
                b.as_grid().n(), ops + "push-forward of grid rows"};
    }
    if (a.is_grid() && sb) {
        return {CopulaDescriptor::grid(a.as_grid().shuffled_cols(*sb)), true,
                a.as_grid().n(), ops + "push-forward of grid columns"};
    }

    // Grid * Grid at a common resolution is exact for checkerboards.
    if (a.is_grid() && b.is_grid()) {
        const auto& ga = a.as_grid();
        const auto& gb = b.as_grid();
        if (ga.n() != gb.n())
            throw std::invalid_argument(
                "star: grid resolutions differ (" + std::to_string(ga.n()) +
                " vs " + std::to_string(gb.n()) +
                "); re-grid one operand to a common n");
        return {CopulaDescriptor::grid(GridCopula::star(ga, gb)), true,
                ga.n(), ops + "checkerboard product"};
    }

    // Mixed representations: discretize at n.  Keep an existing grid's
    // resolution when only one side needs conversion.
    int gn = n;
    if (a.is_grid()) gn = a.as_grid().n();
    if (b.is_grid()) gn = b.as_grid().n();

    // A shuffle against anything discretizable: convert the other side only
    // and push its cell mass forward exactly.
    if (sa) {
        return {CopulaDescriptor::grid(to_grid(b, gn).shuffled_rows(*sa)),
                false, gn, ops + "push-forward of the discretized operand"};
    }
    if (sb) {
        return {CopulaDescriptor::grid(to_grid(a, gn).shuffled_cols(*sb)),
                false, gn, ops + "push-forward of the discretized operand"};
    }

    const GridCopula ga = a.is_grid() ? a.as_grid() : to_grid(a, gn);
    const GridCopula gb = b.is_grid() ? b.as_grid() : to_grid(b, gn);
    return {CopulaDescriptor::grid(GridCopula::star(ga, gb)), false, gn,
            ops + "grid fallback"};
}

StarResult shuffle_of(const CopulaDescriptor& d, const IntervalExchange& t,
                      Side side, int n) {
    const CopulaDescriptor s = CopulaDescriptor::shuffle(t);
    return side == Side::Left ? star(s, d, n) : star(d, s, n);
}

}  // namespace copcal
