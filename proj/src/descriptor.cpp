#include "copcal/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace copcal {

CopulaDescriptor CopulaDescriptor::grid(GridCopula g) {
    return CopulaDescriptor(Variant(std::move(g)));
}
CopulaDescriptor CopulaDescriptor::shuffle(IntervalExchange s) {
    return CopulaDescriptor(Variant(std::move(s)));
}
CopulaDescriptor CopulaDescriptor::cdmap(PiecewiseAffineMap h, bool transposed) {
    return CopulaDescriptor(Variant(CdMap{std::move(h), transposed}));
}
CopulaDescriptor CopulaDescriptor::M() {
    return CopulaDescriptor(Variant(Parametric{Parametric::Family::M, 0.0}));
}
CopulaDescriptor CopulaDescriptor::W() {
    return CopulaDescriptor(Variant(Parametric{Parametric::Family::W, 0.0}));
}
CopulaDescriptor CopulaDescriptor::Pi() {
    return CopulaDescriptor(Variant(Parametric{Parametric::Family::Pi, 0.0}));
}
CopulaDescriptor CopulaDescriptor::fgm(double theta) {
    return CopulaDescriptor(Variant(Parametric{Parametric::Family::FGM, theta}));
}
CopulaDescriptor CopulaDescriptor::convex(double alpha, CopulaDescriptor left,
                                          CopulaDescriptor right) {
    ConvexCombo c;
    c.alpha = alpha;
    c.left = std::make_shared<const CopulaDescriptor>(std::move(left));
    c.right = std::make_shared<const CopulaDescriptor>(std::move(right));
    return CopulaDescriptor(Variant(std::move(c)));
}
CopulaDescriptor CopulaDescriptor::ordinal(
    std::vector<double> partition, std::vector<CopulaDescriptor> components) {
    OrdinalSum o;
    o.partition = std::move(partition);
    for (auto& c : components)
        o.components.push_back(
            std::make_shared<const CopulaDescriptor>(std::move(c)));
    return CopulaDescriptor(Variant(std::move(o)));
}

std::optional<IntervalExchange> CopulaDescriptor::as_exact_shuffle() const {
    if (is_shuffle()) return as_shuffle();
    if (is_parametric()) {
        switch (as_parametric().family) {
            case Parametric::Family::M:
                return IntervalExchange::identity();
            case Parametric::Family::W:
                return IntervalExchange::reflection();
            default:
                return std::nullopt;
        }
    }
    if (is_cdmap()) {
        const auto& c = as_cdmap();
        if (c.map.is_interval_exchange()) {
            auto s = c.map.as_interval_exchange();
            return c.transposed ? s.inverse() : s;
        }
    }
    return std::nullopt;
}

std::string CopulaDescriptor::kind() const {
    if (is_grid()) return "grid";
    if (is_shuffle()) return "shuffle";
    if (is_cdmap()) return "cdmap";
    if (is_convex()) return "convex";
    if (is_ordinal()) return "ordinal";
    switch (as_parametric().family) {
        case Parametric::Family::M: return "M";
        case Parametric::Family::W: return "W";
        case Parametric::Family::Pi: return "Pi";
        default: return "FGM";
    }
}

namespace {

double fgm_cdf(double theta, double x, double y) {
    return x * y + theta * x * y * (1.0 - x) * (1.0 - y);
}

void validate_into(const CopulaDescriptor& d, const std::string& path,
                   ValidationReport& rep);

void sampled_rectangle_check(const CopulaDescriptor& d, const std::string& path,
                             ValidationReport& rep) {
    // 2-increasingness spot check on a coarse lattice of rectangles.
    static const double grid[] = {0.0, 0.2, 0.45, 0.7, 1.0};
    double worst = 0.0;
    for (double x0 : grid)
        for (double x1 : grid) {
            if (x1 <= x0) continue;
            for (double y0 : grid)
                for (double y1 : grid) {
                    if (y1 <= y0) continue;
                    const double m = eval_cdf(d, x1, y1) - eval_cdf(d, x0, y1) -
                                     eval_cdf(d, x1, y0) + eval_cdf(d, x0, y0);
                    worst = std::min(worst, m);
                }
        }
    std::ostringstream det;
    det << "min sampled rectangle mass " << worst;
    rep.add(path + "2-increasing (sampled)", worst >= -1e-12, det.str());
}

void validate_into(const CopulaDescriptor& d, const std::string& path,
                   ValidationReport& rep) {
    if (d.is_grid()) {
        std::vector<std::string> failures;
        const bool ok = d.as_grid().check(1e-9, &failures);
        std::string det;
        for (const auto& f : failures) det += (det.empty() ? "" : "; ") + f;
        rep.add(path + "grid doubly stochastic", ok,
                ok ? "row/col sums within 1e-9 of 1/n" : det);
        return;
    }
    if (d.is_shuffle()) {
        std::vector<std::string> failures;
        const bool ok = d.as_shuffle().check(1e-9, &failures);
        std::string det;
        for (const auto& f : failures) det += (det.empty() ? "" : "; ") + f;
        rep.add(path + "shuffle bijectivity/measure preservation", ok,
                ok ? "source and image both tile [0,1], slopes +-1" : det);
        return;
    }
    if (d.is_cdmap()) {
        std::vector<std::string> failures;
        const bool ok = d.as_cdmap().map.measure_preserving(1e-9, &failures);
        std::string det;
        for (const auto& f : failures) det += (det.empty() ? "" : "; ") + f;
        rep.add(path + "cdmap measure preservation", ok,
                ok ? "branch coverage equals 1 on every image interval" : det);
        return;
    }
    if (d.is_parametric()) {
        const auto& p = d.as_parametric();
        if (p.family == Parametric::Family::FGM) {
            const bool ok = p.theta >= -1.0 && p.theta <= 1.0;
            std::ostringstream det;
            det << "theta = " << p.theta;
            rep.add(path + "FGM theta in [-1,1]", ok, det.str());
        } else {
            rep.add(path + "parametric family", true, d.kind());
        }
        sampled_rectangle_check(d, path, rep);
        return;
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        const bool ok = c.alpha >= 0.0 && c.alpha <= 1.0;
        std::ostringstream det;
        det << "alpha = " << c.alpha;
        rep.add(path + "convex alpha in [0,1]", ok, det.str());
        validate_into(*c.left, path + "left.", rep);
        validate_into(*c.right, path + "right.", rep);
        return;
    }
    const auto& o = d.as_ordinal();
    bool ok = o.partition.size() >= 2 &&
              o.components.size() + 1 == o.partition.size() &&
              o.partition.front() == 0.0 && o.partition.back() == 1.0;
    for (std::size_t i = 0; ok && i + 1 < o.partition.size(); ++i)
        ok = o.partition[i] < o.partition[i + 1];
    rep.add(path + "ordinal partition strictly increasing, endpoints 0 and 1",
            ok);
    for (std::size_t i = 0; i < o.components.size(); ++i) {
        validate_into(*o.components[i],
                      path + "component[" + std::to_string(i) + "].", rep);
    }
}

}  // namespace

ValidationReport validate(const CopulaDescriptor& d) {
    ValidationReport rep;
    validate_into(d, "", rep);
    return rep;
}

double eval_cdf(const CopulaDescriptor& d, double x, double y) {
    if (x < -1e-12 || x > 1.0 + 1e-12 || y < -1e-12 || y > 1.0 + 1e-12)
        throw std::domain_error("eval_cdf: arguments must lie in [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    y = std::clamp(y, 0.0, 1.0);
    if (d.is_grid()) return d.as_grid().cdf(x, y);
    if (d.is_shuffle()) return d.as_shuffle().cdf(x, y);
    if (d.is_cdmap()) {
        const auto& c = d.as_cdmap();
        return c.transposed ? cd_cdf(c.map, y, x) : cd_cdf(c.map, x, y);
    }
    if (d.is_parametric()) {
        const auto& p = d.as_parametric();
        switch (p.family) {
            case Parametric::Family::M: return std::min(x, y);
            case Parametric::Family::W: return std::max(x + y - 1.0, 0.0);
            case Parametric::Family::Pi: return x * y;
            default: return fgm_cdf(p.theta, x, y);
        }
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        return c.alpha * eval_cdf(*c.left, x, y) +
               (1.0 - c.alpha) * eval_cdf(*c.right, x, y);
    }
    const auto& o = d.as_ordinal();
    for (std::size_t k = 0; k + 1 < o.partition.size(); ++k) {
        const double a = o.partition[k], b = o.partition[k + 1];
        if (x >= a && x <= b && y >= a && y <= b) {
            const double w = b - a;
            return a + w * eval_cdf(*o.components[k], (x - a) / w, (y - a) / w);
        }
    }
    return std::min(x, y);
}

namespace {

PartialValue indicator_partial(double threshold, double coord) {
    // chi{coord > threshold} with the right-limit convention on the graph.
    if (coord > threshold) return {1.0, false};
    if (coord < threshold) return {0.0, false};
    return {1.0, true};
}

}  // namespace

PartialValue partial1(const CopulaDescriptor& d, double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::domain_error("partial1: arguments must lie in [0,1]");
    if (d.is_shuffle()) return indicator_partial(d.as_shuffle()(x), y);
    if (d.is_grid()) return {d.as_grid().partial1(x, y), false};
    if (d.is_cdmap()) {
        const auto& c = d.as_cdmap();
        if (!c.transposed) return indicator_partial(c.map(x), y);
        return {cd_partial2(c.map, y, x), false};
    }
    if (d.is_parametric()) {
        const auto& p = d.as_parametric();
        switch (p.family) {
            case Parametric::Family::M: return indicator_partial(x, y);
            case Parametric::Family::W: return indicator_partial(1.0 - x, y);
            case Parametric::Family::Pi: return {y, false};
            default:
                return {y + p.theta * y * (1.0 - y) * (1.0 - 2.0 * x), false};
        }
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        const PartialValue l = partial1(*c.left, x, y);
        const PartialValue r = partial1(*c.right, x, y);
        return {c.alpha * l.value + (1.0 - c.alpha) * r.value,
                l.on_support || r.on_support};
    }
    const auto& o = d.as_ordinal();
    for (std::size_t k = 0; k + 1 < o.partition.size(); ++k) {
        const double a = o.partition[k], b = o.partition[k + 1];
        if (x >= a && (x < b || (b == 1.0 && x == 1.0))) {
            if (y >= a && y <= b) {
                const double w = b - a;
                return partial1(*o.components[k], (x - a) / w, (y - a) / w);
            }
            return y > b ? PartialValue{1.0, false} : PartialValue{0.0, false};
        }
    }
    return indicator_partial(x, y);
}

PartialValue partial2(const CopulaDescriptor& d, double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::domain_error("partial2: arguments must lie in [0,1]");
    if (d.is_shuffle())
        return indicator_partial(d.as_shuffle().inverse()(y), x);
    if (d.is_grid()) return {d.as_grid().partial2(x, y), false};
    if (d.is_cdmap()) {
        const auto& c = d.as_cdmap();
        if (c.transposed) return indicator_partial(c.map(y), x);
        return {cd_partial2(c.map, x, y), false};
    }
    if (d.is_parametric()) {
        const auto& p = d.as_parametric();
        switch (p.family) {
            case Parametric::Family::M: return indicator_partial(y, x);
            case Parametric::Family::W: return indicator_partial(1.0 - y, x);
            case Parametric::Family::Pi: return {x, false};
            default:
                return {x + p.theta * x * (1.0 - x) * (1.0 - 2.0 * y), false};
        }
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        const PartialValue l = partial2(*c.left, x, y);
        const PartialValue r = partial2(*c.right, x, y);
        return {c.alpha * l.value + (1.0 - c.alpha) * r.value,
                l.on_support || r.on_support};
    }
    const auto& o = d.as_ordinal();
    for (std::size_t k = 0; k + 1 < o.partition.size(); ++k) {
        const double a = o.partition[k], b = o.partition[k + 1];
        if (y >= a && (y < b || (b == 1.0 && y == 1.0))) {
            if (x >= a && x <= b) {
                const double w = b - a;
                return partial2(*o.components[k], (x - a) / w, (y - a) / w);
            }
            return x > b ? PartialValue{1.0, false} : PartialValue{0.0, false};
        }
    }
    return indicator_partial(y, x);
}

namespace {

GridCopula grid_from_cdf(const CopulaDescriptor& d, int n) {
    // Inclusion-exclusion of the CDF over cell corners; one row of corner
    // values is kept at a time.
    std::vector<double> prev(static_cast<std::size_t>(n) + 1);
    std::vector<double> cur(static_cast<std::size_t>(n) + 1);
    std::vector<double> mass(static_cast<std::size_t>(n) * n);
    for (int j = 0; j <= n; ++j)
        prev[j] = 0.0;  // C(0, y) = 0
    for (int i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        cur[0] = 0.0;
        for (int j = 1; j <= n; ++j)
            cur[j] = eval_cdf(d, x, static_cast<double>(j) / n);
        for (int j = 1; j <= n; ++j) {
            mass[static_cast<std::size_t>(i - 1) * n + (j - 1)] =
                cur[j] - cur[j - 1] - prev[j] + prev[j - 1];
        }
        std::swap(prev, cur);
    }
    return GridCopula(n, std::move(mass));
}

GridCopula regrid(const GridCopula& g, int n) {
    if (g.n() == n) return g;
    // mass'[I][J] = sum_{i,j} mass[i][j] * overlap_x(I,i) * overlap_y(J,j),
    // exact for the checkerboard.
    const int m = g.n();
    auto overlaps = [&](int coarse) {
        // list of (fine cell, fraction of fine cell mass) per coarse cell
        std::vector<std::vector<std::pair<int, double>>> out(n);
        for (int I = 0; I < n; ++I) {
            const double lo = static_cast<double>(I) / n;
            const double hi = static_cast<double>(I + 1) / n;
            (void)coarse;
            int i0 = std::max(0, static_cast<int>(std::floor(lo * m)));
            int i1 = std::min(m - 1, static_cast<int>(std::ceil(hi * m)) - 1);
            for (int i = i0; i <= i1; ++i) {
                const double clo = static_cast<double>(i) / m;
                const double chi = static_cast<double>(i + 1) / m;
                const double frac =
                    (std::min(hi, chi) - std::max(lo, clo)) * m;
                if (frac > 0.0) out[I].emplace_back(i, frac);
            }
        }
        return out;
    };
    const auto ox = overlaps(n);
    std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
    for (int I = 0; I < n; ++I)
        for (const auto& [i, fx] : ox[I])
            for (int J = 0; J < n; ++J)
                for (const auto& [j, fy] : ox[J])
                    mass[static_cast<std::size_t>(I) * n + J] +=
                        fx * fy * g.mass(i, j);
    return GridCopula(n, std::move(mass));
}

}  // namespace

GridCopula to_grid(const CopulaDescriptor& d, int n) {
    if (n < 2) throw std::invalid_argument("to_grid: n must be >= 2");
    if (d.is_grid()) return regrid(d.as_grid(), n);
    if (d.is_shuffle())
        return GridCopula(n,
                          cd_cell_mass(PiecewiseAffineMap(d.as_shuffle()), n));
    if (d.is_cdmap()) {
        const auto& c = d.as_cdmap();
        GridCopula g(n, cd_cell_mass(c.map, n));
        return c.transposed ? g.transposed() : g;
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        const GridCopula l = to_grid(*c.left, n);
        const GridCopula r = to_grid(*c.right, n);
        std::vector<double> mass(static_cast<std::size_t>(n) * n);
        for (std::size_t k = 0; k < mass.size(); ++k)
            mass[k] = c.alpha * l.data()[k] + (1.0 - c.alpha) * r.data()[k];
        return GridCopula(n, std::move(mass));
    }
    if (d.is_ordinal()) {
        const auto& o = d.as_ordinal();
        // Aligned partitions place rescaled component grids on the diagonal
        // blocks exactly; otherwise fall back to CDF differences.
        bool aligned = true;
        for (double a : o.partition) {
            const double scaled = a * n;
            if (std::abs(scaled - std::round(scaled)) > 1e-12) aligned = false;
        }
        if (aligned) {
            std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
            for (std::size_t k = 0; k + 1 < o.partition.size(); ++k) {
                const int lo = static_cast<int>(std::round(o.partition[k] * n));
                const int hi =
                    static_cast<int>(std::round(o.partition[k + 1] * n));
                const int m = hi - lo;
                if (m <= 0) continue;
                if (m == 1) {
                    mass[static_cast<std::size_t>(lo) * n + lo] = 1.0 / n;
                    continue;
                }
                const GridCopula comp = to_grid(*o.components[k], m);
                const double w = static_cast<double>(m) / n;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        mass[static_cast<std::size_t>(lo + i) * n + (lo + j)] =
                            w * comp.mass(i, j);
            }
            return GridCopula(n, std::move(mass));
        }
    }
    return grid_from_cdf(d, n);
}

std::vector<SupportSegment> support_polyline(const IntervalExchange& s) {
    return s.support_segments();
}

}  // namespace copcal
