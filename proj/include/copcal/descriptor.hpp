#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "copcal/grid.hpp"
#include "copcal/interval_exchange.hpp"
#include "copcal/piecewise_affine.hpp"

namespace copcal {

class CopulaDescriptor;
using DescriptorPtr = std::shared_ptr<const CopulaDescriptor>;

/// Parametric families: M (upper Frechet bound), W (lower bound),
/// Pi (independence), FGM with theta in [-1,1]:
/// C(x,y) = xy + theta*x*y*(1-x)*(1-y).
struct Parametric {
    enum class Family { M, W, Pi, FGM };
    Family family = Family::Pi;
    double theta = 0.0;  // FGM only
};

/// Complete dependence copula supported on the graph of a measure-preserving
/// piecewise-affine map h.  transposed=false means Y = h(X) (left
/// invertible); transposed=true is the coordinate swap X = h(Y).
struct CdMap {
    PiecewiseAffineMap map;
    bool transposed = false;
};

/// alpha*left + (1-alpha)*right.
struct ConvexCombo {
    double alpha = 0.5;
    DescriptorPtr left;
    DescriptorPtr right;
};

/// Ordinal sum: component k, rescaled to the diagonal square
/// [a_{k-1},a_k]^2, carries the mass there; off the diagonal squares the
/// copula coincides with M.
struct OrdinalSum {
    std::vector<double> partition;  // 0 = a_0 < ... < a_k = 1
    std::vector<DescriptorPtr> components;
};

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationCheck> checks;

    void add(const std::string& name, bool passed, std::string detail = "") {
        ok = ok && passed;
        checks.push_back({name, passed, std::move(detail)});
    }
};

/// Value of a partial derivative together with the a.e. caveat: on_support is
/// set when the evaluation point lies exactly on a shuffle/CD support graph
/// (a null set) and the right-limit convention was applied.
struct PartialValue {
    double value = 0.0;
    bool on_support = false;
};

/// A copula named by one of the representations above.  Immutable; all
/// operations are pure.
class CopulaDescriptor {
public:
    using Variant =
        std::variant<GridCopula, IntervalExchange, CdMap, Parametric,
                     ConvexCombo, OrdinalSum>;

    explicit CopulaDescriptor(Variant v) : v_(std::move(v)) {}

    static CopulaDescriptor grid(GridCopula g);
    static CopulaDescriptor shuffle(IntervalExchange s);
    static CopulaDescriptor cdmap(PiecewiseAffineMap h, bool transposed = false);
    static CopulaDescriptor M();
    static CopulaDescriptor W();
    static CopulaDescriptor Pi();
    static CopulaDescriptor fgm(double theta);
    static CopulaDescriptor convex(double alpha, CopulaDescriptor left,
                                   CopulaDescriptor right);
    static CopulaDescriptor ordinal(std::vector<double> partition,
                                    std::vector<CopulaDescriptor> components);

    const Variant& value() const { return v_; }

    bool is_grid() const { return std::holds_alternative<GridCopula>(v_); }
    bool is_shuffle() const {
        return std::holds_alternative<IntervalExchange>(v_);
    }
    bool is_cdmap() const { return std::holds_alternative<CdMap>(v_); }
    bool is_parametric() const {
        return std::holds_alternative<Parametric>(v_);
    }
    bool is_convex() const { return std::holds_alternative<ConvexCombo>(v_); }
    bool is_ordinal() const { return std::holds_alternative<OrdinalSum>(v_); }

    const GridCopula& as_grid() const { return std::get<GridCopula>(v_); }
    const IntervalExchange& as_shuffle() const {
        return std::get<IntervalExchange>(v_);
    }
    const CdMap& as_cdmap() const { return std::get<CdMap>(v_); }
    const Parametric& as_parametric() const {
        return std::get<Parametric>(v_);
    }
    const ConvexCombo& as_convex() const {
        return std::get<ConvexCombo>(v_);
    }
    const OrdinalSum& as_ordinal() const { return std::get<OrdinalSum>(v_); }

    /// The parametric M and W are shuffles (identity and reflection); returns
    /// the interval exchange when this descriptor is exactly one.
    std::optional<IntervalExchange> as_exact_shuffle() const;

    std::string kind() const;

private:
    Variant v_;
};

ValidationReport validate(const CopulaDescriptor& d);

double eval_cdf(const CopulaDescriptor& d, double x, double y);
PartialValue partial1(const CopulaDescriptor& d, double x, double y);
PartialValue partial2(const CopulaDescriptor& d, double x, double y);

/// Exact cell masses at resolution n via the representation's own geometry
/// (piece geometry for shuffles and CD maps, closed-form CDF differences for
/// parametric families, recursion for convex/ordinal).
GridCopula to_grid(const CopulaDescriptor& d, int n);

std::vector<SupportSegment> support_polyline(const IntervalExchange& s);

}  // namespace copcal
