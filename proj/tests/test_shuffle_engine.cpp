#include <doctest.h>

#include <cmath>
#include <random>

#include "copcal/norms.hpp"
#include "copcal/shuffle_engine.hpp"
#include "copcal/star.hpp"
#include "test_support.hpp"

using namespace copcal;

TEST_CASE("sorting shuffle: worked cases") {
    // A = [0, 1/2]: already sorted
    CHECK(sorting_shuffle(IntervalUnion({{0.0, 0.5}})) ==
          IntervalExchange::identity());

    // A = [1/2, 1]: x - 1/2 on A, x + 1/2 off A
    const auto s = sorting_shuffle(IntervalUnion({{0.5, 1.0}}));
    CHECK(s(0.75) == doctest::Approx(0.25));
    CHECK(s(0.25) == doctest::Approx(0.75));
    CHECK(s == IntervalExchange::rotation(0.5));

    // A = [1/4,1/2] u [3/4,1]: offsets +1/2, -1/4, +1/4, -1/2
    const auto t =
        sorting_shuffle(IntervalUnion({{0.25, 0.5}, {0.75, 1.0}}));
    CHECK(t(0.1) == doctest::Approx(0.6));    // [0,1/4): +1/2
    CHECK(t(0.3) == doctest::Approx(0.05));   // [1/4,1/2): -1/4
    CHECK(t(0.6) == doctest::Approx(0.85));   // [1/2,3/4): +1/4
    CHECK(t(0.9) == doctest::Approx(0.4));    // [3/4,1]: -1/2
}

TEST_CASE("sorting shuffle: degenerate intervals dropped, always valid") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<Interval> parts;
        const int k = 1 + static_cast<int>(unif(rng) * 4);
        for (int i = 0; i < k; ++i) {
            double a = unif(rng), b = unif(rng);
            if (a > b) std::swap(a, b);
            parts.push_back({a, b});
        }
        parts.push_back({0.3, 0.3});  // degenerate
        const auto s = sorting_shuffle(IntervalUnion(std::move(parts)));
        CHECK(s.check(1e-9));
        for (const auto& p : s.pieces()) CHECK(p.slope == +1);
    }
}

TEST_CASE("selfsimilar: structure and exactness") {
    CHECK(selfsimilar(0) == IntervalExchange::identity());

    // level 1 flips the odd dyadic quarters
    const auto s1 = selfsimilar(1);
    REQUIRE(s1.piece_count() == 4);
    CHECK(s1(0.1) == doctest::Approx(0.1));
    CHECK(s1(0.3) == doctest::Approx(0.75 - 0.3));
    CHECK(s1(0.6) == doctest::Approx(0.6));
    CHECK(s1(0.9) == doctest::Approx(1.75 - 0.9));

    CHECK_THROWS_AS(selfsimilar(17), std::invalid_argument);
    CHECK_THROWS_AS(selfsimilar(-1), std::invalid_argument);

    // breakpoints are dyadic rationals, exact in double
    const auto s6 = selfsimilar(6);
    for (const auto& p : s6.pieces()) {
        CHECK(p.src_lo * 128 == std::floor(p.src_lo * 128));
        CHECK(p.target * 128 == std::floor(p.target * 128));
    }
}

TEST_CASE("selfsimilar: consecutive distances are exactly 2^-(n+2)") {
    for (int n = 1; n <= 8; ++n) {
        const double d = sobolev_dist_sq(
            CopulaDescriptor::shuffle(selfsimilar(n)),
            CopulaDescriptor::shuffle(selfsimilar(n - 1)));
        CHECK(d == std::pow(2.0, -(n + 2)));
    }
}

TEST_CASE("selfsimilar: Cauchy bound") {
    for (int m = 0; m <= 5; ++m) {
        for (int n = m + 1; n <= 9; n += 2) {
            const double d = std::sqrt(sobolev_dist_sq(
                CopulaDescriptor::shuffle(selfsimilar(n)),
                CopulaDescriptor::shuffle(selfsimilar(m))));
            const double bound =
                (std::pow(2.0, -0.5 * (m + 1)) - std::pow(2.0, -0.5 * (n + 1))) /
                (2.0 - std::sqrt(2.0));
            CHECK(d <= bound + 1e-12);
        }
    }
}

TEST_CASE("selfsimilar: left limit at 1/2 follows the alternating series") {
    // f_L(1/2-) is the L+1 term truncation of 1/2 - 1/4 + 1/8 - ..., which
    // converges to 1/3 within 2^-L.
    double expected = 0.0, term = 0.5;
    expected = term;  // one term
    for (int L = 1; L <= 12; ++L) {
        term *= -0.5;
        expected += term;  // L+1 terms
        const double left = selfsimilar(L).left_limit(0.5);
        CHECK(left == doctest::Approx(expected).epsilon(1e-15));
        CHECK(std::abs(left - 1.0 / 3.0) <= std::pow(2.0, -L));
    }
}

TEST_CASE("diagonalize: M needs no work") {
    const auto t = diagonalize(CopulaDescriptor::M(), 3);
    CHECK(t.initial_norm_sq == doctest::Approx(1.0));
    for (const auto& s : t.steps) {
        CHECK(s.shuffle == IntervalExchange::identity());
        CHECK(s.norm_sq_after == doctest::Approx(1.0));
    }
    CHECK(t.composed == IntervalExchange::identity());
}

TEST_CASE("diagonalize: half-swap reaches M in one step") {
    const auto half = IntervalExchange::rotation(0.5);
    const auto t = diagonalize(CopulaDescriptor::shuffle(half), 1);
    REQUIRE(t.steps.size() == 1);
    CHECK(t.steps[0].shuffle == half);  // S_1 = half-swap
    CHECK(t.steps[0].norm_sq_after == doctest::Approx(1.0));
    // S_1 * C = M exactly: composed support map is the identity
    const auto prod = star(CopulaDescriptor::shuffle(t.composed),
                           CopulaDescriptor::shuffle(half));
    CHECK(prod.copula.as_shuffle() == IntervalExchange::identity());
}

TEST_CASE("diagonalize: doubling map, exact scheme") {
    const auto c = CopulaDescriptor::cdmap(PiecewiseAffineMap::mod_map(2));
    const auto t = diagonalize(c, 6);
    CHECK_FALSE(t.grid_scheme);
    CHECK(t.initial_norm_sq == doctest::Approx(7.0 / 8.0).epsilon(1e-14));
    // each split halves the defect: ||B_k * C||^2 = 1 - 2^-k / 8
    double prev = t.initial_norm_sq;
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
        const double want = 1.0 - std::pow(2.0, -static_cast<int>(k) - 1) / 8.0;
        CHECK(t.steps[k].norm_sq_after == doctest::Approx(want).epsilon(1e-12));
        CHECK(t.steps[k].norm_sq_after >= prev - 1e-9);
        prev = t.steps[k].norm_sq_after;
    }
    CHECK(t.steps.back().norm_sq_after >= 0.95);
}

TEST_CASE("diagonalize: support confined to diagonal squares") {
    // After k steps the working map sends each dyadic block into itself.
    const auto c = CopulaDescriptor::cdmap(PiecewiseAffineMap::mod_map(2));
    const auto t = diagonalize(c, 4);
    PiecewiseAffineMap h = PiecewiseAffineMap::mod_map(2).compose_after(
        t.composed);
    const int blocks = 16;
    for (const auto& p : h.pieces()) {
        const double mid = 0.5 * (p.src_lo + p.src_hi);
        const int bx = std::min(blocks - 1, static_cast<int>(mid * blocks));
        const double im = 0.5 * (p.image_lo() + p.image_hi());
        const int by = std::min(blocks - 1, static_cast<int>(im * blocks));
        CHECK(bx == by);
    }
}

TEST_CASE("diagonalize: grid scheme on the doubling map") {
    const auto c = CopulaDescriptor::cdmap(PiecewiseAffineMap::mod_map(2));
    const auto t = diagonalize(CopulaDescriptor::grid(to_grid(c, 512)), 6);
    CHECK(t.grid_scheme);
    CHECK(t.initial_norm_sq == doctest::Approx(7.0 / 8.0).epsilon(2e-3));
    double prev = t.initial_norm_sq;
    for (const auto& s : t.steps) {
        CHECK(s.norm_sq_after >= prev - 1e-9);
        prev = s.norm_sq_after;
    }
    CHECK(t.steps.back().norm_sq_after >= 0.95);
}

TEST_CASE("diagonalize: depth exhausts grid resolution") {
    const auto g = CopulaDescriptor::grid(to_grid(CopulaDescriptor::Pi(), 16));
    CHECK_THROWS_WITH_AS(diagonalize(g, 5), doctest::Contains("resolution"),
                         std::invalid_argument);
    CHECK_NOTHROW(diagonalize(g, 4));
}

TEST_CASE("right_diagonalize mirrors the left trace") {
    const auto c = CopulaDescriptor::cdmap(PiecewiseAffineMap::mod_map(2));
    const auto left = diagonalize(c, 5);
    const auto right = right_diagonalize(transpose(c), 5);
    REQUIRE(left.steps.size() == right.steps.size());
    for (std::size_t k = 0; k < left.steps.size(); ++k) {
        CHECK(right.steps[k].norm_sq_after ==
              doctest::Approx(left.steps[k].norm_sq_after).epsilon(1e-12));
    }
    // quarter-cycle shuffle: depth 1 confines the support to the diagonal
    // halves, depth 2 reaches M exactly
    const auto q = IntervalExchange::rotation(0.25);
    const auto rt = right_diagonalize(CopulaDescriptor::shuffle(q), 2);
    CHECK(rt.steps[0].norm_sq_after == 1.0);
    const auto prod = star(CopulaDescriptor::shuffle(q),
                           CopulaDescriptor::shuffle(rt.composed));
    CHECK(prod.copula.as_shuffle() == IntervalExchange::identity());
}

TEST_CASE("right_diagonalize rejects nothing that diagonalize accepts transposed") {
    const auto c = CopulaDescriptor::cdmap(PiecewiseAffineMap::tent(), true);
    CHECK_THROWS_WITH_AS(diagonalize(c, 3),
                         doctest::Contains("right_diagonalize"),
                         std::invalid_argument);
    CHECK_NOTHROW(right_diagonalize(c, 3));
}

TEST_CASE("approx_by_shuffles: aligned shuffle returns itself") {
    const auto half = IntervalExchange::rotation(0.5);
    const auto a = approx_by_shuffles(CopulaDescriptor::shuffle(half), 2);
    CHECK(a.shuffle == half);
    CHECK(a.dist_sq == 0.0);
    CHECK_FALSE(a.extracted_from_grid);
}

TEST_CASE("approx_by_shuffles: certified and strictly decreasing in bins") {
    const auto c = CopulaDescriptor::shuffle(selfsimilar(6));
    double prev = 1e9;
    for (int bins : {4, 8, 16}) {
        const auto a = approx_by_shuffles(c, bins);
        // straight construction: every slope +1
        for (const auto& p : a.shuffle.pieces()) CHECK(p.slope == +1);
        // certified: bound dominates the exact distance
        const double exact = sobolev_dist_sq(
            c, CopulaDescriptor::shuffle(a.shuffle));
        CHECK(exact <= a.dist_sq + 1e-9);
        CHECK(a.dist_sq < prev);
        prev = a.dist_sq;
    }
}

TEST_CASE("approx_by_shuffles: rejects far-from-unit-norm inputs") {
    CHECK_THROWS_WITH_AS(approx_by_shuffles(CopulaDescriptor::Pi(), 8, 64),
                         doctest::Contains("unit-norm"),
                         std::invalid_argument);
}

TEST_CASE("approx_by_shuffles: grid extraction flagged and measure-preserving") {
    const auto g = CopulaDescriptor::grid(to_grid(CopulaDescriptor::M(), 64));
    const auto a = approx_by_shuffles(g, 8, 64);
    CHECK(a.extracted_from_grid);
    CHECK(a.shuffle.check(1e-9));
    // M's grid extracts to the identity transport
    CHECK(a.shuffle == IntervalExchange::identity());
    CHECK(a.dist_sq <= 1e-9);
}
