#include <doctest.h>

#include <cmath>
#include <random>

#include "copcal/norms.hpp"
#include "copcal/star.hpp"
#include "test_support.hpp"

using namespace copcal;

TEST_CASE("Pi is the null element, M the identity") {
    for (const auto& c : copcal_test::corpus(5, 4)) {
        const auto pc = star(CopulaDescriptor::Pi(), c, 64);
        CHECK(GridCopula::max_abs_diff(to_grid(pc.copula, 64),
                                       to_grid(CopulaDescriptor::Pi(), 64)) <=
              1e-10);
        const auto cp = star(c, CopulaDescriptor::Pi(), 64);
        CHECK(cp.copula.kind() == "Pi");

        const auto mc = star(CopulaDescriptor::M(), c, 64);
        CHECK(GridCopula::max_abs_diff(to_grid(mc.copula, 64),
                                       to_grid(c, 64)) <= 1e-12);
        const auto cm = star(c, CopulaDescriptor::M(), 64);
        CHECK(GridCopula::max_abs_diff(to_grid(cm.copula, 64),
                                       to_grid(c, 64)) <= 1e-12);
    }
}

TEST_CASE("null/identity also hold through the raw grid algebra") {
    // Independent of the monoid shortcuts: the checkerboard product with the
    // Pi and M grids reproduces them exactly.
    const GridCopula c = to_grid(CopulaDescriptor::fgm(0.7), 32);
    const GridCopula pi = to_grid(CopulaDescriptor::Pi(), 32);
    const GridCopula m = to_grid(CopulaDescriptor::M(), 32);
    CHECK(GridCopula::max_abs_diff(GridCopula::star(pi, c), pi) <= 1e-15);
    CHECK(GridCopula::max_abs_diff(GridCopula::star(c, pi), pi) <= 1e-15);
    CHECK(GridCopula::max_abs_diff(GridCopula::star(m, c), c) <= 1e-15);
    CHECK(GridCopula::max_abs_diff(GridCopula::star(c, m), c) <= 1e-15);
}

TEST_CASE("shuffle composition orientation fixed by the grid oracle") {
    // half-swap * quarter-cycle: the product's support map must match the
    // exact discretized product on a grid.
    const auto a = IntervalExchange::rotation(0.5);
    const auto b = IntervalExchange::rotation(0.25);
    const auto ab = star(CopulaDescriptor::shuffle(a),
                         CopulaDescriptor::shuffle(b), 8);
    REQUIRE(ab.exact);
    const GridCopula lhs = to_grid(ab.copula, 8);
    const GridCopula rhs = GridCopula::star(
        to_grid(CopulaDescriptor::shuffle(a), 8),
        to_grid(CopulaDescriptor::shuffle(b), 8));
    CHECK(GridCopula::max_abs_diff(lhs, rhs) <= 1e-15);
    // and equals the rotation by 3/4 = f_b o f_a
    CHECK(ab.copula.as_shuffle() == IntervalExchange::rotation(0.75));
}

TEST_CASE("star(S_1/2, FGM(1)) evaluates exactly at cell corners") {
    const auto s = CopulaDescriptor::shuffle(IntervalExchange::rotation(0.5));
    const auto r = star(s, CopulaDescriptor::fgm(1.0), 256);
    // C(0.75, 0.5) - C(0.5, 0.5) for the FGM closed form
    CHECK(eval_cdf(r.copula, 0.25, 0.5) ==
          doctest::Approx(0.109375).epsilon(1e-12));
}

TEST_CASE("unit-norm closure: products of shuffles are shuffles of norm 1") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = copcal_test::random_shuffle(rng);
        const auto v = copcal_test::random_shuffle(rng);
        const auto uv = star(CopulaDescriptor::shuffle(u),
                             CopulaDescriptor::shuffle(v));
        REQUIRE(uv.exact);
        REQUIRE(uv.copula.is_shuffle());
        CHECK(uv.copula.as_shuffle().check(1e-9));
        CHECK(sobolev_norm_sq(uv.copula).norm_sq == 1.0);
    }
}

TEST_CASE("grid star preserves double stochasticity exactly") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const GridCopula a =
            to_grid(CopulaDescriptor::shuffle(copcal_test::random_shuffle(rng)),
                    32);
        const GridCopula b = to_grid(CopulaDescriptor::fgm(0.9), 32);
        CHECK(GridCopula::star(a, b).check(1e-12));
    }
}

TEST_CASE("associativity on 32-grids") {
    std::mt19937_64 rng(19);
    auto all = copcal_test::corpus(3, 4);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int rep = 0; rep < 20; ++rep) {
        const GridCopula a = to_grid(all[pick(rng)], 32);
        const GridCopula b = to_grid(all[pick(rng)], 32);
        const GridCopula c = to_grid(all[pick(rng)], 32);
        const GridCopula lhs =
            GridCopula::star(GridCopula::star(a, b), c);
        const GridCopula rhs =
            GridCopula::star(a, GridCopula::star(b, c));
        CHECK(GridCopula::max_abs_diff(lhs, rhs) <= 1e-9);
    }
}

TEST_CASE("transpose: involution, symmetry, anti-homomorphism") {
    CHECK(transpose(CopulaDescriptor::Pi()).kind() == "Pi");

    const auto half = IntervalExchange::rotation(0.5);
    CHECK(transpose(CopulaDescriptor::shuffle(half)).as_shuffle() == half);

    std::mt19937_64 rng(23);
    auto all = copcal_test::corpus(29, 4);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int rep = 0; rep < 12; ++rep) {
        const auto& a = all[pick(rng)];
        const auto& b = all[pick(rng)];
        const GridCopula ga = to_grid(a, 32), gb = to_grid(b, 32);
        const GridCopula lhs = GridCopula::star(ga, gb).transposed();
        const GridCopula rhs =
            GridCopula::star(gb.transposed(), ga.transposed());
        CHECK(GridCopula::max_abs_diff(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("push-forward consistency: cell-aligned shuffle is an exact row permutation") {
    std::mt19937_64 rng(37);
    const int n = 16;
    const auto s = copcal_test::random_dyadic_shuffle(rng, 4);  // 16 cells
    const GridCopula d = to_grid(CopulaDescriptor::fgm(-0.6), n);
    const GridCopula pushed = d.shuffled_rows(s);
    // direct permutation: row i of result = row at the cell s maps I_i onto
    for (int i = 0; i < n; ++i) {
        const double mid = (i + 0.5) / n;
        const int tgt = static_cast<int>(s(mid) * n);
        for (int j = 0; j < n; ++j)
            CHECK(pushed.mass(i, j) == d.mass(tgt, j));
    }
}

TEST_CASE("star results pass validation") {
    std::mt19937_64 rng(53);
    const auto pairs = {
        std::make_pair(CopulaDescriptor::shuffle(copcal_test::random_shuffle(rng)),
                       CopulaDescriptor::fgm(0.8)),
        std::make_pair(CopulaDescriptor::fgm(0.3), CopulaDescriptor::fgm(-0.9)),
        std::make_pair(CopulaDescriptor::shuffle(copcal_test::random_shuffle(rng)),
                       CopulaDescriptor::cdmap(PiecewiseAffineMap::mod_map(2))),
        std::make_pair(CopulaDescriptor::cdmap(PiecewiseAffineMap::tent(), true),
                       CopulaDescriptor::W()),
    };
    for (const auto& [a, b] : pairs) {
        const auto r = star(a, b, 64);
        CHECK(validate(r.copula).ok);
    }
}

TEST_CASE("mixed representations fall back to the requested grid") {
    const auto r = star(CopulaDescriptor::fgm(0.4), CopulaDescriptor::fgm(0.2), 64);
    CHECK_FALSE(r.exact);
    CHECK(r.grid_n == 64);
    CHECK(r.copula.is_grid());
}

TEST_CASE("grid resolution mismatch is an error with re-gridding advice") {
    const auto a = CopulaDescriptor::grid(to_grid(CopulaDescriptor::Pi(), 16));
    const auto b = CopulaDescriptor::grid(to_grid(CopulaDescriptor::Pi(), 32));
    CHECK_THROWS_WITH_AS(star(a, b), doctest::Contains("re-grid"),
                         std::invalid_argument);
}

TEST_CASE("shuffle_of: left and right") {
    // shuffle_of(Pi, t) = Pi for any t
    const auto t = IntervalExchange::rotation(0.25);
    CHECK(shuffle_of(CopulaDescriptor::Pi(), t, Side::Left).copula.kind() ==
          "Pi");
    CHECK(shuffle_of(CopulaDescriptor::Pi(), t, Side::Right).copula.kind() ==
          "Pi");
    // shuffle_of(M, t, left) = copula of t itself
    const auto r = shuffle_of(CopulaDescriptor::M(), t, Side::Left);
    CHECK(r.copula.as_exact_shuffle().value() == t);
}

TEST_CASE("star distributes over convex combinations") {
    const auto c = CopulaDescriptor::convex(
        0.25, CopulaDescriptor::shuffle(IntervalExchange::rotation(0.5)),
        CopulaDescriptor::Pi());
    const auto u = CopulaDescriptor::shuffle(IntervalExchange::rotation(0.25));
    const auto r = star(u, c, 32);
    REQUIRE(r.copula.is_convex());
    CHECK(r.exact);
    CHECK(r.copula.as_convex().left->is_shuffle());
    CHECK(r.copula.as_convex().right->kind() == "Pi");
}
