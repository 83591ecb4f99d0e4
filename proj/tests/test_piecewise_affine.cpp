#include <doctest.h>

#include <cmath>
#include <random>

#include "copcal/piecewise_affine.hpp"
#include "test_support.hpp"

using namespace copcal;

TEST_CASE("doubling map basics") {
    const auto h = PiecewiseAffineMap::mod_map(2);
    CHECK(h(0.3) == doctest::Approx(0.6));
    CHECK(h(0.75) == doctest::Approx(0.5));
    CHECK(h.measure_preserving(1e-12));
    const auto pre = h.preimage(0.0, 0.5);
    REQUIRE(pre.size() == 2);
    CHECK(pre[0].lo == doctest::Approx(0.0));
    CHECK(pre[0].hi == doctest::Approx(0.25));
    CHECK(pre[1].lo == doctest::Approx(0.5));
    CHECK(pre[1].hi == doctest::Approx(0.75));
}

TEST_CASE("tent map is measure-preserving, a stretched slope is not") {
    CHECK(PiecewiseAffineMap::tent().measure_preserving(1e-12));
    // x -> 2x on [0,1/2), x - 1/2 ... leaves coverage 1/2 on (1/2,1]
    const PiecewiseAffineMap bad(
        {{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, 1.0, -0.5}});
    std::vector<std::string> why;
    CHECK_FALSE(bad.measure_preserving(1e-9, &why));
    CHECK_FALSE(why.empty());
}

TEST_CASE("cd copula CDF of the doubling map") {
    const auto h = PiecewiseAffineMap::mod_map(2);
    // C(x,y) = m({t <= x : 2t mod 1 <= y})
    CHECK(cd_cdf(h, 1.0, 0.5) == doctest::Approx(0.5));
    CHECK(cd_cdf(h, 0.25, 0.5) == doctest::Approx(0.25));
    CHECK(cd_cdf(h, 0.5, 0.5) == doctest::Approx(0.25));
    CHECK(cd_cdf(h, 0.75, 0.5) == doctest::Approx(0.5));
    // uniform marginals
    CHECK(cd_cdf(h, 1.0, 0.37) == doctest::Approx(0.37));
    CHECK(cd_cdf(h, 0.37, 1.0) == doctest::Approx(0.37));
}

TEST_CASE("cd partial2 is the branch sum") {
    const auto h = PiecewiseAffineMap::mod_map(2);
    // branches at t = y/2 and t = (y+1)/2, each with weight 1/2
    CHECK(cd_partial2(h, 0.1, 0.4) == doctest::Approx(0.0));
    CHECK(cd_partial2(h, 0.3, 0.4) == doctest::Approx(0.5));
    CHECK(cd_partial2(h, 0.9, 0.4) == doctest::Approx(1.0));
}

TEST_CASE("exact Sobolev norm of complete dependence copulas") {
    // Doubling map: int int d1^2 = 1/2, int int d2^2 = 3/8.
    CHECK(cd_norm_sq(PiecewiseAffineMap::mod_map(2)) ==
          doctest::Approx(0.875).epsilon(1e-14));
    // Tent map has the same branch geometry.
    CHECK(cd_norm_sq(PiecewiseAffineMap::tent()) ==
          doctest::Approx(0.875).epsilon(1e-14));
    // mod 3: d1 side 1/2; d2 side (1/9 + 4/9)/3 + int(1/3 - y/3) = 19/54.
    CHECK(cd_norm_sq(PiecewiseAffineMap::mod_map(3)) ==
          doctest::Approx(0.5 + 19.0 / 54.0).epsilon(1e-14));
    // An invertible map is a shuffle: norm exactly 1.
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const PiecewiseAffineMap h(copcal_test::random_shuffle(rng));
        CHECK(cd_norm_sq(h) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("interval exchange round-trip through PiecewiseAffineMap") {
    std::mt19937_64 rng(5);
    const auto s = copcal_test::random_shuffle(rng);
    const PiecewiseAffineMap h(s);
    CHECK(h.is_interval_exchange());
    const auto back = h.as_interval_exchange();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double x = unif(rng);
        CHECK(back(x) == doctest::Approx(s(x)).epsilon(1e-14));
    }
}

TEST_CASE("composition with interval exchanges") {
    const auto h = PiecewiseAffineMap::mod_map(2);
    const auto half = IntervalExchange::rotation(0.5);
    const auto ha = h.compose_after(half);   // h(half(x)) = 2x mod 1
    const auto hb = h.compose_before(half);  // half(h(x))
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.001, 0.999);
    for (int k = 0; k < 200; ++k) {
        const double x = unif(rng);
        CHECK(ha(x) == doctest::Approx(h(half(x))).epsilon(1e-12));
        CHECK(hb(x) == doctest::Approx(half(h(x))).epsilon(1e-12));
    }
    CHECK(ha.measure_preserving(1e-9));
    CHECK(hb.measure_preserving(1e-9));
}

TEST_CASE("cd cell mass is doubly stochastic") {
    const auto h = PiecewiseAffineMap::mod_map(2);
    const int n = 8;
    const auto mass = cd_cell_mass(h, n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < n; ++j) {
            row += mass[static_cast<std::size_t>(i) * n + j];
            col += mass[static_cast<std::size_t>(j) * n + i];
        }
        CHECK(row == doctest::Approx(1.0 / n).epsilon(1e-12));
        CHECK(col == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
}
