#include <doctest.h>

#include <cmath>
#include <random>

#include "copcal/dependence.hpp"
#include "copcal/empirical.hpp"
#include "test_support.hpp"

using namespace copcal;

TEST_CASE("pseudo observations: rank transform") {
    {
        const SamplePairs s{{{10.0, 1.0}, {20.0, 2.0}}};
        const auto obs = pseudo_observations(s);
        CHECK(obs.points[0].first == doctest::Approx(1.0 / 3.0));
        CHECK(obs.points[0].second == doctest::Approx(1.0 / 3.0));
        CHECK(obs.points[1].first == doctest::Approx(2.0 / 3.0));
        CHECK_FALSE(obs.ties_broken);
    }
    {
        const SamplePairs s{{{5.0, 9.0}, {7.0, 3.0}}};
        const auto obs = pseudo_observations(s);
        CHECK(obs.points[0].first == doctest::Approx(1.0 / 3.0));
        CHECK(obs.points[0].second == doctest::Approx(2.0 / 3.0));
        CHECK(obs.points[1].first == doctest::Approx(2.0 / 3.0));
        CHECK(obs.points[1].second == doctest::Approx(1.0 / 3.0));
    }
    {
        const SamplePairs s{{{5.0, 1.0}, {5.0, 2.0}, {6.0, 3.0}}};
        CHECK(pseudo_observations(s).ties_broken);
    }
    CHECK_THROWS_AS(pseudo_observations(SamplePairs{{{1.0, 2.0}}}),
                    std::invalid_argument);
}

TEST_CASE("pseudo observations lie strictly inside (0,1)^2") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 3.0);
    SamplePairs s;
    for (int i = 0; i < 500; ++i) s.rows.emplace_back(gauss(rng), gauss(rng));
    for (const auto& [u, v] : pseudo_observations(s).points) {
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("checkerboard: four diagonal points at n = 2") {
    const SamplePairs s{{{0.1, 0.1}, {0.3, 0.3}, {0.6, 0.6}, {0.9, 0.9}}};
    const auto e = checkerboard(s, 2);
    CHECK(e.grid.mass(0, 0) == doctest::Approx(0.5));
    CHECK(e.grid.mass(0, 1) == doctest::Approx(0.0));
    CHECK(e.grid.mass(1, 0) == doctest::Approx(0.0));
    CHECK(e.grid.mass(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("checkerboard output is doubly stochastic or errors") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SamplePairs s;
    for (int i = 0; i < 400; ++i) s.rows.emplace_back(unif(rng), unif(rng));
    const auto e = checkerboard(s, 8);
    CHECK(e.grid.check(1e-9));

    // comonotone data on a fine grid leaves empty cells off the diagonal but
    // every row/column occupied; extreme n with few samples must throw
    SamplePairs tiny;
    for (int i = 0; i < 5; ++i) tiny.rows.emplace_back(i, i);
    CHECK_THROWS_WITH_AS(checkerboard(tiny, 8), doctest::Contains("lower n"),
                         std::runtime_error);
}

TEST_CASE("comonotone sample reaches the checkerboard-M norm") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SamplePairs s;
    for (int i = 0; i < 1000; ++i) {
        const double u = unif(rng);
        s.rows.emplace_back(u, u);
    }
    const auto e = checkerboard(s, 16);
    // exact comonotone ranks fill the diagonal: norm = 1 - 1/(3*16)
    CHECK(e.grid.norm_sq() == doctest::Approx(1.0 - 1.0 / 48.0).epsilon(1e-9));
}

TEST_CASE("sample parsing: delimiters, header, error lines") {
    const auto s = parse_samples("x,y\n1,2\n3 4\n5,6\n");
    CHECK(s.size() == 3);
    CHECK(s.rows[1].first == doctest::Approx(3.0));

    CHECK_THROWS_WITH_AS(parse_samples("1,2\nbad,row\n3,4\nalso bad\n"),
                         doctest::Contains("lines 2 4"), std::runtime_error);
    CHECK_NOTHROW(parse_samples("1,2\n\n3,4\n"));
}
