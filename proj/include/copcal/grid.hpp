#pragma once

#include <string>
#include <vector>

#include "copcal/interval_exchange.hpp"

namespace copcal {

/// Checkerboard copula: an n x n matrix of nonnegative cell masses, row i
/// covering x in [(i)/n,(i+1)/n) (0-based), column j likewise in y.  Every
/// row and column sums to 1/n (doubly stochastic).  The copula has uniform
/// density within each cell, so its CDF is the bilinear interpolation of the
/// cumulative mass and all integrals below are exact for this object.
class GridCopula {
public:
    GridCopula(int n, std::vector<double> mass);

    static GridCopula independent(int n);  // all cells 1/n^2

    int n() const { return n_; }
    double mass(int i, int j) const { return mass_[idx(i, j)]; }
    const std::vector<double>& data() const { return mass_; }

    bool check(double tol, std::vector<std::string>* failures = nullptr) const;

    double cdf(double x, double y) const;
    /// a.e. partial derivatives of the checkerboard (piecewise linear in the
    /// other coordinate); at an x cell boundary the right cell is used.
    double partial1(double x, double y) const;
    double partial2(double x, double y) const;

    /// Exact squared Sobolev norm of the checkerboard.  Within each cell the
    /// conditional CDF is affine, so per-cell Simpson integration of its
    /// square is exact.
    double norm_sq() const;

    GridCopula transposed() const;

    /// Exact squared Sobolev distance between two checkerboards on the same
    /// grid.
    static double dist_sq(const GridCopula& a, const GridCopula& b);

    /// Markov product of checkerboards: mass_C = n * (mass_A x mass_B).
    /// Exact; throws on resolution mismatch.
    static GridCopula star(const GridCopula& a, const GridCopula& b);

    /// Push-forward by a shuffle on the left: cell mass
    /// mu_C(f(I_i) x J_j) for the exact piece geometry of f.  Equals a row
    /// permutation when f is cell-aligned.
    GridCopula shuffled_rows(const IntervalExchange& f) const;
    /// Push-forward on the right: mu_C(I_i x f^{-1}(J_j)).
    GridCopula shuffled_cols(const IntervalExchange& f) const;

    /// Largest absolute cell difference.
    static double max_abs_diff(const GridCopula& a, const GridCopula& b);

private:
    int n_;
    std::vector<double> mass_;

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * n_ + j;
    }
};

}  // namespace copcal
