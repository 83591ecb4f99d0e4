#pragma once

#include <string>
#include <utility>
#include <vector>

#include "copcal/grid.hpp"

namespace copcal {

struct SamplePairs {
    std::vector<std::pair<double, double>> rows;

    std::size_t size() const { return rows.size(); }
};

struct PseudoObservations {
    std::vector<std::pair<double, double>> points;  // strictly inside (0,1)^2
    bool ties_broken = false;  // duplicated values were ordered by input order
};

/// Rank transform: (rank(x_i)/(m+1), rank(y_i)/(m+1)) with ties broken by
/// stable input order.
PseudoObservations pseudo_observations(const SamplePairs& s);

struct EmpiricalGrid {
    GridCopula grid;
    int sweeps = 0;          // alternating rescaling sweeps used
    bool ties_broken = false;
};

/// Checkerboard empirical copula: histogram of the pseudo-observations on an
/// n x n grid followed by alternating row/column proportional rescaling until
/// doubly stochastic within 1e-9 (at most 1000 sweeps).  Throws when empty
/// rows or columns make the rescaling diverge (advice: lower n).
EmpiricalGrid checkerboard(const SamplePairs& s, int n);

/// Two numeric columns, comma or whitespace delimited, optional header line.
/// Rows that fail to parse abort with their line numbers.
SamplePairs read_samples_csv(const std::string& path);
SamplePairs parse_samples(const std::string& text);

}  // namespace copcal
