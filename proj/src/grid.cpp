#include "copcal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace copcal {

GridCopula::GridCopula(int n, std::vector<double> mass)
    : n_(n), mass_(std::move(mass)) {
    if (n_ < 1) throw std::invalid_argument("grid: n must be >= 1");
    if (mass_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("grid: mass must be n*n entries");
}

GridCopula GridCopula::independent(int n) {
    return GridCopula(
        n, std::vector<double>(static_cast<std::size_t>(n) * n,
                               1.0 / (static_cast<double>(n) * n)));
}

bool GridCopula::check(double tol, std::vector<std::string>* failures) const {
    bool ok = true;
    auto fail = [&](const std::string& s) {
        ok = false;
        if (failures) failures->push_back(s);
    };
    const double want = 1.0 / n_;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_; ++j) {
            const double m = mass(i, j);
            if (m < -tol) fail("negative mass in cell (" + std::to_string(i) +
                               "," + std::to_string(j) + ")");
            row += m;
        }
        if (std::abs(row - want) > tol) {
            std::ostringstream msg;
            msg << "not doubly stochastic: row " << i << " sums to " << row
                << " (want " << want << ")";
            fail(msg.str());
        }
    }
    for (int j = 0; j < n_; ++j) {
        double col = 0.0;
        for (int i = 0; i < n_; ++i) col += mass(i, j);
        if (std::abs(col - want) > tol) {
            std::ostringstream msg;
            msg << "not doubly stochastic: column " << j << " sums to " << col
                << " (want " << want << ")";
            fail(msg.str());
        }
    }
    return ok;
}

double GridCopula::cdf(double x, double y) const {
    // sum over cells of mass * overlap fractions (bilinear cumulative mass)
    const double nx = x * n_, ny = y * n_;
    const int ix = std::min(n_ - 1, std::max(0, static_cast<int>(nx)));
    const int iy = std::min(n_ - 1, std::max(0, static_cast<int>(ny)));
    double total = 0.0;
    for (int i = 0; i <= ix; ++i) {
        const double fx = std::min(1.0, std::max(0.0, nx - i));
        if (fx <= 0.0) continue;
        for (int j = 0; j <= iy; ++j) {
            const double fy = std::min(1.0, std::max(0.0, ny - j));
            if (fy <= 0.0) continue;
            total += mass(i, j) * fx * fy;
        }
    }
    return total;
}

double GridCopula::partial1(double x, double y) const {
    int i = static_cast<int>(x * n_);
    i = std::min(n_ - 1, std::max(0, i));
    const double ny = y * n_;
    double v = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double fy = std::min(1.0, std::max(0.0, ny - j));
        if (fy <= 0.0) break;
        v += mass(i, j) * fy;
    }
    return v * n_;
}

double GridCopula::partial2(double x, double y) const {
    int j = static_cast<int>(y * n_);
    j = std::min(n_ - 1, std::max(0, j));
    const double nx = x * n_;
    double v = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double fx = std::min(1.0, std::max(0.0, nx - i));
        if (fx <= 0.0) break;
        v += mass(i, j) * fx;
    }
    return v * n_;
}

double GridCopula::norm_sq() const {
    // Within row i the conditional CDF n*sum_{j'<=j} m[i][j'] is affine in y
    // across each cell, running from P to Q; the exact integral of its square
    // over the cell is (P^2 + P*Q + Q^2)/(3n).
    double total = 0.0;
    const double inv_cell = 1.0 / (static_cast<double>(n_) * n_);
    for (int i = 0; i < n_; ++i) {
        double p = 0.0;
        for (int j = 0; j < n_; ++j) {
            const double q = p + n_ * mass(i, j);
            total += (p * p + p * q + q * q) / 3.0 * inv_cell;
            p = q;
        }
    }
    for (int j = 0; j < n_; ++j) {
        double p = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double q = p + n_ * mass(i, j);
            total += (p * p + p * q + q * q) / 3.0 * inv_cell;
            p = q;
        }
    }
    return total;
}

GridCopula GridCopula::transposed() const {
    std::vector<double> t(mass_.size());
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            t[static_cast<std::size_t>(j) * n_ + i] = mass(i, j);
    return GridCopula(n_, std::move(t));
}

double GridCopula::dist_sq(const GridCopula& a, const GridCopula& b) {
    if (a.n_ != b.n_)
        throw std::invalid_argument(
            "grid dist: resolution mismatch; re-grid one operand");
    const int n = a.n_;
    double total = 0.0;
    const double inv_cell = 1.0 / (static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) {
        double p = 0.0;
        for (int j = 0; j < n; ++j) {
            const double q = p + n * (a.mass(i, j) - b.mass(i, j));
            total += (p * p + p * q + q * q) / 3.0 * inv_cell;
            p = q;
        }
    }
    for (int j = 0; j < n; ++j) {
        double p = 0.0;
        for (int i = 0; i < n; ++i) {
            const double q = p + n * (a.mass(i, j) - b.mass(i, j));
            total += (p * p + p * q + q * q) / 3.0 * inv_cell;
            p = q;
        }
    }
    return total;
}

GridCopula GridCopula::star(const GridCopula& a, const GridCopula& b) {
    if (a.n_ != b.n_)
        throw std::invalid_argument(
            "grid star: resolution mismatch; re-grid one operand to match");
    const int n = a.n_;
    std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double aik = a.mass(i, k);
            if (aik == 0.0) continue;
            const double scaled = n * aik;
            const double* brow = &b.mass_[static_cast<std::size_t>(k) * n];
            double* crow = &c[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) crow[j] += scaled * brow[j];
        }
    }
    return GridCopula(n, std::move(c));
}

namespace {

// mu(X x J_j) for X an interval, accumulated into out[j] with weight of the
// overlap fraction of X with each x-cell.
void accumulate_interval_rows(const GridCopula& g, double lo, double hi,
                              std::vector<double>& out_row) {
    const int n = g.n();
    if (hi <= lo) return;
    int i0 = std::max(0, static_cast<int>(std::floor(lo * n)));
    int i1 = std::min(n - 1, static_cast<int>(std::ceil(hi * n)) - 1);
    for (int i = i0; i <= i1; ++i) {
        const double clo = static_cast<double>(i) / n;
        const double chi = static_cast<double>(i + 1) / n;
        const double frac = (std::min(hi, chi) - std::max(lo, clo)) * n;
        if (frac <= 0.0) continue;
        for (int j = 0; j < n; ++j) out_row[j] += frac * g.mass(i, j);
    }
}

}  // namespace

GridCopula GridCopula::shuffled_rows(const IntervalExchange& f) const {
    // mass'[i][j] = mu(f(I_i) x J_j); exact because mass is uniform in cells.
    const int n = n_;
    std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), 0.0);
        const double xlo = static_cast<double>(i) / n;
        const double xhi = static_cast<double>(i + 1) / n;
        for (const auto& p : f.pieces()) {
            const double lo = std::max(xlo, p.src_lo);
            const double hi = std::min(xhi, p.src_hi);
            if (hi - lo <= 0.0) continue;
            double ilo, ihi;
            if (p.slope > 0) {
                ilo = p.target + (lo - p.src_lo);
                ihi = p.target + (hi - p.src_lo);
            } else {
                ilo = p.target + (p.src_hi - hi);
                ihi = p.target + (p.src_hi - lo);
            }
            accumulate_interval_rows(*this, ilo, ihi, row);
        }
        for (int j = 0; j < n; ++j) out[idx(i, j)] = row[j];
    }
    return GridCopula(n, std::move(out));
}

GridCopula GridCopula::shuffled_cols(const IntervalExchange& f) const {
    return transposed().shuffled_rows(f.inverse()).transposed();
}

double GridCopula::max_abs_diff(const GridCopula& a, const GridCopula& b) {
    if (a.n_ != b.n_)
        throw std::invalid_argument("grid diff: resolution mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.mass_.size(); ++k)
        m = std::max(m, std::abs(a.mass_[k] - b.mass_[k]));
    return m;
}

}  // namespace copcal
