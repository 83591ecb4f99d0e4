#include "copcal/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace copcal {

namespace {

std::vector<int> ranks_of(const std::vector<double>& v, bool* ties) {
    const std::size_t m = v.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<int> rank(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        rank[order[pos]] = static_cast<int>(pos) + 1;
        if (pos > 0 && v[order[pos]] == v[order[pos - 1]]) *ties = true;
    }
    return rank;
}

}  // namespace

PseudoObservations pseudo_observations(const SamplePairs& s) {
    const std::size_t m = s.size();
    if (m < 2)
        throw std::invalid_argument(
            "pseudo_observations: need at least 2 sample pairs");
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = s.rows[i].first;
        ys[i] = s.rows[i].second;
    }
    PseudoObservations out;
    bool ties = false;
    const auto rx = ranks_of(xs, &ties);
    const auto ry = ranks_of(ys, &ties);
    out.ties_broken = ties;
    out.points.reserve(m);
    const double denom = static_cast<double>(m) + 1.0;
    for (std::size_t i = 0; i < m; ++i)
        out.points.emplace_back(rx[i] / denom, ry[i] / denom);
    return out;
}

EmpiricalGrid checkerboard(const SamplePairs& s, int n) {
    if (n < 2) throw std::invalid_argument("checkerboard: n must be >= 2");
    const PseudoObservations obs = pseudo_observations(s);
    const std::size_t m = obs.points.size();
    std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& [u, v] : obs.points) {
        const int i = std::min(n - 1, static_cast<int>(u * n));
        const int j = std::min(n - 1, static_cast<int>(v * n));
        mass[static_cast<std::size_t>(i) * n + j] += 1.0 / static_cast<double>(m);
    }

    // Alternating proportional rescaling toward row/column sums of 1/n.
    const double target = 1.0 / n;
    const double tol = 1e-9;
    int sweeps = 0;
    for (; sweeps < 1000; ++sweeps) {
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += mass[static_cast<std::size_t>(i) * n + j];
            if (row <= 0.0)
                throw std::runtime_error(
                    "checkerboard: empty row " + std::to_string(i) +
                    " makes rescaling diverge; lower n");
            const double f = target / row;
            for (int j = 0; j < n; ++j) mass[static_cast<std::size_t>(i) * n + j] *= f;
        }
        for (int j = 0; j < n; ++j) {
            double col = 0.0;
            for (int i = 0; i < n; ++i) col += mass[static_cast<std::size_t>(i) * n + j];
            if (col <= 0.0)
                throw std::runtime_error(
                    "checkerboard: empty column " + std::to_string(j) +
                    " makes rescaling diverge; lower n");
            const double f = target / col;
            for (int i = 0; i < n; ++i) mass[static_cast<std::size_t>(i) * n + j] *= f;
        }
        // After a column pass the columns are exact; check the rows.
        double row_dev = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += mass[static_cast<std::size_t>(i) * n + j];
            row_dev = std::max(row_dev, std::abs(row - target));
        }
        if (row_dev <= tol) {
            ++sweeps;
            break;
        }
    }
    GridCopula g(n, std::move(mass));
    std::vector<std::string> failures;
    if (!g.check(1e-9, &failures))
        throw std::runtime_error(
            "checkerboard: rescaling did not converge within 1000 sweeps; "
            "lower n");
    return {std::move(g), sweeps, obs.ties_broken};
}

SamplePairs parse_samples(const std::string& text) {
    SamplePairs out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<int> bad_lines;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream ls(cleaned);
        double x, y;
        if (ls >> x >> y) {
            out.rows.emplace_back(x, y);
            first_content_line = false;
            continue;
        }
        // Skip blank lines anywhere and one header line at the top.
        std::istringstream probe(cleaned);
        std::string token;
        if (!(probe >> token)) continue;  // blank
        if (first_content_line) {
            first_content_line = false;
            continue;  // header
        }
        bad_lines.push_back(lineno);
    }
    if (!bad_lines.empty()) {
        std::ostringstream msg;
        msg << "sample input: unparseable rows at line";
        if (bad_lines.size() > 1) msg << "s";
        for (int l : bad_lines) msg << " " << l;
        throw std::runtime_error(msg.str());
    }
    return out;
}

SamplePairs read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_samples(buf.str());
}

}  // namespace copcal
