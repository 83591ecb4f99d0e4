#include "copcal/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace copcal {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw std::runtime_error("descriptor schema: " + path + ": " + what);
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<double>();
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(path + "." + key, "missing");
    return *it;
}

CopulaDescriptor parse_descriptor(const json& j, const std::string& path) {
    const json& type = require_field(j, "type", path);
    if (!type.is_string()) schema_error(path + ".type", "expected a string");
    const std::string t = type.get<std::string>();

    if (t == "grid") {
        const json& jn = require_field(j, "n", path);
        if (!jn.is_number_integer() || jn.get<int>() < 1)
            schema_error(path + ".n", "expected a positive integer");
        const int n = jn.get<int>();
        const json& jm = require_field(j, "mass", path);
        if (!jm.is_array() || static_cast<int>(jm.size()) != n)
            schema_error(path + ".mass",
                         "expected " + std::to_string(n) + " rows");
        std::vector<double> mass;
        mass.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            const json& row = jm[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                schema_error(path + ".mass[" + std::to_string(i) + "]",
                             "expected " + std::to_string(n) + " entries");
            for (int k = 0; k < n; ++k)
                mass.push_back(require_number(
                    row[static_cast<std::size_t>(k)],
                    path + ".mass[" + std::to_string(i) + "][" +
                        std::to_string(k) + "]"));
        }
        return CopulaDescriptor::grid(GridCopula(n, std::move(mass)));
    }
    if (t == "shuffle") {
        const json& jp = require_field(j, "pieces", path);
        if (!jp.is_array() || jp.empty())
            schema_error(path + ".pieces", "expected a nonempty array");
        std::vector<ExchangePiece> pieces;
        for (std::size_t i = 0; i < jp.size(); ++i) {
            const std::string pp = path + ".pieces[" + std::to_string(i) + "]";
            const json& src = require_field(jp[i], "src", pp);
            if (!src.is_array() || src.size() != 2)
                schema_error(pp + ".src", "expected [a,b]");
            ExchangePiece piece;
            piece.src_lo = require_number(src[0], pp + ".src[0]");
            piece.src_hi = require_number(src[1], pp + ".src[1]");
            piece.target =
                require_number(require_field(jp[i], "target", pp), pp + ".target");
            const json& js = require_field(jp[i], "slope", pp);
            if (!js.is_number_integer() ||
                (js.get<int>() != 1 && js.get<int>() != -1))
                schema_error(pp + ".slope", "expected 1 or -1");
            piece.slope = js.get<int>();
            pieces.push_back(piece);
        }
        return CopulaDescriptor::shuffle(IntervalExchange(std::move(pieces)));
    }
    if (t == "cdmap") {
        const json& jp = require_field(j, "pieces", path);
        if (!jp.is_array() || jp.empty())
            schema_error(path + ".pieces", "expected a nonempty array");
        std::vector<AffinePiece> pieces;
        for (std::size_t i = 0; i < jp.size(); ++i) {
            const std::string pp = path + ".pieces[" + std::to_string(i) + "]";
            const json& src = require_field(jp[i], "src", pp);
            if (!src.is_array() || src.size() != 2)
                schema_error(pp + ".src", "expected [a,b]");
            AffinePiece piece;
            piece.src_lo = require_number(src[0], pp + ".src[0]");
            piece.src_hi = require_number(src[1], pp + ".src[1]");
            piece.slope =
                require_number(require_field(jp[i], "slope", pp), pp + ".slope");
            piece.intercept = require_number(
                require_field(jp[i], "intercept", pp), pp + ".intercept");
            pieces.push_back(piece);
        }
        bool transposed = false;
        if (auto it = j.find("transposed"); it != j.end()) {
            if (!it->is_boolean())
                schema_error(path + ".transposed", "expected a boolean");
            transposed = it->get<bool>();
        }
        return CopulaDescriptor::cdmap(PiecewiseAffineMap(std::move(pieces)),
                                       transposed);
    }
    if (t == "param") {
        const json& jn = require_field(j, "name", path);
        if (!jn.is_string()) schema_error(path + ".name", "expected a string");
        const std::string name = jn.get<std::string>();
        if (name == "M") return CopulaDescriptor::M();
        if (name == "W") return CopulaDescriptor::W();
        if (name == "Pi") return CopulaDescriptor::Pi();
        if (name == "FGM") {
            const double theta = require_number(
                require_field(j, "theta", path), path + ".theta");
            return CopulaDescriptor::fgm(theta);
        }
        schema_error(path + ".name", "unknown family '" + name + "'");
    }
    if (t == "convex") {
        const double alpha = require_number(require_field(j, "alpha", path),
                                            path + ".alpha");
        CopulaDescriptor left =
            parse_descriptor(require_field(j, "left", path), path + ".left");
        CopulaDescriptor right =
            parse_descriptor(require_field(j, "right", path), path + ".right");
        return CopulaDescriptor::convex(alpha, std::move(left),
                                        std::move(right));
    }
    if (t == "ordinal") {
        const json& jp = require_field(j, "partition", path);
        if (!jp.is_array() || jp.size() < 2)
            schema_error(path + ".partition", "expected at least 2 points");
        std::vector<double> partition;
        for (std::size_t i = 0; i < jp.size(); ++i)
            partition.push_back(require_number(
                jp[i], path + ".partition[" + std::to_string(i) + "]"));
        const json& jc = require_field(j, "components", path);
        if (!jc.is_array() || jc.size() + 1 != jp.size())
            schema_error(path + ".components",
                         "expected one component per partition interval");
        std::vector<CopulaDescriptor> comps;
        for (std::size_t i = 0; i < jc.size(); ++i)
            comps.push_back(parse_descriptor(
                jc[i], path + ".components[" + std::to_string(i) + "]"));
        return CopulaDescriptor::ordinal(std::move(partition),
                                         std::move(comps));
    }
    schema_error(path + ".type", "unknown type '" + t + "'");
}

json descriptor_json(const CopulaDescriptor& d) {
    json j;
    if (d.is_grid()) {
        const auto& g = d.as_grid();
        j["type"] = "grid";
        j["n"] = g.n();
        json rows = json::array();
        for (int i = 0; i < g.n(); ++i) {
            json row = json::array();
            for (int k = 0; k < g.n(); ++k) row.push_back(g.mass(i, k));
            rows.push_back(std::move(row));
        }
        j["mass"] = std::move(rows);
        return j;
    }
    if (d.is_shuffle()) {
        j["type"] = "shuffle";
        json ps = json::array();
        for (const auto& p : d.as_shuffle().pieces()) {
            ps.push_back({{"src", {p.src_lo, p.src_hi}},
                          {"target", p.target},
                          {"slope", p.slope}});
        }
        j["pieces"] = std::move(ps);
        return j;
    }
    if (d.is_cdmap()) {
        const auto& c = d.as_cdmap();
        j["type"] = "cdmap";
        json ps = json::array();
        for (const auto& p : c.map.pieces()) {
            ps.push_back({{"src", {p.src_lo, p.src_hi}},
                          {"slope", p.slope},
                          {"intercept", p.intercept}});
        }
        j["pieces"] = std::move(ps);
        j["transposed"] = c.transposed;
        return j;
    }
    if (d.is_parametric()) {
        const auto& p = d.as_parametric();
        j["type"] = "param";
        switch (p.family) {
            case Parametric::Family::M: j["name"] = "M"; break;
            case Parametric::Family::W: j["name"] = "W"; break;
            case Parametric::Family::Pi: j["name"] = "Pi"; break;
            default:
                j["name"] = "FGM";
                j["theta"] = p.theta;
        }
        return j;
    }
    if (d.is_convex()) {
        const auto& c = d.as_convex();
        j["type"] = "convex";
        j["alpha"] = c.alpha;
        j["left"] = descriptor_json(*c.left);
        j["right"] = descriptor_json(*c.right);
        return j;
    }
    const auto& o = d.as_ordinal();
    j["type"] = "ordinal";
    j["partition"] = o.partition;
    json comps = json::array();
    for (const auto& c : o.components) comps.push_back(descriptor_json(*c));
    j["components"] = std::move(comps);
    return j;
}

}  // namespace

CopulaDescriptor descriptor_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("descriptor: invalid JSON: ") +
                                 e.what());
    }
    return parse_descriptor(j, "$");
}

std::string descriptor_to_json(const CopulaDescriptor& d, int indent) {
    return descriptor_json(d).dump(indent);
}

CopulaDescriptor read_descriptor(const std::string& inline_or_path) {
    std::string text = inline_or_path;
    // Sniff: inline JSON starts with '{' after whitespace.
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
        std::ifstream in(inline_or_path);
        if (!in)
            throw std::runtime_error("cannot open descriptor file: " +
                                     inline_or_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return descriptor_from_json(text);
}

void write_descriptor(const CopulaDescriptor& d, const std::string& path) {
    write_text_file(path, descriptor_to_json(d) + "\n");
}

std::string norm_report_to_json(const NormReport& rep) {
    json j;
    j["norm_sq"] = rep.norm_sq;
    j["scheme"] = rep.scheme_name();
    j["bounds_ok"] = rep.bounds_ok;
    return j.dump(2);
}

std::string dependence_report_to_json(const DependenceReport& rep) {
    json j;
    j["omega"] = rep.omega;
    j["omega_star_lb"] = rep.omega_star_lb;
    j["seed"] = rep.seed;
    j["grid_n"] = rep.grid_n;
    j["budget"] = rep.budget;
    j["depth"] = rep.depth;
    j["witness_left"] =
        descriptor_json(CopulaDescriptor::shuffle(rep.witness_left));
    j["witness_right"] =
        descriptor_json(CopulaDescriptor::shuffle(rep.witness_right));
    json tr = json::array();
    for (const auto& [it, val] : rep.trace)
        tr.push_back({{"iteration", it}, {"best_norm_sq", val}});
    j["trace"] = std::move(tr);
    return j.dump(2);
}

std::string validation_report_to_json(const ValidationReport& rep) {
    json j;
    j["ok"] = rep.ok;
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(
            {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    return j.dump(2);
}

std::string invariance_report_to_json(const InvarianceReport& rep) {
    json j;
    j["original_is_pi"] = rep.original_is_pi;
    j["shuffled_is_pi"] = rep.shuffled_is_pi;
    j["independence_preserved"] = rep.independence_preserved;
    j["mcd_preserved"] = rep.mcd_preserved;
    j["norm_sq_original"] = rep.norm_sq_original;
    j["norm_sq_shuffled"] = rep.norm_sq_shuffled;
    j["omega_star_lb_original"] = rep.omega_star_lb_original;
    j["omega_star_lb_shuffled"] = rep.omega_star_lb_shuffled;
    j["lb_exceeds_search_noise"] = rep.lb_exceeds_search_noise;
    return j.dump(2);
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string trace_to_csv(const DiagonalizationTrace& t) {
    std::ostringstream out;
    out << "step,norm_sq\n";
    out << 0 << "," << format_double(t.initial_norm_sq) << "\n";
    for (std::size_t k = 0; k < t.steps.size(); ++k)
        out << (k + 1) << "," << format_double(t.steps[k].norm_sq_after)
            << "\n";
    return out.str();
}

std::string search_trace_to_csv(const DependenceReport& rep) {
    std::ostringstream out;
    out << "iteration,best_norm_sq\n";
    for (const auto& [it, val] : rep.trace)
        out << it << "," << format_double(val) << "\n";
    return out.str();
}

std::string polyline_to_csv(const std::vector<SupportSegment>& segs) {
    std::ostringstream out;
    out << "x0,y0,x1,y1\n";
    for (const auto& s : segs)
        out << format_double(s.x0) << "," << format_double(s.y0) << ","
            << format_double(s.x1) << "," << format_double(s.y1) << "\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace copcal
