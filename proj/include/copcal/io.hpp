#pragma once

#include <string>

#include "copcal/dependence.hpp"
#include "copcal/descriptor.hpp"
#include "copcal/norms.hpp"
#include "copcal/shuffle_engine.hpp"

namespace copcal {

/// Descriptor wire format (JSON):
///   {"type":"grid","n":N,"mass":[[...]]}
///   {"type":"shuffle","pieces":[{"src":[a,b],"target":c,"slope":1|-1}]}
///   {"type":"param","name":"M"|"W"|"Pi"|"FGM","theta":t}
///   {"type":"convex","alpha":a,"left":...,"right":...}
///   {"type":"ordinal","partition":[...],"components":[...]}
///   {"type":"cdmap","pieces":[{"src":[a,b],"slope":s,"intercept":c}],
///    "transposed":false}
/// Reals carry full round-trip precision; schema violations throw with the
/// offending field path.
CopulaDescriptor descriptor_from_json(const std::string& json_text);
std::string descriptor_to_json(const CopulaDescriptor& d, int indent = 2);

/// Reads inline JSON (leading '{') or a file path.
CopulaDescriptor read_descriptor(const std::string& inline_or_path);
void write_descriptor(const CopulaDescriptor& d, const std::string& path);

std::string norm_report_to_json(const NormReport& rep);
std::string dependence_report_to_json(const DependenceReport& rep);
std::string validation_report_to_json(const ValidationReport& rep);
std::string invariance_report_to_json(const InvarianceReport& rep);

/// CSV "step,norm_sq" with step 0 carrying the initial norm.
std::string trace_to_csv(const DiagonalizationTrace& t);
/// CSV "iteration,best_norm_sq".
std::string search_trace_to_csv(const DependenceReport& rep);
/// CSV "x0,y0,x1,y1" per support segment.
std::string polyline_to_csv(const std::vector<SupportSegment>& segs);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace copcal
