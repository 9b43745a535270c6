#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/hitting.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/symmetry.hpp"

namespace qwalk::io {

using Json = nlohmann::ordered_json;

// Doubles with 17 significant digits, keys in insertion order, two-space indent.
std::string dump(const Json& j);
std::string format_double(double x);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json graph_to_json(const ColoredGraph& g);
ColoredGraph graph_from_json(const Json& j);

Json orbits_to_json(const OrbitBasis& orbits, const ColoredGraph& g);
Json quotient_to_json(const QuotientGraph& q);
Json report_to_json(const HittingReport& r);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t x);

}  // namespace qwalk::io
