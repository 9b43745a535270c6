#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"
#include "qwalk/symmetry.hpp"
#include "qwalk/walk.hpp"

// Text specs for graphs, coins, subgroups and states, shared by the CLI and the acceptance runner.
namespace qwalk::config {

struct LoadedGraph {
    ColoredGraph graph;
    std::optional<GluedTrees> trees;
    io::Json spec;
};

std::vector<std::string> split(const std::string& s, char sep);
int parse_int(const std::string& s, const std::string& what);
// "s4" or "4"
int parse_group_degree(std::string g);

LoadedGraph cayley_graph(int n, const std::string& gens);
LoadedGraph hypercube_graph(int n);
LoadedGraph glued_graph(int n, long long seed);
// cayley:s3:(1,2);(2,3) | hypercube:3 | glued-trees:4[:seed] | path to a graph JSON file
LoadedGraph load_graph(const std::string& spec);

// canonical label, or a t-word followed from vertex 0
std::optional<int> resolve_vertex(const ColoredGraph& g, const std::string& text);
int require_vertex(const ColoredGraph& g, const std::string& text);

// "1", "-0.5", "1+2i", "-i", "3e-2-1e-1i"
cplx parse_amplitude(std::string s);

// grover | dft | custom:FILE
CoinFamily load_coin(const std::string& spec, io::Json& record);

struct Subgroup {
    std::vector<BasisPermutation> reps;         // on the (vertex, color) basis
    std::vector<BasisPermutation> vertex_reps;  // on vertices, for continuous walks
    io::Json record = io::Json::object();
};
// {"direction_permutations": [...], "left_translations": [labels], "glued_tree_swaps": true}
Subgroup subgroup_from_json(const io::Json& j, const LoadedGraph& lg);
Subgroup load_subgroup(const std::string& path, const LoadedGraph& lg);

// "vertex:amp,amp;vertex:amp" or "vertex" (uniform coin state) or "orbit:K"; normalized
Vec parse_initial(const std::string& spec, const ColoredGraph& g, const OrbitBasis* orbits);
std::vector<int> parse_finals(const std::string& spec, const ColoredGraph& g);

}  // namespace qwalk::config
