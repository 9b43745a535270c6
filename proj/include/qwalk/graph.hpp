#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/perm.hpp"

namespace qwalk {

struct Arc {
    int v = 0;
    int c = 0;
    int w = 0;
    int c2 = 0;
    friend bool operator==(const Arc&, const Arc&) = default;
};

struct BasisIndex {
    int vertex = 0;
    int color = 0;
    int flat = 0;
};

// Colors at vertex v are 0..degree(v)-1. Flat basis: vertex-major, color-minor.
class ColoredGraph {
public:
    ColoredGraph() = default;
    ColoredGraph(int num_vertices, std::vector<Arc> arcs, std::vector<std::string> labels = {});

    int num_vertices() const { return num_vertices_; }
    int dim() const { return offsets_.empty() ? 0 : offsets_.back(); }
    int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
    int offset(int v) const { return offsets_[v]; }
    int flat(int v, int c) const { return offsets_[v] + c; }
    BasisIndex basis(int flat) const;
    bool is_regular() const;
    bool connected() const { return connected_; }

    const std::vector<Arc>& arcs() const { return arcs_; }
    // partner(x) is the flat index reached by following the arc out of x.
    int partner(int x) const { return partner_[x]; }
    const std::vector<int>& partner_map() const { return partner_; }
    int neighbor(int v, int c) const { return basis(partner_[flat(v, c)]).vertex; }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const { return labels_[v]; }
    std::optional<int> find_label(const std::string& label) const;

    // Color word reaching each vertex by BFS from vertex 0, colors tried in order.
    const std::vector<std::vector<int>>& vertex_words() const { return words_; }
    // Endpoint of following a color word from vertex start; nullopt if a color is absent.
    std::optional<int> follow(int start, const std::vector<int>& word) const;

private:
    int num_vertices_ = 0;
    std::vector<Arc> arcs_;
    std::vector<int> offsets_;
    std::vector<int> partner_;
    std::vector<int> vertex_of_;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> words_;
    bool connected_ = false;
};

ColoredGraph build_cayley(const PermutationGroup& group, const std::vector<Permutation>& generating_set);
ColoredGraph build_hypercube(int n);

// Column j holds 2^min(j, 2n-j) vertices; the center column is shared by both trees.
// seam[k] picks which center vertex hangs under right-tree slot k (identity = mirror gluing).
struct GluedTrees {
    ColoredGraph graph;
    int depth = 0;
    std::vector<std::vector<int>> columns;
    std::vector<int> seam;
};
GluedTrees build_glued_trees(int n, const std::vector<int>& seam = {});
std::vector<int> random_seam(int n, std::uint64_t seed);

Mat shift_matrix(const ColoredGraph& g);
Mat adjacency_matrix(const ColoredGraph& g);

std::string hypercube_label(int v, int n);

}  // namespace qwalk
