#pragma once

#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/perm.hpp"

namespace qwalk {

// mapping[x] is the image of basis index x.
struct BasisPermutation {
    std::vector<int> mapping;
    std::string description;

    int size() const { return static_cast<int>(mapping.size()); }
    bool is_identity() const;
    Mat matrix() const;
};

BasisPermutation identity_basis_permutation(int dim, std::string description = "identity");
BasisPermutation compose(const BasisPermutation& a, const BasisPermutation& b);
BasisPermutation inverse(const BasisPermutation& a);

// Vertex image: the endpoint of the permuted BFS word; color c goes to dir_perm(c).
BasisPermutation direction_automorphism(const ColoredGraph& graph, const Permutation& dir_perm);
// |g,c> -> |a g, c> where a is given by its vertex.
BasisPermutation left_translation(const ColoredGraph& graph, int vertex_of_a);
BasisPermutation left_translation(const ColoredGraph& graph, const PermutationGroup& group, const Permutation& a);
// |v,c> -> |vertex_map[v], color_perm(c)>; the graph must be regular.
BasisPermutation lift_vertex_permutation(const ColoredGraph& graph, const std::vector<int>& vertex_map,
                                         const Permutation& color_perm, std::string description);

bool verify_automorphism(const BasisPermutation& sigma, const ColoredGraph& graph);
bool verify_automorphism(const BasisPermutation& sigma, const Mat& S);

// Closure of the generated group; throws if it exceeds max_order.
std::vector<BasisPermutation> close_group(const std::vector<BasisPermutation>& generators,
                                          std::size_t max_order = 200000);

struct OrbitBasis {
    int dim = 0;
    std::vector<std::vector<int>> orbits;  // each sorted; ordered by smallest member
    std::vector<int> orbit_of;

    int count() const { return static_cast<int>(orbits.size()); }
    const std::vector<int>& orbit(int k) const { return orbits[k]; }
    int representative(int k) const { return orbits[k].front(); }
    // D x m matrix whose columns are the normalized orbit states.
    Mat basis_matrix() const;
    Vec orbit_vector(int k) const;
    Vec coordinates(const Vec& full) const;
    Vec embed(const Vec& coords) const;

    static OrbitBasis from_partition(int dim, std::vector<std::vector<int>> blocks);
};

OrbitBasis compute_orbits(const std::vector<BasisPermutation>& reps, int dim);
Mat projector_PH(const OrbitBasis& orbits);

struct QuotientGraph {
    ColoredGraph graph;
    // Quotient flat index k is orbit k.
    std::vector<int> orbit_of_basis;
    std::vector<std::vector<int>> vertex_sets;
    std::vector<int> quotient_vertex_of_orbit;
};

QuotientGraph quotient_graph(const ColoredGraph& graph, const OrbitBasis& orbits);

// Orbit permutation induced by g; throws NotOrbitCompatible when g does not map orbits onto orbits.
std::vector<int> quotient_automorphism(const BasisPermutation& g, const OrbitBasis& orbits);

// Glued-trees subtree swaps acting on vertices; valid for the mirror seam only.
std::vector<BasisPermutation> glued_tree_swaps(const GluedTrees& gt);

}  // namespace qwalk
