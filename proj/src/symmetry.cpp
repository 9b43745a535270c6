#include "qwalk/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

namespace {

bool is_bijection(const std::vector<int>& m) {
    std::vector<char> seen(m.size(), 0);
    for (int x : m) {
        if (x < 0 || x >= static_cast<int>(m.size()) || seen[static_cast<std::size_t>(x)]) return false;
        seen[static_cast<std::size_t>(x)] = 1;
    }
    return true;
}

void require_word_walkable(const ColoredGraph& g) {
    if (!g.connected()) throw InvalidArgument("graph is not connected; word-based automorphisms need a connected graph");
}

BasisPermutation checked(BasisPermutation sigma, const ColoredGraph& g) {
    if (!verify_automorphism(sigma, g))
        throw NotAnAutomorphism(sigma.description + " does not preserve the shift operator");
    return sigma;
}

}  // namespace

bool BasisPermutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (mapping[i] != i) return false;
    return true;
}

Mat BasisPermutation::matrix() const {
    Mat p = Mat::Zero(size(), size());
    for (int i = 0; i < size(); ++i) p(mapping[i], i) = 1.0;
    return p;
}

BasisPermutation identity_basis_permutation(int dim, std::string description) {
    BasisPermutation p{std::vector<int>(static_cast<std::size_t>(dim)), std::move(description)};
    std::iota(p.mapping.begin(), p.mapping.end(), 0);
    return p;
}

BasisPermutation compose(const BasisPermutation& a, const BasisPermutation& b) {
    if (a.size() != b.size()) throw InvalidArgument("basis permutation size mismatch");
    BasisPermutation r{std::vector<int>(b.mapping.size()), a.description + " * " + b.description};
    for (int i = 0; i < b.size(); ++i) r.mapping[i] = a.mapping[b.mapping[i]];
    return r;
}

BasisPermutation inverse(const BasisPermutation& a) {
    BasisPermutation r{std::vector<int>(a.mapping.size()), "inverse of " + a.description};
    for (int i = 0; i < a.size(); ++i) r.mapping[a.mapping[i]] = i;
    return r;
}

BasisPermutation direction_automorphism(const ColoredGraph& graph, const Permutation& dir_perm) {
    require_word_walkable(graph);
    const int d = dir_perm.size();
    for (int v = 0; v < graph.num_vertices(); ++v)
        if (graph.degree(v) != d)
            throw InvalidArgument("direction permutation acts on " + std::to_string(d) +
                                  " colors but vertex " + graph.label(v) + " has degree " +
                                  std::to_string(graph.degree(v)));
    std::string desc = "direction-perm " + (dir_perm.is_identity() ? std::string("()") : dir_perm.to_cycles());
    std::vector<int> vmap(static_cast<std::size_t>(graph.num_vertices()));
    for (int v = 0; v < graph.num_vertices(); ++v) {
        std::vector<int> word = graph.vertex_words()[v];
        for (int& c : word) c = dir_perm(c);
        vmap[v] = *graph.follow(0, word);
    }
    BasisPermutation sigma{std::vector<int>(static_cast<std::size_t>(graph.dim())), desc};
    for (int v = 0; v < graph.num_vertices(); ++v)
        for (int c = 0; c < d; ++c) sigma.mapping[graph.flat(v, c)] = graph.flat(vmap[v], dir_perm(c));
    return checked(std::move(sigma), graph);
}

BasisPermutation left_translation(const ColoredGraph& graph, int vertex_of_a) {
    require_word_walkable(graph);
    if (vertex_of_a < 0 || vertex_of_a >= graph.num_vertices()) throw InvalidArgument("translation vertex out of range");
    BasisPermutation sigma{std::vector<int>(static_cast<std::size_t>(graph.dim())),
                           "left-translation " + graph.label(vertex_of_a)};
    for (int v = 0; v < graph.num_vertices(); ++v) {
        auto w = graph.follow(vertex_of_a, graph.vertex_words()[v]);
        if (!w || graph.degree(*w) != graph.degree(v))
            throw NotAnAutomorphism(sigma.description + " does not preserve the shift operator");
        for (int c = 0; c < graph.degree(v); ++c) sigma.mapping[graph.flat(v, c)] = graph.flat(*w, c);
    }
    return checked(std::move(sigma), graph);
}

BasisPermutation left_translation(const ColoredGraph& graph, const PermutationGroup& group, const Permutation& a) {
    auto idx = group.index_of(a);
    if (!idx) throw InvalidArgument("element " + a.to_cycles() + " is not in the group");
    if (static_cast<int>(group.order()) != graph.num_vertices())
        throw InvalidArgument("group order differs from the vertex count");
    return left_translation(graph, static_cast<int>(*idx));
}

BasisPermutation lift_vertex_permutation(const ColoredGraph& graph, const std::vector<int>& vertex_map,
                                         const Permutation& color_perm, std::string description) {
    if (!graph.is_regular() || graph.degree(0) != color_perm.size())
        throw InvalidArgument("lift_vertex_permutation needs a regular graph matching the color permutation");
    if (static_cast<int>(vertex_map.size()) != graph.num_vertices() || !is_bijection(vertex_map))
        throw InvalidArgument("vertex map is not a bijection");
    BasisPermutation sigma{std::vector<int>(static_cast<std::size_t>(graph.dim())), std::move(description)};
    for (int v = 0; v < graph.num_vertices(); ++v)
        for (int c = 0; c < color_perm.size(); ++c) sigma.mapping[graph.flat(v, c)] = graph.flat(vertex_map[v], color_perm(c));
    return sigma;
}

bool verify_automorphism(const BasisPermutation& sigma, const ColoredGraph& graph) {
    if (sigma.size() != graph.dim()) throw InvalidArgument("basis permutation dimension mismatch");
    if (!is_bijection(sigma.mapping)) return false;
    for (int x = 0; x < graph.dim(); ++x)
        if (graph.partner(sigma.mapping[x]) != sigma.mapping[graph.partner(x)]) return false;
    return true;
}

bool verify_automorphism(const BasisPermutation& sigma, const Mat& S) {
    if (S.rows() != S.cols() || sigma.size() != S.rows()) throw InvalidArgument("basis permutation dimension mismatch");
    if (!is_bijection(sigma.mapping)) return false;
    return kernels::permutation_commutator_max(S, sigma.mapping) == 0.0;
}

std::vector<BasisPermutation> close_group(const std::vector<BasisPermutation>& generators, std::size_t max_order) {
    if (generators.empty()) throw InvalidArgument("close_group: no generators");
    const int dim = generators.front().size();
    for (const auto& g : generators)
        if (g.size() != dim) throw InvalidArgument("close_group: dimension mismatch");
    std::vector<BasisPermutation> elements{identity_basis_permutation(dim)};
    std::set<std::vector<int>> seen{elements.front().mapping};
    for (std::size_t k = 0; k < elements.size(); ++k) {
        for (const auto& g : generators) {
            BasisPermutation h = compose(elements[k], g);
            if (!seen.insert(h.mapping).second) continue;
            if (elements.size() >= max_order) throw InvalidArgument("subgroup closure exceeds the order limit");
            h.description = "element " + std::to_string(elements.size());
            elements.push_back(std::move(h));
        }
    }
    return elements;
}

Mat OrbitBasis::basis_matrix() const {
    Mat b = Mat::Zero(dim, count());
    for (int k = 0; k < count(); ++k) {
        double a = 1.0 / std::sqrt(static_cast<double>(orbits[k].size()));
        for (int x : orbits[k]) b(x, k) = a;
    }
    return b;
}

Vec OrbitBasis::orbit_vector(int k) const {
    Vec v = Vec::Zero(dim);
    double a = 1.0 / std::sqrt(static_cast<double>(orbits[k].size()));
    for (int x : orbits[k]) v(x) = a;
    return v;
}

Vec OrbitBasis::coordinates(const Vec& full) const {
    if (full.size() != dim) throw InvalidArgument("state dimension mismatch");
    Vec c = Vec::Zero(count());
    for (int k = 0; k < count(); ++k) {
        cplx s = 0.0;
        for (int x : orbits[k]) s += full(x);
        c(k) = s / std::sqrt(static_cast<double>(orbits[k].size()));
    }
    return c;
}

Vec OrbitBasis::embed(const Vec& coords) const {
    if (coords.size() != count()) throw InvalidArgument("coordinate dimension mismatch");
    Vec v = Vec::Zero(dim);
    for (int k = 0; k < count(); ++k) {
        double a = 1.0 / std::sqrt(static_cast<double>(orbits[k].size()));
        for (int x : orbits[k]) v(x) = coords(k) * a;
    }
    return v;
}

OrbitBasis OrbitBasis::from_partition(int dim, std::vector<std::vector<int>> blocks) {
    OrbitBasis ob;
    ob.dim = dim;
    ob.orbit_of.assign(static_cast<std::size_t>(dim), -1);
    for (auto& b : blocks) {
        if (b.empty()) throw InvalidArgument("empty block in partition");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        for (int x : blocks[k]) {
            if (x < 0 || x >= dim || ob.orbit_of[x] != -1) throw InvalidArgument("blocks do not partition the basis");
            ob.orbit_of[x] = static_cast<int>(k);
        }
    }
    for (int x : ob.orbit_of)
        if (x == -1) throw InvalidArgument("blocks do not cover the basis");
    ob.orbits = std::move(blocks);
    return ob;
}

OrbitBasis compute_orbits(const std::vector<BasisPermutation>& reps, int dim) {
    std::vector<int> parent(static_cast<std::size_t>(dim));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& r : reps) {
        if (r.size() != dim) throw InvalidArgument("orbit generator " + r.description + " has the wrong dimension");
        for (int x = 0; x < dim; ++x) {
            int a = find(x), b = find(r.mapping[x]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int x = 0; x < dim; ++x) groups[find(x)].push_back(x);
    std::vector<std::vector<int>> blocks;
    for (auto& [root, members] : groups) blocks.push_back(std::move(members));
    return OrbitBasis::from_partition(dim, std::move(blocks));
}

Mat projector_PH(const OrbitBasis& orbits) {
    Mat p = Mat::Zero(orbits.dim, orbits.dim);
    for (const auto& o : orbits.orbits) {
        double a = 1.0 / static_cast<double>(o.size());
        for (int x : o)
            for (int y : o) p(x, y) = a;
    }
    return p;
}

QuotientGraph quotient_graph(const ColoredGraph& graph, const OrbitBasis& orbits) {
    if (orbits.dim != graph.dim()) throw InvalidArgument("orbit basis dimension differs from the graph");
    const int m = orbits.count();
    std::vector<std::vector<int>> vsets(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        std::set<int> vs;
        for (int x : orbits.orbit(k)) vs.insert(graph.basis(x).vertex);
        vsets[k].assign(vs.begin(), vs.end());
    }

    QuotientGraph q;
    q.orbit_of_basis = orbits.orbit_of;
    q.quotient_vertex_of_orbit.assign(static_cast<std::size_t>(m), -1);
    std::vector<int> qvertex_of_vertex(static_cast<std::size_t>(graph.num_vertices()), -1);
    std::vector<int> color_in_qvertex(static_cast<std::size_t>(m), 0);
    std::vector<int> qdegree;
    for (int k = 0; k < m; ++k) {
        int first = qvertex_of_vertex[vsets[k].front()];
        if (first == -1) {
            first = static_cast<int>(q.vertex_sets.size());
            for (int v : vsets[k]) {
                if (qvertex_of_vertex[v] != -1)
                    throw InvalidArgument("orbit vertex sets overlap without coinciding; orbits inconsistent with graph");
                qvertex_of_vertex[v] = first;
            }
            q.vertex_sets.push_back(vsets[k]);
            qdegree.push_back(0);
        } else if (q.vertex_sets[first] != vsets[k]) {
            throw InvalidArgument("orbit vertex sets overlap without coinciding; orbits inconsistent with graph");
        }
        q.quotient_vertex_of_orbit[k] = first;
        color_in_qvertex[k] = qdegree[first]++;
    }
    for (int k = 1; k < m; ++k)
        if (q.quotient_vertex_of_orbit[k] < q.quotient_vertex_of_orbit[k - 1])
            throw InvalidArgument("orbit order does not group quotient vertices contiguously");

    std::vector<Arc> arcs;
    for (int k = 0; k < m; ++k) {
        int target = orbits.orbit_of[graph.partner(orbits.representative(k))];
        for (int x : orbits.orbit(k))
            if (orbits.orbit_of[graph.partner(x)] != target)
                throw InvalidArgument("orbit is not mapped onto a single orbit by the shift; orbits inconsistent with graph");
        if (orbits.orbit(target).size() != orbits.orbit(k).size())
            throw InvalidArgument("connected orbits differ in size; orbits inconsistent with graph");
        arcs.push_back({q.quotient_vertex_of_orbit[k], color_in_qvertex[k], q.quotient_vertex_of_orbit[target],
                        color_in_qvertex[target]});
    }
    std::vector<std::string> labels;
    for (const auto& vs : q.vertex_sets) {
        const std::string& l = graph.label(vs.front());
        labels.push_back(vs.size() == 1 ? l : "[" + l + "]");
    }
    q.graph = ColoredGraph(static_cast<int>(q.vertex_sets.size()), std::move(arcs), std::move(labels));
    return q;
}

std::vector<int> quotient_automorphism(const BasisPermutation& g, const OrbitBasis& orbits) {
    if (g.size() != orbits.dim) throw InvalidArgument("basis permutation dimension mismatch");
    std::vector<int> image(static_cast<std::size_t>(orbits.count()));
    for (int k = 0; k < orbits.count(); ++k) {
        int j = orbits.orbit_of[g.mapping[orbits.representative(k)]];
        for (int x : orbits.orbit(k))
            if (orbits.orbit_of[g.mapping[x]] != j)
                throw NotOrbitCompatible(g.description + " splits orbit " + std::to_string(k));
        if (orbits.orbit(j).size() != orbits.orbit(k).size())
            throw NotOrbitCompatible(g.description + " maps orbit " + std::to_string(k) + " into a larger orbit");
        image[k] = j;
    }
    return image;
}

std::vector<BasisPermutation> glued_tree_swaps(const GluedTrees& gt) {
    for (std::size_t k = 0; k < gt.seam.size(); ++k)
        if (gt.seam[k] != static_cast<int>(k))
            throw InvalidArgument("subtree swaps are automorphisms of the mirror-seam glued trees only");
    const int n = gt.depth;
    const int nv = gt.graph.num_vertices();
    const Mat a = adjacency_matrix(gt.graph);
    std::vector<BasisPermutation> out;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < (1 << j); ++k) {
            BasisPermutation sigma = identity_basis_permutation(nv, "subtree swap at c" + std::to_string(j) + "." +
                                                                        std::to_string(k));
            for (int col = 0; col <= 2 * n; ++col) {
                int depth = std::min(col, 2 * n - col);
                if (depth <= j) continue;
                int shift = depth - j;
                for (int p = 0; p < (1 << depth); ++p) {
                    if ((p >> shift) != k) continue;
                    sigma.mapping[gt.columns[col][p]] = gt.columns[col][p ^ (1 << (shift - 1))];
                }
            }
            if (kernels::permutation_commutator_max(a, sigma.mapping) != 0.0)
                throw NotAnAutomorphism(sigma.description + " does not preserve adjacency");
            out.push_back(std::move(sigma));
        }
    }
    return out;
}

}  // namespace qwalk
