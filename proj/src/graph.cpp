#include "qwalk/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

#include "qwalk/errors.hpp"

namespace qwalk {

ColoredGraph::ColoredGraph(int num_vertices, std::vector<Arc> arcs, std::vector<std::string> labels)
    : num_vertices_(num_vertices), arcs_(std::move(arcs)), labels_(std::move(labels)) {
    if (num_vertices_ <= 0) throw InvalidArgument("graph needs at least one vertex");
    std::vector<int> deg(static_cast<std::size_t>(num_vertices_), 0);
    for (const Arc& a : arcs_) {
        if (a.v < 0 || a.v >= num_vertices_ || a.w < 0 || a.w >= num_vertices_)
            throw InvalidArgument("arc endpoint out of range");
        if (a.c < 0 || a.c2 < 0) throw InvalidArgument("negative color index");
        deg[a.v] = std::max(deg[a.v], a.c + 1);
    }
    offsets_.assign(static_cast<std::size_t>(num_vertices_) + 1, 0);
    for (int v = 0; v < num_vertices_; ++v) {
        if (deg[v] == 0) throw InvalidArgument("vertex " + std::to_string(v) + " has degree 0");
        offsets_[v + 1] = offsets_[v] + deg[v];
    }
    partner_.assign(static_cast<std::size_t>(dim()), -1);
    for (const Arc& a : arcs_) {
        if (a.c2 >= deg[a.w]) throw InvalidArgument("arc return color exceeds degree of target");
        int x = flat(a.v, a.c);
        if (partner_[x] != -1)
            throw InvalidArgument("color " + std::to_string(a.c) + " repeated at vertex " + std::to_string(a.v));
        partner_[x] = flat(a.w, a.c2);
    }
    for (int x = 0; x < dim(); ++x) {
        if (partner_[x] == -1) throw InvalidArgument("colors at a vertex are not contiguous from 0");
    }
    for (int x = 0; x < dim(); ++x) {
        if (partner_[partner_[x]] != x) throw InvalidArgument("arc pairing is not an involution");
    }
    vertex_of_.resize(static_cast<std::size_t>(dim()));
    for (int v = 0; v < num_vertices_; ++v)
        for (int x = offsets_[v]; x < offsets_[v + 1]; ++x) vertex_of_[x] = v;

    if (labels_.empty()) {
        for (int v = 0; v < num_vertices_; ++v) labels_.push_back(std::to_string(v));
    } else if (static_cast<int>(labels_.size()) != num_vertices_) {
        throw InvalidArgument("label count differs from vertex count");
    }

    words_.assign(static_cast<std::size_t>(num_vertices_), {});
    std::vector<char> seen(static_cast<std::size_t>(num_vertices_), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int c = 0; c < degree(v); ++c) {
            int w = vertex_of_[partner_[flat(v, c)]];
            if (seen[w]) continue;
            seen[w] = 1;
            words_[w] = words_[v];
            words_[w].push_back(c);
            queue.push_back(w);
        }
    }
    connected_ = std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
}

BasisIndex ColoredGraph::basis(int x) const {
    int v = vertex_of_[x];
    return {v, x - offsets_[v], x};
}

bool ColoredGraph::is_regular() const {
    for (int v = 1; v < num_vertices_; ++v)
        if (degree(v) != degree(0)) return false;
    return true;
}

std::optional<int> ColoredGraph::find_label(const std::string& label) const {
    for (int v = 0; v < num_vertices_; ++v)
        if (labels_[v] == label) return v;
    return std::nullopt;
}

std::optional<int> ColoredGraph::follow(int start, const std::vector<int>& word) const {
    int v = start;
    for (int c : word) {
        if (c < 0 || c >= degree(v)) return std::nullopt;
        v = vertex_of_[partner_[flat(v, c)]];
    }
    return v;
}

ColoredGraph build_cayley(const PermutationGroup& group, const std::vector<Permutation>& generating_set) {
    if (generating_set.empty()) throw InvalidArgument("Cayley graph needs a non-empty generating set");
    const int d = static_cast<int>(generating_set.size());
    std::vector<int> inv_color(static_cast<std::size_t>(d), -1);
    for (int i = 0; i < d; ++i) {
        if (generating_set[i].size() != group.n) throw InvalidArgument("generator size differs from group");
        if (!group.index_of(generating_set[i]))
            throw InvalidArgument("generator " + generating_set[i].to_cycles() + " is not in the group");
        if (generating_set[i].is_identity()) throw InvalidArgument("identity generator would create a self-loop");
        for (int j = 0; j < i; ++j)
            if (generating_set[i] == generating_set[j]) throw InvalidArgument("repeated generator");
        Permutation inv = inverse(generating_set[i]);
        for (int j = 0; j < d; ++j)
            if (generating_set[j] == inv) inv_color[i] = j;
        if (inv_color[i] < 0)
            throw InvalidArgument("generating set not closed under inverse: " + generating_set[i].to_cycles());
    }

    const int nv = static_cast<int>(group.order());
    std::vector<Arc> arcs;
    arcs.reserve(static_cast<std::size_t>(nv * d));
    for (int g = 0; g < nv; ++g) {
        for (int i = 0; i < d; ++i) {
            int h = static_cast<int>(*group.index_of(compose(group.elements[g], generating_set[i])));
            arcs.push_back({g, i, h, inv_color[i]});
        }
    }
    ColoredGraph probe(nv, arcs);
    std::vector<std::string> labels;
    for (int v = 0; v < nv; ++v) {
        const auto& word = probe.vertex_words()[v];
        std::string s;
        for (int c : word) s += "t" + std::to_string(c + 1);
        labels.push_back(s.empty() ? "e" : s);
    }
    return ColoredGraph(nv, std::move(arcs), std::move(labels));
}

std::string hypercube_label(int v, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int b = 0; b < n; ++b)
        if ((v >> b) & 1) s[static_cast<std::size_t>(n - 1 - b)] = '1';
    return s;
}

ColoredGraph build_hypercube(int n) {
    if (n < 1) throw InvalidArgument("hypercube dimension must be >= 1");
    if (n > 20) throw InvalidArgument("hypercube dimension too large");
    const int nv = 1 << n;
    std::vector<Arc> arcs;
    std::vector<std::string> labels;
    for (int v = 0; v < nv; ++v) {
        labels.push_back(hypercube_label(v, n));
        for (int d = 0; d < n; ++d) arcs.push_back({v, d, v ^ (1 << d), d});
    }
    return ColoredGraph(nv, std::move(arcs), std::move(labels));
}

GluedTrees build_glued_trees(int n, const std::vector<int>& seam) {
    if (n < 1) throw InvalidArgument("glued trees depth must be >= 1");
    if (n > 16) throw InvalidArgument("glued trees depth too large");
    const int center = 1 << n;
    std::vector<int> perm = seam;
    if (perm.empty()) {
        perm.resize(static_cast<std::size_t>(center));
        std::iota(perm.begin(), perm.end(), 0);
    }
    if (static_cast<int>(perm.size()) != center) throw InvalidArgument("seam size must be 2^n");
    static_cast<void>(Permutation(perm));

    GluedTrees gt;
    gt.depth = n;
    gt.seam = perm;
    int next = 0;
    std::vector<std::string> labels;
    for (int j = 0; j <= 2 * n; ++j) {
        int size = 1 << std::min(j, 2 * n - j);
        std::vector<int> col;
        for (int k = 0; k < size; ++k) {
            col.push_back(next++);
            labels.push_back("c" + std::to_string(j) + "." + std::to_string(k));
        }
        gt.columns.push_back(std::move(col));
    }
    const int nv = next;
    std::vector<std::vector<int>> lower(static_cast<std::size_t>(nv)), upper(static_cast<std::size_t>(nv));
    auto link = [&](int a, int b) {  // a in column j, b in column j+1
        upper[a].push_back(b);
        lower[b].push_back(a);
    };
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < (1 << (j + 1)); ++k) link(gt.columns[j][k >> 1], gt.columns[j + 1][k]);
    for (int k = 0; k < center; ++k) link(gt.columns[n][perm[k]], gt.columns[n + 1][k >> 1]);
    for (int j = n + 1; j < 2 * n; ++j)
        for (int k = 0; k < (1 << (2 * n - j)); ++k) link(gt.columns[j][k], gt.columns[j + 1][k >> 1]);
    for (auto& l : lower) std::sort(l.begin(), l.end());
    for (auto& u : upper) std::sort(u.begin(), u.end());

    std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) {
        nbrs[v] = lower[v];
        nbrs[v].insert(nbrs[v].end(), upper[v].begin(), upper[v].end());
    }
    std::vector<Arc> arcs;
    for (int v = 0; v < nv; ++v) {
        for (int c = 0; c < static_cast<int>(nbrs[v].size()); ++c) {
            int w = nbrs[v][c];
            auto it = std::find(nbrs[w].begin(), nbrs[w].end(), v);
            arcs.push_back({v, c, w, static_cast<int>(it - nbrs[w].begin())});
        }
    }
    gt.graph = ColoredGraph(nv, std::move(arcs), std::move(labels));
    return gt;
}

std::vector<int> random_seam(int n, std::uint64_t seed) {
    std::vector<int> perm(static_cast<std::size_t>(1) << n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = perm.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

Mat shift_matrix(const ColoredGraph& g) {
    Mat s = Mat::Zero(g.dim(), g.dim());
    for (int x = 0; x < g.dim(); ++x) s(g.partner(x), x) = 1.0;
    return s;
}

Mat adjacency_matrix(const ColoredGraph& g) {
    Mat a = Mat::Zero(g.num_vertices(), g.num_vertices());
    for (const Arc& arc : g.arcs()) a(arc.v, arc.w) += 1.0;
    return a;
}

}  // namespace qwalk
