#include "qwalk/perm.hpp"

#include <cctype>
#include <deque>

#include "qwalk/errors.hpp"

namespace qwalk {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int x : images_) {
        if (x < 0 || x >= size() || seen[static_cast<std::size_t>(x)])
            throw InvalidArgument("permutation images are not a bijection");
        seen[static_cast<std::size_t>(x)] = 1;
    }
}

Permutation Permutation::identity(int n) {
    if (n < 0) throw InvalidArgument("negative permutation size");
    std::vector<int> im(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) im[static_cast<std::size_t>(i)] = i;
    return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if ((*this)(i) != i) return false;
    return true;
}

std::string Permutation::to_cycles() const {
    std::string out;
    std::vector<char> done(images_.size(), 0);
    for (int i = 0; i < size(); ++i) {
        if (done[static_cast<std::size_t>(i)] || (*this)(i) == i) continue;
        out += '(';
        int j = i;
        bool first = true;
        while (!done[static_cast<std::size_t>(j)]) {
            done[static_cast<std::size_t>(j)] = 1;
            if (!first) out += ',';
            out += std::to_string(j + 1);
            first = false;
            j = (*this)(j);
        }
        out += ')';
    }
    return out;
}

Permutation parse_cycles(std::string_view text, int n) {
    if (n < 0) throw InvalidArgument("negative domain size");
    std::vector<int> im(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) im[static_cast<std::size_t>(i)] = i;
    std::vector<char> used(static_cast<std::size_t>(n), 0);

    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& why) {
        throw InvalidArgument("cycle notation '" + std::string(text) + "': " + why);
    };

    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != '(') fail("expected '('");
        ++pos;
        std::vector<int> cycle;
        for (;;) {
            skip_ws();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) fail("expected an index");
            long v = std::stol(std::string(text.substr(start, pos - start)));
            if (v < 1 || v > n) fail("index " + std::to_string(v) + " out of range 1.." + std::to_string(n));
            int k = static_cast<int>(v - 1);
            if (used[static_cast<std::size_t>(k)]) fail("repeated element " + std::to_string(v));
            used[static_cast<std::size_t>(k)] = 1;
            cycle.push_back(k);
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
                break;
            }
            fail("expected ',' or ')'");
        }
        for (std::size_t i = 0; i < cycle.size(); ++i)
            im[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
        skip_ws();
    }
    return Permutation(std::move(im));
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.size() != q.size()) throw InvalidArgument("compose: size mismatch");
    std::vector<int> im(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) im[static_cast<std::size_t>(i)] = p(q(i));
    return Permutation(std::move(im));
}

Permutation inverse(const Permutation& p) {
    std::vector<int> im(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) im[static_cast<std::size_t>(p(i))] = i;
    return Permutation(std::move(im));
}

std::optional<std::size_t> PermutationGroup::index_of(const Permutation& p) const {
    auto it = index_.find(p.images());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

PermutationGroup generate_group(const std::vector<Permutation>& generators) {
    if (generators.empty()) throw InvalidArgument("generate_group: empty generator list");
    PermutationGroup g;
    g.n = generators.front().size();
    for (const auto& s : generators)
        if (s.size() != g.n) throw InvalidArgument("generate_group: generator size mismatch");
    g.generators = generators;

    auto add = [&](Permutation p, std::vector<int> word) {
        g.index_.emplace(p.images(), g.elements.size());
        g.elements.push_back(std::move(p));
        g.words.push_back(std::move(word));
    };
    add(Permutation::identity(g.n), {});
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t k = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < generators.size(); ++i) {
            Permutation h = compose(g.elements[k], generators[i]);
            if (g.index_.count(h.images())) continue;
            auto word = g.words[k];
            word.push_back(static_cast<int>(i));
            queue.push_back(g.elements.size());
            add(std::move(h), std::move(word));
        }
    }
    return g;
}

}  // namespace qwalk
