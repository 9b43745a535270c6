#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk {

// Stored 0-based; cycle notation at the text boundary is 1-based.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return images_; }
    bool is_identity() const;
    std::string to_cycles() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> images_;
};

Permutation parse_cycles(std::string_view text, int n);
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);

struct PermutationGroup {
    int n = 0;
    std::vector<Permutation> generators;
    std::vector<Permutation> elements;
    // words[k] lists generator indices with elements[k] = g_{w0} g_{w1} ...
    std::vector<std::vector<int>> words;

    std::size_t order() const { return elements.size(); }
    std::optional<std::size_t> index_of(const Permutation& p) const;

private:
    friend PermutationGroup generate_group(const std::vector<Permutation>&);
    std::map<std::vector<int>, std::size_t> index_;
};

PermutationGroup generate_group(const std::vector<Permutation>& generators);

}  // namespace qwalk
