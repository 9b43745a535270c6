#include "qwalk/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/perm.hpp"

namespace qwalk::config {

using io::Json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("bad " + what + ": '" + s + "'");
    }
}


int parse_group_degree(std::string g) {
    if (!g.empty() && (g[0] == 's' || g[0] == 'S')) g = g.substr(1);
    return parse_int(g, "group degree");
}

LoadedGraph cayley_graph(int n, const std::string& gens) {
    std::vector<Permutation> gs;
    for (const auto& c : split(gens, ';')) gs.push_back(parse_cycles(c, n));
    if (gs.empty()) throw InvalidArgument("Cayley graph needs generators");
    LoadedGraph lg{build_cayley(generate_group(gs), gs), std::nullopt, Json::object()};
    lg.spec["builder"] = "cayley";
    lg.spec["degree"] = n;
    lg.spec["generators"] = split(gens, ';');
    return lg;
}

LoadedGraph hypercube_graph(int n) {
    LoadedGraph lg{build_hypercube(n), std::nullopt, Json::object()};
    lg.spec["builder"] = "hypercube";
    lg.spec["n"] = n;
    return lg;
}

LoadedGraph glued_graph(int n, long long seed) {
    GluedTrees gt = build_glued_trees(n, seed >= 0 ? random_seam(n, static_cast<std::uint64_t>(seed)) : std::vector<int>{});
    LoadedGraph lg{gt.graph, gt, Json::object()};
    lg.spec["builder"] = "glued-trees";
    lg.spec["n"] = n;
    lg.spec["seam_seed"] = seed >= 0 ? Json(seed) : Json(nullptr);
    return lg;
}

// cayley:s3:(1,2);(2,3) | hypercube:3 | glued-trees:4[:seed] | path to graph JSON
LoadedGraph load_graph(const std::string& spec) {
    auto parts = split(spec, ':');
    if (!parts.empty() && parts[0] == "cayley") {
        if (parts.size() != 3) throw InvalidArgument("expected cayley:<sN>:<cycles;cycles>");
        return cayley_graph(parse_group_degree(parts[1]), parts[2]);
    }
    if (!parts.empty() && parts[0] == "hypercube") {
        if (parts.size() != 2) throw InvalidArgument("expected hypercube:<n>");
        return hypercube_graph(parse_int(parts[1], "hypercube dimension"));
    }
    if (!parts.empty() && parts[0] == "glued-trees") {
        if (parts.size() < 2 || parts.size() > 3) throw InvalidArgument("expected glued-trees:<n>[:<seed>]");
        return glued_graph(parse_int(parts[1], "depth"), parts.size() == 3 ? parse_int(parts[2], "seed") : -1);
    }
    if (!std::filesystem::exists(spec)) throw InvalidArgument("unknown graph builder or missing file: " + spec);
    Json j = io::read_json_file(spec);
    LoadedGraph lg{io::graph_from_json(j), std::nullopt, Json::object()};
    lg.spec["file"] = std::filesystem::path(spec).filename().string();
    lg.spec["hash"] = io::hex64(io::fnv1a(j.dump()));
    return lg;
}

std::optional<int> resolve_vertex(const ColoredGraph& g, const std::string& text) {
    if (auto v = g.find_label(text)) return v;
    // t-words such as t2t1t2 that are not the canonical label
    if (text.size() > 1 && text[0] == 't') {
        std::vector<int> word;
        for (const auto& tok : split(text, 't')) word.push_back(parse_int(tok, "color in " + text) - 1);
        return g.follow(0, word);
    }
    return std::nullopt;
}

int require_vertex(const ColoredGraph& g, const std::string& text) {
    auto v = resolve_vertex(g, text);
    if (!v) throw InvalidArgument("label '" + text + "' does not name a vertex");
    return *v;
}

cplx parse_amplitude(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) throw InvalidArgument("empty amplitude");
    if (s.back() != 'i' && s.back() != 'j') return {std::stod(s), 0.0};
    s.pop_back();
    // split at the last sign that is not an exponent sign
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    if (cut == std::string::npos) {
        if (s.empty() || s == "+") return {0.0, 1.0};
        if (s == "-") return {0.0, -1.0};
        return {0.0, std::stod(s)};
    }
    std::string im = s.substr(cut);
    double imv = im == "+" ? 1.0 : im == "-" ? -1.0 : std::stod(im);
    return {std::stod(s.substr(0, cut)), imv};
}

CoinFamily load_coin(const std::string& spec, Json& record) {
    if (spec == "grover") {
        record = "grover";
        return grover_family();
    }
    if (spec == "dft") {
        record = "dft";
        return dft_family();
    }
    if (spec.rfind("custom:", 0) == 0) {
        const std::string path = spec.substr(7);
        Json j = io::read_json_file(path);
        record = Json::object({{"custom", std::filesystem::path(path).filename().string()}, {"hash", io::hex64(io::fnv1a(j.dump()))}});
        if (j.contains("by_degree")) {
            std::map<int, Mat> by;
            for (auto it = j["by_degree"].begin(); it != j["by_degree"].end(); ++it)
                by[parse_int(it.key(), "degree key")] = io::matrix_from_json(it.value());
            return custom_family(std::move(by));
        }
        return fixed_family(custom_coin(io::matrix_from_json(j)));
    }
    throw InvalidArgument("unknown coin '" + spec + "' (grover, dft, custom:FILE)");
}


Subgroup subgroup_from_json(const Json& j, const LoadedGraph& lg) {
    Subgroup sg;
    const ColoredGraph& g = lg.graph;
    if (j.contains("direction_permutations")) {
        for (const auto& c : j["direction_permutations"])
            sg.reps.push_back(direction_automorphism(g, parse_cycles(c.get<std::string>(), g.degree(0))));
        sg.record["direction_permutations"] = j["direction_permutations"];
    }
    if (j.contains("left_translations")) {
        for (const auto& l : j["left_translations"]) sg.reps.push_back(left_translation(g, require_vertex(g, l.get<std::string>())));
        sg.record["left_translations"] = j["left_translations"];
    }
    if (j.value("glued_tree_swaps", false)) {
        if (!lg.trees) throw InvalidArgument("glued_tree_swaps needs a glued-trees graph");
        sg.vertex_reps = glued_tree_swaps(*lg.trees);
        sg.record["glued_tree_swaps"] = true;
    }
    if (sg.reps.empty() && sg.vertex_reps.empty()) throw InvalidArgument("subgroup lists no generators");
    return sg;
}

Subgroup load_subgroup(const std::string& path, const LoadedGraph& lg) {
    if (path.empty()) return {};
    Subgroup sg = subgroup_from_json(io::read_json_file(path), lg);
    sg.record["file"] = std::filesystem::path(path).filename().string();
    return sg;
}

// "vertex:amp,amp;vertex:amp" or "vertex" (uniform coin) or "orbit:K" on the quotient
Vec parse_initial(const std::string& spec, const ColoredGraph& g, const OrbitBasis* orbits) {
    if (spec.empty()) throw InvalidArgument("--initial is required");
    if (spec.rfind("orbit:", 0) == 0) {
        if (!orbits) throw InvalidArgument("orbit initial states need --subgroup");
        int k = parse_int(spec.substr(6), "orbit index");
        if (k < 0 || k >= orbits->count()) throw InvalidArgument("orbit index out of range");
        return orbits->orbit_vector(k);
    }
    Vec psi = Vec::Zero(g.dim());
    for (const auto& term : split(spec, ';')) {
        auto colon = term.find(':');
        int v = require_vertex(g, term.substr(0, colon));
        if (colon == std::string::npos) {
            for (int c = 0; c < g.degree(v); ++c) psi(g.flat(v, c)) += 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
            continue;
        }
        auto amps = split(term.substr(colon + 1), ',');
        if (static_cast<int>(amps.size()) != g.degree(v))
            throw InvalidArgument("vertex " + g.label(v) + " needs " + std::to_string(g.degree(v)) + " amplitudes");
        for (int c = 0; c < g.degree(v); ++c) psi(g.flat(v, c)) += parse_amplitude(amps[c]);
    }
    const double n = psi.norm();
    if (n == 0.0) throw InvalidArgument("initial state is zero");
    return psi / n;
}

std::vector<int> parse_finals(const std::string& spec, const ColoredGraph& g) {
    std::vector<int> out;
    for (const auto& l : split(spec, ';')) out.push_back(require_vertex(g, l));
    if (out.empty()) throw InvalidArgument("--final is required");
    return out;
}

}  // namespace qwalk::config
