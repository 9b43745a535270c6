#include <Eigen/Core>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwalk/config.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/hitting.hpp"
#include "qwalk/io.hpp"
#include "qwalk/kernels.hpp"
#include "qwalk/perm.hpp"
#include "qwalk/symmetry.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;
using io::Json;
using namespace qwalk::config;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfinite = 3;
constexpr int kExitIndeterminate = 4;

struct Options {
    std::string graph;
    std::string builder;
    std::string group;
    std::string gens;
    int n = 0;
    long long seed = -1;
    std::string subgroup;
    std::string coin = "grover";
    std::string final_vertices;
    std::string initial;
    std::string vertex;
    bool quotient = false;
    double tol_degeneracy = 1e-8;
    int horizon = 0;
    int prefix = 100;
    int steps = 0;
    double gamma = 1.0;
    std::string out;
};

std::string eigen_version() {
    return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION);
}

class Run {
public:
    Run(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {
        config_["command"] = command_;
    }

    Json& config() { return config_; }

    void emit(const std::string& name, const Json& j) { outputs_.emplace_back(name, io::dump(j)); }

    void finish(const Json& summary) {
        Json manifest;
        manifest["tool"] = "qwalk";
        manifest["version"] = kVersion;
        manifest["config"] = config_;
        manifest["config_hash"] = io::hex64(io::fnv1a(config_.dump()));
        manifest["tolerances"] = Json::object({{"operator", kOperatorTol},
                                               {"evolution", kEvolveTol},
                                               {"degeneracy", opt_.tol_degeneracy},
                                               {"intersection", 1e-8},
                                               {"sigma_min", 1e-9},
                                               {"series", 1e-6}});
        manifest["dense_limit"] = dense_limit();
        manifest["versions"] = Json::object({{"eigen", eigen_version()},
                                             {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                                   std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                                   std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                                             {"cli11", std::string(CLI11_VERSION)},
                                             {"openmp", kernels::parallel::openmp_version()}});
        Json files = Json::array();
        for (const auto& [name, text] : outputs_) files.push_back(name);
        manifest["outputs"] = files;
        if (!opt_.out.empty()) {
            std::filesystem::create_directories(opt_.out);
            for (const auto& [name, text] : outputs_) io::write_text_file((std::filesystem::path(opt_.out) / name).string(), text);
            io::write_text_file((std::filesystem::path(opt_.out) / "manifest.json").string(), io::dump(manifest));
        }
        std::cout << io::dump(summary);
    }

private:
    std::string command_;
    const Options& opt_;
    Json config_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

LoadedGraph graph_from_options(const Options& opt) {
    if (!opt.graph.empty()) return load_graph(opt.graph);
    if (opt.builder == "cayley") return cayley_graph(parse_group_degree(opt.group), opt.gens);
    if (opt.builder == "hypercube") return hypercube_graph(opt.n);
    if (opt.builder == "glued-trees") return glued_graph(opt.n, opt.seed);
    throw InvalidArgument("no graph given (use --graph or a builder name)");
}

Json blocks_json(const QuotientFactorization& f, const QuotientGraph& q) {
    Json arr = Json::array();
    for (std::size_t k = 0; k < f.blocks.size(); ++k) {
        Json b;
        b["vertex"] = q.graph.label(static_cast<int>(k));
        b["matrix"] = io::matrix_to_json(f.blocks[k]);
        arr.push_back(std::move(b));
    }
    return arr;
}

int cmd_build(const Options& opt) {
    LoadedGraph lg = graph_from_options(opt);
    Run run("build", opt);
    run.config()["graph"] = lg.spec;
    run.emit("graph.json", io::graph_to_json(lg.graph));
    run.emit("S.json", io::matrix_to_json(shift_matrix(lg.graph)));
    Json summary;
    summary["num_vertices"] = lg.graph.num_vertices();
    summary["dim"] = lg.graph.dim();
    summary["regular"] = lg.graph.is_regular();
    summary["connected"] = lg.graph.connected();
    if (lg.trees) summary["columns"] = lg.trees->columns.size();
    run.finish(summary);
    return 0;
}

int cmd_verify(const Options& opt) {
    LoadedGraph lg = graph_from_options(opt);
    Run run("verify-subgroup", opt);
    run.config()["graph"] = lg.spec;
    Subgroup sg = load_subgroup(opt.subgroup, lg);  // throws NotAnAutomorphism naming the generator
    Json coin_record;
    CoinFamily fam = load_coin(opt.coin, coin_record);
    run.config()["subgroup"] = sg.record;
    run.config()["coin"] = coin_record;
    Json gens = Json::array();
    bool all = true;
    if (!sg.reps.empty()) {
        WalkOperator u = walk_unitary(shift_matrix(lg.graph), fam, lg.graph);
        for (const auto& r : sg.reps) {
            bool commutes = symmetry_commutes(u, r);
            all = all && commutes;
            gens.push_back(Json::object({{"generator", r.description}, {"automorphism", true}, {"commutes_with_U", commutes}}));
        }
        run.config()["order"] = close_group(sg.reps).size();
    }
    for (const auto& r : sg.vertex_reps) gens.push_back(Json::object({{"generator", r.description}, {"automorphism", true}}));
    Json summary;
    summary["generators"] = gens;
    summary["all_commute"] = all;
    run.emit("verify.json", summary);
    run.finish(summary);
    return all ? 0 : kExitError;
}

int cmd_quotient(const Options& opt) {
    LoadedGraph lg = graph_from_options(opt);
    Run run("quotient", opt);
    run.config()["graph"] = lg.spec;
    Subgroup sg = load_subgroup(opt.subgroup, lg);
    run.config()["subgroup"] = sg.record;
    Json summary;
    if (!sg.vertex_reps.empty()) {
        // continuous-time walk on the vertex space
        run.config()["gamma"] = opt.gamma;
        OrbitBasis ob = compute_orbits(sg.vertex_reps, lg.graph.num_vertices());
        Mat h = continuous_hamiltonian(lg.graph, opt.gamma);
        Mat hh = quotient_hamiltonian(h, ob, sg.vertex_reps);
        Json orbits = Json::array();
        for (const auto& o : ob.orbits) orbits.push_back(o);
        run.emit("vertex_orbits.json", Json::object({{"count", ob.count()}, {"orbits", orbits}}));
        run.emit("H.json", io::matrix_to_json(h));
        run.emit("H_H.json", io::matrix_to_json(hh));
        summary["orbits"] = ob.count();
        summary["H_H"] = io::matrix_to_json(hh);
        run.finish(summary);
        return 0;
    }
    Json coin_record;
    CoinFamily fam = load_coin(opt.coin, coin_record);
    run.config()["coin"] = coin_record;
    OrbitBasis ob = compute_orbits(sg.reps, lg.graph.dim());
    QuotientGraph q = quotient_graph(lg.graph, ob);
    WalkOperator u = walk_unitary(shift_matrix(lg.graph), fam, lg.graph);
    WalkOperator uh = induced_walk(u, ob, sg.reps);
    QuotientFactorization f = factor_quotient_walk(uh, q);
    run.emit("quotient.json", io::quotient_to_json(q));
    run.emit("orbits.json", io::orbits_to_json(ob, lg.graph));
    run.emit("P_H.json", io::matrix_to_json(projector_PH(ob)));
    run.emit("U.json", io::matrix_to_json(u.U));
    run.emit("U_H.json", io::matrix_to_json(uh.U));
    run.emit("S_H.json", io::matrix_to_json(f.S_H));
    run.emit("C_H.json", io::matrix_to_json(f.C_H));
    run.emit("C_H_blocks.json", blocks_json(f, q));
    summary["orbits"] = ob.count();
    summary["quotient_vertices"] = q.graph.num_vertices();
    Json degs = Json::array();
    for (int v = 0; v < q.graph.num_vertices(); ++v) degs.push_back(q.graph.degree(v));
    summary["quotient_degrees"] = degs;
    summary["unitarity_defect"] = unitarity_defect(uh.U);
    run.finish(summary);
    return 0;
}

int cmd_walk(const Options& opt) {
    LoadedGraph lg = graph_from_options(opt);
    Run run("walk", opt);
    run.config()["graph"] = lg.spec;
    Json coin_record;
    CoinFamily fam = load_coin(opt.coin, coin_record);
    run.config()["coin"] = coin_record;
    run.config()["steps"] = opt.steps;
    run.config()["initial"] = opt.initial;
    if (opt.steps < 0) throw InvalidArgument("--steps must be >= 0");
    WalkOperator u = walk_unitary(shift_matrix(lg.graph), fam, lg.graph);
    run.emit("U.json", io::matrix_to_json(u.U));
    Subgroup sg = load_subgroup(opt.subgroup, lg);
    std::optional<OrbitBasis> ob;
    if (!sg.reps.empty()) {
        run.config()["subgroup"] = sg.record;
        ob = compute_orbits(sg.reps, lg.graph.dim());
        QuotientGraph q = quotient_graph(lg.graph, *ob);
        WalkOperator uh = induced_walk(u, *ob, sg.reps);
        QuotientFactorization f = factor_quotient_walk(uh, q);
        run.emit("U_H.json", io::matrix_to_json(uh.U));
        run.emit("S_H.json", io::matrix_to_json(f.S_H));
        run.emit("C_H_blocks.json", blocks_json(f, q));
    }
    Json summary;
    if (!opt.initial.empty()) {
        Vec psi = parse_initial(opt.initial, lg.graph, ob ? &*ob : nullptr);
        Vec out = evolve(u, psi, opt.steps);
        Json probs = Json::array();
        for (int v = 0; v < lg.graph.num_vertices(); ++v) {
            double p = 0.0;
            for (int c = 0; c < lg.graph.degree(v); ++c) p += std::norm(out(lg.graph.flat(v, c)));
            probs.push_back(p);
        }
        Mat col = out;
        run.emit("state.json", io::matrix_to_json(col));
        summary["vertex_probabilities"] = probs;
        summary["norm"] = out.norm();
    }
    summary["dim"] = lg.graph.dim();
    run.finish(summary);
    return 0;
}

std::vector<std::pair<std::string, std::vector<double>>> spectra(const Mat& P_hat, const ColoredGraph& g,
                                                                  const std::vector<int>& vertices) {
    std::vector<std::pair<std::string, std::vector<double>>> out;
    for (int v : vertices) {
        CMatrix cm = c_matrix(P_hat, g, v);
        out.emplace_back(g.label(v), std::vector<double>(cm.eigenvalues.data(), cm.eigenvalues.data() + cm.eigenvalues.size()));
    }
    return out;
}

int exit_code(TauStatus s) {
    switch (s) {
        case TauStatus::Finite: return 0;
        case TauStatus::Infinite: return kExitInfinite;
        case TauStatus::Indeterminate: return kExitIndeterminate;
    }
    return kExitError;
}

int cmd_hitting(const Options& opt) {
    LoadedGraph lg = graph_from_options(opt);
    const ColoredGraph& g = lg.graph;
    Run run("hitting", opt);
    run.config()["graph"] = lg.spec;
    Json coin_record;
    CoinFamily fam = load_coin(opt.coin, coin_record);
    run.config()["coin"] = coin_record;
    run.config()["final"] = opt.final_vertices;
    run.config()["initial"] = opt.initial;
    run.config()["quotient"] = opt.quotient;
    run.config()["horizon"] = opt.horizon;
    run.config()["prefix"] = opt.prefix;
    if (!(opt.tol_degeneracy > 0.0)) throw InvalidArgument("--tol-degeneracy must be positive");

    HittingOptions ho;
    ho.horizon = opt.horizon;
    ho.prefix_length = opt.prefix;
    ho.degeneracy_tol = opt.tol_degeneracy;

    WalkOperator u = walk_unitary(shift_matrix(g), fam, g);
    Measurement m = make_measurement(g, parse_finals(opt.final_vertices, g));
    Subgroup sg = load_subgroup(opt.subgroup, lg);
    if (!sg.reps.empty()) {
        run.config()["subgroup"] = sg.record;
        check_measurement_symmetry(m, sg.reps);
    }
    std::optional<OrbitBasis> ob;
    if (!sg.reps.empty()) ob = compute_orbits(sg.reps, g.dim());
    if (opt.quotient && !ob) throw InvalidArgument("--quotient needs --subgroup");
    Vec psi = parse_initial(opt.initial, g, ob ? &*ob : nullptr);

    std::vector<int> start_vertices;
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int c = 0; c < g.degree(v); ++c)
            if (std::abs(psi(g.flat(v, c))) > 0.0) {
                start_vertices.push_back(v);
                break;
            }

    HittingReport rep;
    if (opt.quotient) {
        const Mat P = projector_PH(*ob);
        if (max_abs(P * psi - psi) > 1e-10) throw InvalidArgument("initial state is not symmetric under the subgroup");
        WalkOperator uh = induced_walk(u, *ob, sg.reps);
        Measurement mh = quotient_measurement(m, *ob);
        Vec coords = ob->coordinates(psi);
        rep = hitting_time(uh, mh, coords * coords.adjoint(), ho);
        rep.notes.push_back("analysis on the quotient walk");
        if (g.dim() <= dense_limit()) {
            InfiniteProjector ip = infinite_projector(u, m, ho.degeneracy_tol);
            IntersectionCheck chk = quotient_infinite_check(ip, u, m, *ob, sg.reps, ho.degeneracy_tol);
            rep.intersection_dim = chk.dim;
            rep.intersection_dim_quotient = chk.quotient_rank;
            rep.c_matrix_spectra = spectra(ip.P, g, start_vertices);
        } else {
            rep.notes.push_back("full graph above the dense limit; intersection not computed");
        }
    } else {
        rep = hitting_time(u, m, psi * psi.adjoint(), ho);
        if (ob) {
            InfiniteProjector ip{rep.P_hat, rep.P_rank, rep.P_rank_structural, rep.P_rank_accidental, 0};
            IntersectionCheck chk = quotient_infinite_check(ip, u, m, *ob, sg.reps, ho.degeneracy_tol);
            rep.intersection_dim = chk.dim;
            rep.intersection_dim_quotient = chk.quotient_rank;
        }
        rep.c_matrix_spectra = spectra(rep.P_hat, g, start_vertices);
    }
    Json report = io::report_to_json(rep);
    run.emit("report.json", report);
    run.finish(report);
    return exit_code(rep.status);
}

int cmd_c_matrix(const Options& opt) {
    LoadedGraph lg = graph_from_options(opt);
    const ColoredGraph& g = lg.graph;
    Run run("c-matrix", opt);
    run.config()["graph"] = lg.spec;
    Json coin_record;
    CoinFamily fam = load_coin(opt.coin, coin_record);
    run.config()["coin"] = coin_record;
    run.config()["final"] = opt.final_vertices;
    run.config()["vertex"] = opt.vertex;
    WalkOperator u = walk_unitary(shift_matrix(g), fam, g);
    Measurement m = make_measurement(g, parse_finals(opt.final_vertices, g));
    if (g.dim() > dense_limit())
        throw DimensionLimit("dimension " + std::to_string(g.dim()) + " exceeds the dense limit");
    InfiniteProjector ip = infinite_projector(u, m, opt.tol_degeneracy);
    std::vector<int> vertices;
    if (opt.vertex.empty())
        for (int v = 0; v < g.num_vertices(); ++v) vertices.push_back(v);
    else
        for (const auto& l : split(opt.vertex, ';')) vertices.push_back(require_vertex(g, l));
    Json out = Json::array();
    for (int v : vertices) {
        CMatrix cm = c_matrix(ip.P, g, v);
        Json e;
        e["vertex"] = g.label(v);
        e["C"] = io::matrix_to_json(cm.C);
        e["eigenvalues"] = std::vector<double>(cm.eigenvalues.data(), cm.eigenvalues.data() + cm.eigenvalues.size());
        int zeros = 0;
        for (Eigen::Index i = 0; i < cm.eigenvalues.size(); ++i) zeros += std::abs(cm.eigenvalues(i)) < 1e-8 ? 1 : 0;
        e["zero_eigenvalues"] = zeros;
        out.push_back(std::move(e));
    }
    Json summary;
    summary["P_rank"] = ip.rank;
    summary["P_rank_structural"] = ip.structural_rank;
    summary["P_rank_accidental"] = ip.accidental_rank;
    summary["c_matrices"] = out;
    run.emit("c_matrix.json", summary);
    run.finish(summary);
    return 0;
}

void add_graph_options(CLI::App* sub, Options& opt) {
    sub->add_option("--graph", opt.graph, "cayley:sN:CYCLES;CYCLES | hypercube:N | glued-trees:N[:SEED] | graph JSON file");
    sub->add_option("--out", opt.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qwalk: coined quantum walks, symmetry quotients and hitting times"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Options opt;

    auto* build = app.add_subcommand("build", "build a graph and its shift operator");
    add_graph_options(build, opt);
    build->add_option("builder", opt.builder, "cayley | hypercube | glued-trees");
    build->add_option("--group", opt.group, "symmetric group, e.g. s3");
    build->add_option("--gens", opt.gens, "generators, e.g. \"(1,2);(2,3)\"");
    build->add_option("--n", opt.n, "hypercube dimension or glued-trees depth");
    build->add_option("--seed", opt.seed, "random seam seed for glued trees");

    auto* verify = app.add_subcommand("verify-subgroup", "check subgroup generators are automorphisms");
    add_graph_options(verify, opt);
    verify->add_option("--subgroup", opt.subgroup, "subgroup JSON file")->required();
    verify->add_option("--coin", opt.coin, "grover | dft | custom:FILE");

    auto* quotient = app.add_subcommand("quotient", "orbit basis, quotient graph and quotient operators");
    add_graph_options(quotient, opt);
    quotient->add_option("--subgroup", opt.subgroup, "subgroup JSON file")->required();
    quotient->add_option("--coin", opt.coin, "grover | dft | custom:FILE");
    quotient->add_option("--gamma", opt.gamma, "hopping rate for the continuous walk");

    auto* walk = app.add_subcommand("walk", "walk operator and evolution");
    add_graph_options(walk, opt);
    walk->add_option("--coin", opt.coin, "grover | dft | custom:FILE");
    walk->add_option("--subgroup", opt.subgroup, "subgroup JSON file");
    walk->add_option("--initial", opt.initial, "vertex:amp,amp;... | vertex | orbit:K");
    walk->add_option("--steps", opt.steps, "number of steps");

    auto* hitting = app.add_subcommand("hitting", "measured-walk hitting time report");
    add_graph_options(hitting, opt);
    hitting->add_option("--coin", opt.coin, "grover | dft | custom:FILE");
    hitting->add_option("--subgroup", opt.subgroup, "subgroup JSON file");
    hitting->add_option("--final", opt.final_vertices, "final vertex labels, ';'-separated")->required();
    hitting->add_option("--initial", opt.initial, "vertex:amp,amp;... | vertex | orbit:K")->required();
    hitting->add_flag("--quotient", opt.quotient, "analyze the quotient walk");
    hitting->add_option("--tol-degeneracy", opt.tol_degeneracy, "eigenphase clustering tolerance");
    hitting->add_option("--horizon", opt.horizon, "series horizon (0: 10 D^2)");
    hitting->add_option("--prefix", opt.prefix, "length of the reported p(t) prefix");

    auto* cmat = app.add_subcommand("c-matrix", "coin-overlap matrices of the infinite-hitting projector");
    add_graph_options(cmat, opt);
    cmat->add_option("--coin", opt.coin, "grover | dft | custom:FILE");
    cmat->add_option("--final", opt.final_vertices, "final vertex labels, ';'-separated")->required();
    cmat->add_option("--vertex", opt.vertex, "vertex labels, ';'-separated (default: all)");
    cmat->add_option("--tol-degeneracy", opt.tol_degeneracy, "eigenphase clustering tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*build) return cmd_build(opt);
        if (*verify) return cmd_verify(opt);
        if (*quotient) return cmd_quotient(opt);
        if (*walk) return cmd_walk(opt);
        if (*hitting) return cmd_hitting(opt);
        if (*cmat) return cmd_c_matrix(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
