#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/symmetry.hpp"

namespace qwalk {

inline constexpr double kOperatorTol = 1e-12;
inline constexpr double kEvolveTol = 1e-10;

struct CoinSpec {
    enum class Kind { Grover, DFT, Custom };
    Kind kind = Kind::Grover;
    int d = 0;
    Mat matrix;
};

CoinSpec grover_coin(int d);
CoinSpec dft_coin(int d);
CoinSpec custom_coin(Mat m);
std::string coin_kind_name(CoinSpec::Kind k);

// Picks the coin for a vertex of the given degree.
using CoinFamily = std::function<CoinSpec(int degree)>;
CoinFamily grover_family();
CoinFamily dft_family();
CoinFamily fixed_family(const CoinSpec& coin);
// Custom matrices keyed by degree; degrees without an entry fall back to Grover.
CoinFamily custom_family(std::map<int, Mat> by_degree);

struct WalkOperator {
    Mat U;
    int dim() const { return static_cast<int>(U.rows()); }
};

WalkOperator walk_unitary(const Mat& S, const CoinFamily& coins, const ColoredGraph& graph);
WalkOperator walk_unitary(const Mat& S, const CoinSpec& coin, const ColoredGraph& graph);

bool symmetry_commutes(const WalkOperator& U, const BasisPermutation& sigma, double tol = kOperatorTol);

// B^dagger U B after checking [U, sigma] = 0 for each generator.
WalkOperator induced_walk(const WalkOperator& U, const OrbitBasis& orbits, const std::vector<BasisPermutation>& reps);

struct QuotientFactorization {
    Mat S_H;
    Mat C_H;
    std::vector<Mat> blocks;  // one per quotient vertex
};

QuotientFactorization factor_quotient_walk(const WalkOperator& U_H, const QuotientGraph& quotient);

enum class HamiltonianForm { Laplacian, Adjacency };
Mat continuous_hamiltonian(const ColoredGraph& graph, double gamma, HamiltonianForm form = HamiltonianForm::Laplacian);

// <O_j|H|O_k>; reps act on the vertex space.
Mat quotient_hamiltonian(const Mat& H, const OrbitBasis& orbits, const std::vector<BasisPermutation>& reps);
// Same, for a partition not generated by automorphisms: requires H to leave span{|O_k>} invariant.
Mat quotient_hamiltonian(const Mat& H, const OrbitBasis& orbits);

Vec evolve(const WalkOperator& U, const Vec& state, int steps);
// exp(+iHt) state
Vec evolve_continuous(const Mat& H, const Vec& state, double t);

}  // namespace qwalk
