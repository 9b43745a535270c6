#include "qwalk/walk.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

CoinSpec grover_coin(int d) {
    if (d < 1) throw InvalidArgument("coin degree must be >= 1");
    Mat c = Mat::Constant(d, d, 2.0 / d);
    c.diagonal().array() -= 1.0;
    return {CoinSpec::Kind::Grover, d, c};
}

CoinSpec dft_coin(int d) {
    if (d < 1) throw InvalidArgument("coin degree must be >= 1");
    Mat c(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            // reduce the exponent first so equal powers give identical entries
            const int e = (j * k) % d;
            c(j, k) = std::polar(norm, 2.0 * std::numbers::pi * e / d);
        }
    return {CoinSpec::Kind::DFT, d, c};
}

CoinSpec custom_coin(Mat m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("custom coin must be a non-empty square matrix");
    if (unitarity_defect(m) >= kOperatorTol) throw InvalidArgument("custom coin is not unitary within 1e-12");
    const int d = static_cast<int>(m.rows());
    return {CoinSpec::Kind::Custom, d, std::move(m)};
}

std::string coin_kind_name(CoinSpec::Kind k) {
    switch (k) {
        case CoinSpec::Kind::Grover: return "grover";
        case CoinSpec::Kind::DFT: return "dft";
        case CoinSpec::Kind::Custom: return "custom";
    }
    return "unknown";
}

CoinFamily grover_family() {
    return [](int d) { return grover_coin(d); };
}

CoinFamily dft_family() {
    return [](int d) { return dft_coin(d); };
}

CoinFamily fixed_family(const CoinSpec& coin) {
    return [coin](int d) {
        if (d != coin.d)
            throw InvalidArgument("coin of dimension " + std::to_string(coin.d) + " applied at a vertex of degree " +
                                  std::to_string(d));
        return coin;
    };
}

CoinFamily custom_family(std::map<int, Mat> by_degree) {
    std::map<int, CoinSpec> coins;
    for (auto& [d, m] : by_degree) {
        CoinSpec c = custom_coin(m);
        if (c.d != d) throw InvalidArgument("custom coin keyed by degree " + std::to_string(d) + " has the wrong size");
        coins.emplace(d, std::move(c));
    }
    return [coins](int d) {
        auto it = coins.find(d);
        return it == coins.end() ? grover_coin(d) : it->second;
    };
}

WalkOperator walk_unitary(const Mat& S, const CoinFamily& coins, const ColoredGraph& graph) {
    const int D = graph.dim();
    if (S.rows() != D || S.cols() != D) throw InvalidArgument("shift matrix dimension differs from the graph");
    // S is a permutation matrix, so row partner(x) of U is row x of the block-diagonal coin.
    std::vector<int> image(static_cast<std::size_t>(D), -1);
    for (int x = 0; x < D; ++x) {
        for (int y = 0; y < D; ++y) {
            const cplx s = S(y, x);
            if (s == cplx(0.0)) continue;
            if (s != cplx(1.0) || image[x] != -1) throw InvalidArgument("shift matrix is not a permutation matrix");
            image[x] = y;
        }
        if (image[x] == -1) throw InvalidArgument("shift matrix is not a permutation matrix");
    }
    std::map<int, CoinSpec> by_degree;
    WalkOperator w{Mat::Zero(D, D)};
    for (int v = 0; v < graph.num_vertices(); ++v) {
        const int d = graph.degree(v);
        auto it = by_degree.find(d);
        if (it == by_degree.end()) {
            CoinSpec coin = coins(d);
            if (coin.d != d || coin.matrix.rows() != d || coin.matrix.cols() != d)
                throw InvalidArgument("coin degree mismatch at vertex " + graph.label(v));
            if (unitarity_defect(coin.matrix) >= kOperatorTol) throw InvalidArgument("coin is not unitary within 1e-12");
            it = by_degree.emplace(d, std::move(coin)).first;
        }
        const int off = graph.offset(v);
        for (int r = 0; r < d; ++r) w.U.block(image[off + r], off, 1, d) = it->second.matrix.row(r);
    }
    return w;
}

WalkOperator walk_unitary(const Mat& S, const CoinSpec& coin, const ColoredGraph& graph) {
    return walk_unitary(S, fixed_family(coin), graph);
}

bool symmetry_commutes(const WalkOperator& U, const BasisPermutation& sigma, double tol) {
    return kernels::permutation_commutator_max(U.U, sigma.mapping) < tol;
}

WalkOperator induced_walk(const WalkOperator& U, const OrbitBasis& orbits, const std::vector<BasisPermutation>& reps) {
    if (orbits.dim != U.dim()) throw InvalidArgument("orbit basis dimension differs from the walk");
    for (const auto& r : reps) {
        if (r.size() != U.dim()) throw InvalidArgument("subgroup generator has the wrong dimension");
        if (!symmetry_commutes(U, r)) throw CommutationFailure("walk operator does not commute with " + r.description);
    }
    WalkOperator uh{kernels::orbit_compress(U.U, orbits.orbits)};
    if (unitarity_defect(uh.U) >= kOperatorTol) throw NumericalFailure("quotient walk is not unitary within 1e-12");
    return uh;
}

QuotientFactorization factor_quotient_walk(const WalkOperator& U_H, const QuotientGraph& quotient) {
    const ColoredGraph& q = quotient.graph;
    if (U_H.dim() != q.dim()) throw InvalidArgument("quotient walk dimension differs from the quotient graph");
    QuotientFactorization f;
    f.S_H = shift_matrix(q);
    f.C_H = f.S_H.transpose() * U_H.U;
    Mat mask = Mat::Zero(q.dim(), q.dim());
    for (int v = 0; v < q.num_vertices(); ++v) {
        const int d = q.degree(v);
        f.blocks.push_back(f.C_H.block(q.offset(v), q.offset(v), d, d));
        mask.block(q.offset(v), q.offset(v), d, d).setOnes();
    }
    double off = 0.0;
    for (int i = 0; i < q.dim(); ++i)
        for (int j = 0; j < q.dim(); ++j)
            if (mask(i, j) == 0.0) off = std::max(off, std::abs(f.C_H(i, j)));
    if (off >= kOperatorTol) throw NumericalFailure("quotient coin is not block diagonal; orbit/quotient mismatch");
    if (max_abs(f.S_H * f.C_H - U_H.U) >= kOperatorTol) throw NumericalFailure("S_H C_H does not reassemble U_H");
    return f;
}

Mat continuous_hamiltonian(const ColoredGraph& graph, double gamma, HamiltonianForm form) {
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    const Mat a = adjacency_matrix(graph);
    if (form == HamiltonianForm::Adjacency) {
        if (!graph.is_regular()) throw InvalidArgument("adjacency form drops D = dI and needs a regular graph");
        return gamma * a;
    }
    Mat h = -gamma * a;
    for (int v = 0; v < graph.num_vertices(); ++v) h(v, v) += gamma * graph.degree(v);
    return h;
}

Mat quotient_hamiltonian(const Mat& H, const OrbitBasis& orbits, const std::vector<BasisPermutation>& reps) {
    for (const auto& r : reps) {
        if (r.size() != H.rows()) throw InvalidArgument("vertex permutation has the wrong dimension");
        if (kernels::permutation_commutator_max(H, r.mapping) >= kOperatorTol)
            throw CommutationFailure("Hamiltonian does not commute with " + r.description);
    }
    return kernels::orbit_compress(H, orbits.orbits);
}

Mat quotient_hamiltonian(const Mat& H, const OrbitBasis& orbits) {
    if (H.rows() != orbits.dim) throw InvalidArgument("orbit basis dimension differs from the Hamiltonian");
    const Mat b = orbits.basis_matrix();
    const Mat hb = H * b;
    if (max_abs(hb - b * (b.adjoint() * hb)) >= kOperatorTol)
        throw CommutationFailure("Hamiltonian does not leave the orbit span invariant");
    return kernels::orbit_compress(H, orbits.orbits);
}

namespace {
void warn_if_unnormalized(const Vec& state) {
    const double n = state.norm();
    if (std::abs(n - 1.0) > kEvolveTol) std::cerr << "warning: evolving a state of norm " << n << "\n";
}
}  // namespace

Vec evolve(const WalkOperator& U, const Vec& state, int steps) {
    if (state.size() != U.dim()) throw InvalidArgument("state dimension differs from the walk");
    if (steps < 0) throw InvalidArgument("negative step count");
    warn_if_unnormalized(state);
    Vec s = state;
    for (int t = 0; t < steps; ++t) s = U.U * s;
    return s;
}

Vec evolve_continuous(const Mat& H, const Vec& state, double t) {
    if (state.size() != H.rows()) throw InvalidArgument("state dimension differs from the Hamiltonian");
    if (hermiticity_defect(H) >= kOperatorTol) throw InvalidArgument("Hamiltonian is not Hermitian");
    warn_if_unnormalized(state);
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver failed");
    Vec coeff = es.eigenvectors().adjoint() * state;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::polar(1.0, es.eigenvalues()(k) * t);
    return es.eigenvectors() * coeff;
}

}  // namespace qwalk
