#include "qwalk/hitting.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

Mat Measurement::P() const {
    Mat p = Mat::Zero(dim, dim);
    for (int r : final_rows) p(r, r) = 1.0;
    return p;
}

Mat Measurement::Q() const { return Mat::Identity(dim, dim) - P(); }

Measurement measurement_from_rows(int dim, std::vector<int> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.empty()) throw InvalidArgument("measurement needs at least one final row");
    Measurement m;
    m.dim = dim;
    m.mask.assign(static_cast<std::size_t>(dim), 0);
    for (int r : rows) {
        if (r < 0 || r >= dim) throw InvalidArgument("final row out of range");
        m.mask[r] = 1;
    }
    m.final_rows = std::move(rows);
    return m;
}

Measurement make_measurement(const ColoredGraph& graph, const std::vector<int>& final_vertices) {
    std::vector<int> rows;
    for (int v : final_vertices) {
        if (v < 0 || v >= graph.num_vertices()) throw InvalidArgument("final vertex out of range");
        for (int c = 0; c < graph.degree(v); ++c) rows.push_back(graph.flat(v, c));
    }
    return measurement_from_rows(graph.dim(), std::move(rows));
}

void check_measurement_symmetry(const Measurement& m, const std::vector<BasisPermutation>& reps) {
    for (const auto& r : reps) {
        if (r.size() != m.dim) throw InvalidArgument("subgroup generator has the wrong dimension");
        for (int x : m.final_rows)
            if (!m.mask[r.mapping[x]])
                throw MeasurementSymmetryViolation("final-vertex projector does not commute with " + r.description);
    }
}

Measurement quotient_measurement(const Measurement& m, const OrbitBasis& orbits) {
    if (orbits.dim != m.dim) throw InvalidArgument("orbit basis dimension differs from the measurement");
    std::vector<int> rows;
    for (int k = 0; k < orbits.count(); ++k) {
        int inside = 0;
        for (int x : orbits.orbit(k)) inside += m.mask[x] ? 1 : 0;
        if (inside == static_cast<int>(orbits.orbit(k).size())) {
            rows.push_back(k);
        } else if (inside != 0) {
            throw MeasurementSymmetryViolation("orbit " + std::to_string(k) + " straddles the final-vertex set");
        }
    }
    return measurement_from_rows(orbits.count(), std::move(rows));
}

int dense_limit() {
    if (const char* env = std::getenv("QWALK_DENSE_LIMIT")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < (1L << 20)) return static_cast<int>(v);
    }
    return 128;
}

Vec vectorize(const Mat& rho) {
    if (rho.rows() != rho.cols()) throw InvalidArgument("vectorize needs a square matrix");
    const Eigen::Index n = rho.rows();
    Vec v(n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = rho(i, j);
    return v;
}

Mat devectorize(const Vec& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) throw InvalidArgument("devectorize needs a vector of square length");
    Mat rho(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
    return rho;
}

Superoperators superoperators(const WalkOperator& U, const Measurement& M) {
    const int D = U.dim();
    if (M.dim != D) throw InvalidArgument("measurement dimension differs from the walk");
    if (D > dense_limit()) throw DimensionLimit("dimension " + std::to_string(D) + " exceeds the dense limit " +
                                                std::to_string(dense_limit()) + "; reduce via a quotient first");
    if (D > kSuperoperatorLimit)
        throw DimensionLimit("explicit D^2 superoperators are materialized only for D <= " +
                             std::to_string(kSuperoperatorLimit) + "; reduce via a quotient first");
    const Mat P = M.P();
    return {kernels::kron_conj((Mat::Identity(D, D) - P) * U.U), kernels::kron_conj(P * U.U)};
}

void validate_density(const Mat& rho0, int dim) {
    if (rho0.rows() != dim || rho0.cols() != dim) throw InvalidArgument("density operator has the wrong dimension");
    if (hermiticity_defect(rho0) > 1e-12) throw InvalidArgument("density operator is not Hermitian");
    if (std::abs(rho0.trace() - cplx(1.0)) > 1e-10) throw InvalidArgument("density operator does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("density operator is not positive semidefinite");
}

namespace {

struct Pure {
    double weight;
    Vec psi;
};

std::vector<Pure> pure_components(const Mat& rho0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho0);
    std::vector<Pure> out;
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k)
        if (es.eigenvalues()(k) > 1e-14) out.push_back({es.eigenvalues()(k), es.eigenvectors().col(k)});
    return out;
}

std::vector<double> mixed_sequence(const Mat& U, const Measurement& M, const Mat& rho0, int horizon, double stop_mass) {
    std::vector<double> total;
    for (const Pure& c : pure_components(rho0)) {
        auto p = kernels::measured_walk_probabilities(U, M.mask, c.psi, horizon, stop_mass);
        if (p.size() > total.size()) total.resize(p.size(), 0.0);
        for (std::size_t t = 0; t < p.size(); ++t) total[t] += c.weight * p[t];
    }
    return total;
}

}  // namespace

std::vector<double> p_sequence(const WalkOperator& U, const Measurement& M, const Mat& rho0, int horizon) {
    if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
    if (M.dim != U.dim()) throw InvalidArgument("measurement dimension differs from the walk");
    validate_density(rho0, U.dim());
    auto p = mixed_sequence(U.U, M, rho0, horizon, 0.0);
    p.resize(static_cast<std::size_t>(horizon), 0.0);
    return p;
}

std::vector<double> p_sequence_superop(const Superoperators& ops, const Mat& rho0, int horizon) {
    const Eigen::Index D = rho0.rows();
    Vec x = vectorize(rho0);
    std::vector<double> p;
    for (int t = 1; t <= horizon; ++t) {
        Vec y = ops.Y * x;
        cplx tr = 0.0;
        for (Eigen::Index i = 0; i < D; ++i) tr += y(i * D + i);
        p.push_back(tr.real());
        x = ops.N * x;
    }
    return p;
}

InfiniteProjector infinite_projector(const WalkOperator& U, const Measurement& M, double degeneracy_tol) {
    const int D = U.dim();
    if (M.dim != D) throw InvalidArgument("measurement dimension differs from the walk");
    if (!(degeneracy_tol > 0.0)) throw InvalidArgument("degeneracy tolerance must be positive");
    Eigen::ComplexSchur<Mat> schur(U.U);
    if (schur.info() != Eigen::Success) throw NumericalFailure("eigensolver failed on the walk operator");
    const Mat& Z = schur.matrixU();
    const Vec lam = schur.matrixT().diagonal();

    std::vector<int> order(static_cast<std::size_t>(D));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::arg(lam(a)) < std::arg(lam(b)); });
    auto close = [&](int a, int b) { return std::abs(std::arg(lam(b) / lam(a))) < degeneracy_tol; };
    std::vector<std::vector<int>> clusters{{order.front()}};
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (close(order[i - 1], order[i]))
            clusters.back().push_back(order[i]);
        else
            clusters.push_back({order[i]});
    }
    if (clusters.size() > 1 && close(clusters.back().back(), clusters.front().front())) {
        clusters.front().insert(clusters.front().begin(), clusters.back().begin(), clusters.back().end());
        clusters.pop_back();
    }

    const int f = M.rank();
    InfiniteProjector out;
    out.clusters = static_cast<int>(clusters.size());
    std::vector<Vec> null_vectors;
    for (const auto& cl : clusters) {
        const int k = static_cast<int>(cl.size());
        Mat V(D, k);
        for (int i = 0; i < k; ++i) V.col(i) = Z.col(cl[i]);
        Mat B(f, k);
        for (int r = 0; r < f; ++r) B.row(r) = V.row(M.final_rows[r]);
        Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
        int rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8) ++rank;
        const int nullity = k - rank;
        if (nullity > 0) {
            Mat W = V * svd.matrixV().rightCols(nullity);
            for (int i = 0; i < nullity; ++i) null_vectors.push_back(W.col(i));
        }
        out.structural_rank += std::max(k - f, 0);
    }
    out.rank = static_cast<int>(null_vectors.size());
    out.accidental_rank = out.rank - out.structural_rank;
    out.P = Mat::Zero(D, D);
    for (const Vec& w : null_vectors) out.P += w * w.adjoint();
    for (int r : M.final_rows) {
        out.P.row(r).setZero();
        out.P.col(r).setZero();
    }
    return out;
}

CMatrix c_matrix(const Mat& P_hat, const ColoredGraph& graph, int v) {
    if (P_hat.rows() != graph.dim()) throw InvalidArgument("projector dimension differs from the graph");
    if (v < 0 || v >= graph.num_vertices()) throw InvalidArgument("vertex out of range");
    const int d = graph.degree(v);
    CMatrix out;
    out.C = P_hat.block(graph.offset(v), graph.offset(v), d, d);
    Mat herm = 0.5 * (out.C + out.C.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    return out;
}

int intersection_dimension(const Mat& P_hat, const Mat& P_H, double tol) {
    if (P_hat.rows() != P_H.rows()) throw InvalidArgument("projector dimensions differ");
    Eigen::JacobiSVD<Mat> svd(P_hat * P_H);
    int count = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) >= 1.0 - tol) ++count;
    return count;
}

IntersectionCheck quotient_infinite_check(const InfiniteProjector& P_hat, const WalkOperator& U, const Measurement& M,
                                          const OrbitBasis& orbits, const std::vector<BasisPermutation>& reps,
                                          double degeneracy_tol) {
    check_measurement_symmetry(M, reps);
    IntersectionCheck out;
    out.dim = P_hat.rank == 0 ? 0 : intersection_dimension(P_hat.P, projector_PH(orbits));
    WalkOperator uh = induced_walk(U, orbits, reps);
    out.quotient_rank = infinite_projector(uh, quotient_measurement(M, orbits), degeneracy_tol).rank;
    return out;
}

std::string tau_status_name(TauStatus s) {
    switch (s) {
        case TauStatus::Finite: return "finite";
        case TauStatus::Infinite: return "infinite";
        case TauStatus::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

HittingReport hitting_time(const WalkOperator& U, const Measurement& M, const Mat& rho0, const HittingOptions& opt) {
    const int D = U.dim();
    if (M.dim != D) throw InvalidArgument("measurement dimension differs from the walk");
    if (D > dense_limit())
        throw DimensionLimit("dimension " + std::to_string(D) + " exceeds the dense limit " +
                             std::to_string(dense_limit()) + "; reduce via a quotient first");
    validate_density(rho0, D);

    HittingReport rep;
    const long long default_horizon = 10LL * D * D;
    const int horizon = opt.horizon > 0 ? opt.horizon : static_cast<int>(std::min<long long>(default_horizon, 1LL << 30));

    InfiniteProjector ip = infinite_projector(U, M, opt.degeneracy_tol);
    rep.P_rank = ip.rank;
    rep.P_rank_structural = ip.structural_rank;
    rep.P_rank_accidental = ip.accidental_rank;
    rep.overlap = (ip.P * rho0).trace().real();
    rep.hit_probability_bound = 1.0 - rep.overlap;
    rep.hit_probability_bound_squared = rep.hit_probability_bound * rep.hit_probability_bound;
    rep.P_hat = ip.P;

    auto p = mixed_sequence(U.U, M, rho0, horizon, 1e-15);
    rep.series_steps = static_cast<int>(p.size());
    double sum = 0.0, tsum = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        sum += p[t];
        tsum += static_cast<double>(t + 1) * p[t];
    }
    rep.hit_probability = sum;
    rep.series_converged = sum > 1.0 - opt.series_tol;
    if (rep.series_converged) rep.tau_series = tsum;
    p.resize(std::min(p.size(), static_cast<std::size_t>(std::max(opt.prefix_length, 0))));
    rep.p_prefix = std::move(p);

    const Mat P = M.P();
    if (ip.rank > 0 && rep.overlap > opt.overlap_tol) {
        rep.status = TauStatus::Infinite;
        rep.method = "none";
        ClosedForm cf = closed_form_hitting(U.U, P, rho0, opt.sigma_tol);
        rep.sigma_min = cf.sigma_min;
        rep.min_gap = cf.min_gap;
        rep.notes.push_back("initial state overlaps the infinite-hitting subspace");
        return rep;
    }

    ClosedForm cf = closed_form_hitting(U.U, P, rho0, opt.sigma_tol);
    rep.sigma_min = cf.sigma_min;
    rep.min_gap = cf.min_gap;
    if (cf.invertible) {
        rep.method = "closed-form";
    } else if (ip.rank > 0) {
        // the start state lives in range(I - P_hat), which U and P_f leave invariant
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ip.P + ip.P.adjoint()));
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) < 0.5) keep.push_back(i);
        Mat W(D, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) W.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
        const Mat Ur = W.adjoint() * U.U * W;
        const Mat Pr = W.adjoint() * P * W;
        const Mat rr = W.adjoint() * rho0 * W;
        ClosedForm cr = closed_form_hitting(Ur, Pr, rr, opt.sigma_tol);
        rep.notes.push_back("closed form evaluated on the complement of the infinite-hitting subspace");
        rep.sigma_min = cr.sigma_min;
        rep.min_gap = cr.min_gap;
        cf = cr;
        if (cf.invertible) rep.method = "complement";
    }
    if (!cf.invertible) {
        rep.status = TauStatus::Indeterminate;
        rep.method = "none";
        rep.notes.push_back("I - N is numerically singular and no infinite-hitting subspace explains it");
        return rep;
    }
    rep.status = TauStatus::Finite;
    rep.tau = cf.tau;
    rep.hit_probability_closed = cf.hit_probability;
    if (rep.tau_series) {
        rep.cross_check_ok = std::abs(*rep.tau_series - cf.tau) <= opt.series_tol;
        if (!rep.cross_check_ok) rep.notes.push_back("truncated series disagrees with the closed form");
    } else {
        rep.notes.push_back("truncated series did not converge within the horizon");
    }
    return rep;
}

}  // namespace qwalk
