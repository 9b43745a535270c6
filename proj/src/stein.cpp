#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "qwalk/errors.hpp"
#include "qwalk/hitting.hpp"

namespace qwalk {

SteinSolver::SteinSolver(const Mat& A) {
    if (A.rows() != A.cols()) throw InvalidArgument("Stein solver needs a square matrix");
    Eigen::ComplexSchur<Mat> schur(A);
    if (schur.info() != Eigen::Success) throw NumericalFailure("complex Schur decomposition failed");
    Z_ = schur.matrixU();
    T_ = schur.matrixT();
    eigenvalues_ = T_.diagonal();
    min_gap_ = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
        for (Eigen::Index j = 0; j < eigenvalues_.size(); ++j)
            min_gap_ = std::min(min_gap_, std::abs(1.0 - eigenvalues_(i) * std::conj(eigenvalues_(j))));
}

Mat SteinSolver::solve(const Mat& R) const {
    const Eigen::Index n = T_.rows();
    if (R.rows() != n || R.cols() != n) throw InvalidArgument("Stein right-hand side has the wrong size");
    const Mat Rt = Z_.adjoint() * R * Z_;
    Mat Y = Mat::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Vec rhs = Rt.col(j);
        const Eigen::Index tail = n - 1 - j;
        if (tail > 0) {
            Vec w = Y.rightCols(tail) * T_.row(j).tail(tail).adjoint();
            rhs += T_ * w;
        }
        Mat M = -std::conj(T_(j, j)) * T_;
        M.diagonal().array() += 1.0;
        Y.col(j) = M.triangularView<Eigen::Upper>().solve(rhs);
    }
    return Z_ * Y * Z_.adjoint();
}

ClosedForm closed_form_hitting(const Mat& U, const Mat& P, const Mat& rho0, double sigma_tol) {
    const Eigen::Index D = U.rows();
    const Mat Q = Mat::Identity(D, D) - P;
    const Mat A = Q * U;
    ClosedForm out;
    SteinSolver forward(A);
    out.min_gap = forward.min_gap();
    if (out.min_gap < 1e-12) {
        out.sigma_min = out.min_gap;
        return out;
    }
    SteinSolver backward(A.adjoint());

    // inverse iteration on (I-N)^dagger (I-N)
    Mat x(D, D);
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j) x(i, j) = cplx(std::cos(1.0 + i + 2.0 * j), std::sin(0.5 * i - j));
    x /= x.norm();
    double growth = 0.0;
    for (int it = 0; it < 40; ++it) {
        Mat y = forward.solve(backward.solve(x));
        const double g = y.norm();
        if (!std::isfinite(g)) {
            growth = std::numeric_limits<double>::infinity();
            break;
        }
        x = y / g;
        if (it > 0 && std::abs(g - growth) <= 1e-10 * g) {
            growth = g;
            break;
        }
        growth = g;
    }
    out.sigma_min = std::isfinite(growth) && growth > 0.0 ? 1.0 / std::sqrt(growth) : 0.0;
    out.invertible = out.sigma_min > sigma_tol;
    if (!out.invertible) return out;

    const Mat X1 = forward.solve(rho0);
    const Mat X2 = forward.solve(X1);
    const Mat PU = P * U;
    out.hit_probability = (PU * X1 * PU.adjoint()).trace().real();
    out.tau = (PU * X2 * PU.adjoint()).trace().real();
    return out;
}

}  // namespace qwalk
