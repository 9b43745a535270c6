#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qwalk {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const Mat& u) {
    return max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols()));
}

inline double hermiticity_defect(const Mat& m) {
    return max_abs(m - m.adjoint());
}

}  // namespace qwalk
