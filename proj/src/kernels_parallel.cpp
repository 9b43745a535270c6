#include <omp.h>

#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk::kernels::parallel {

int max_threads() { return omp_get_max_threads(); }
int openmp_version() { return _OPENMP; }

Mat orbit_compress(const Mat& m, const std::vector<std::vector<int>>& orbits) {
    const auto k = static_cast<Eigen::Index>(orbits.size());
    Mat out(k, k);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index ab = 0; ab < k * k; ++ab) {
        const Eigen::Index a = ab / k, b = ab % k;
        double re = 0.0, im = 0.0;
        for (int x : orbits[a])
            for (int y : orbits[b]) {
                re += m(x, y).real();
                im += m(x, y).imag();
            }
        double norm = std::sqrt(static_cast<double>(orbits[a].size()) * static_cast<double>(orbits[b].size()));
        out(a, b) = cplx(re / norm, im / norm);
    }
    return out;
}

double permutation_commutator_max(const Mat& m, const std::vector<int>& sigma) {
    if (m.rows() != m.cols() || static_cast<Eigen::Index>(sigma.size()) != m.rows())
        throw InvalidArgument("commutator: dimension mismatch");
    const auto n = m.rows();
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(m(sigma[i], sigma[j]) - m(i, j)));
    return worst;
}

Mat kron_conj(const Mat& a) {
    const auto d = a.rows();
    const auto e = a.cols();
    Mat out(d * d, e * e);
#pragma omp parallel for schedule(static)
    for (Eigen::Index jl = 0; jl < e * e; ++jl) {
        const Eigen::Index j = jl / e, l = jl % e;
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index k = 0; k < d; ++k) {
                const cplx x = a(i, j);
                const cplx y = a(k, l);
                out(i * d + k, j * e + l) = cplx(x.real() * y.real() + x.imag() * y.imag(),
                                                 x.imag() * y.real() - x.real() * y.imag());
            }
    }
    return out;
}

Vec matvec(const Mat& a, const Vec& x) {
    const auto n = a.rows();
    Vec y(n);
#pragma omp parallel
    {
        const int nt = omp_get_num_threads();
        const int id = omp_get_thread_num();
        const Eigen::Index lo = n * id / nt, hi = n * (id + 1) / nt;
        std::vector<double> re(static_cast<std::size_t>(hi - lo), 0.0), im(static_cast<std::size_t>(hi - lo), 0.0);
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            const double xr = x(k).real(), xi = x(k).imag();
            for (Eigen::Index i = lo; i < hi; ++i) {
                const cplx v = a(i, k);
                re[i - lo] += v.real() * xr - v.imag() * xi;
                im[i - lo] += v.real() * xi + v.imag() * xr;
            }
        }
        for (Eigen::Index i = lo; i < hi; ++i) y(i) = cplx(re[i - lo], im[i - lo]);
    }
    return y;
}

std::vector<double> measured_walk_probabilities(const Mat& u, const std::vector<char>& final_mask, Vec psi,
                                                int horizon, double stop_mass, Vec* remainder) {
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(std::min(horizon, 1 << 16)));
    for (int t = 1; t <= horizon; ++t) {
        psi = matvec(u, psi);
        double hit = 0.0, left = 0.0;
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            if (final_mask[i]) {
                hit += std::norm(psi(i));
                psi(i) = 0.0;
            } else {
                left += std::norm(psi(i));
            }
        }
        p.push_back(hit);
        if (left < stop_mass) break;
    }
    if (remainder) *remainder = psi;
    return p;
}

}  // namespace qwalk::kernels::parallel
