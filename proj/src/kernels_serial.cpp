#include <algorithm>
#include <cmath>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk::kernels {

namespace {
Backend g_backend = Backend::Parallel;
}

Backend default_backend() { return g_backend; }
void set_default_backend(Backend b) { g_backend = b; }

Mat orbit_compress(const Mat& m, const std::vector<std::vector<int>>& orbits) {
    return g_backend == Backend::Serial ? serial::orbit_compress(m, orbits) : parallel::orbit_compress(m, orbits);
}

double permutation_commutator_max(const Mat& m, const std::vector<int>& sigma) {
    return g_backend == Backend::Serial ? serial::permutation_commutator_max(m, sigma)
                                        : parallel::permutation_commutator_max(m, sigma);
}

Mat kron_conj(const Mat& a) {
    return g_backend == Backend::Serial ? serial::kron_conj(a) : parallel::kron_conj(a);
}

std::vector<double> measured_walk_probabilities(const Mat& u, const std::vector<char>& final_mask, const Vec& psi,
                                                int horizon, double stop_mass, Vec* remainder) {
    return g_backend == Backend::Serial
               ? serial::measured_walk_probabilities(u, final_mask, psi, horizon, stop_mass, remainder)
               : parallel::measured_walk_probabilities(u, final_mask, psi, horizon, stop_mass, remainder);
}

namespace serial {

Mat orbit_compress(const Mat& m, const std::vector<std::vector<int>>& orbits) {
    const auto k = static_cast<Eigen::Index>(orbits.size());
    Mat out(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            double re = 0.0, im = 0.0;
            for (int x : orbits[a])
                for (int y : orbits[b]) {
                    re += m(x, y).real();
                    im += m(x, y).imag();
                }
            double norm = std::sqrt(static_cast<double>(orbits[a].size()) * static_cast<double>(orbits[b].size()));
            out(a, b) = cplx(re / norm, im / norm);
        }
    }
    return out;
}

double permutation_commutator_max(const Mat& m, const std::vector<int>& sigma) {
    if (m.rows() != m.cols() || static_cast<Eigen::Index>(sigma.size()) != m.rows())
        throw InvalidArgument("commutator: dimension mismatch");
    const auto n = m.rows();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(m(sigma[i], sigma[j]) - m(i, j)));
    return worst;
}

Mat kron_conj(const Mat& a) {
    const auto d = a.rows();
    const auto e = a.cols();
    Mat out(d * d, e * e);
    for (Eigen::Index j = 0; j < e; ++j)
        for (Eigen::Index l = 0; l < e; ++l)
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index k = 0; k < d; ++k) {
                    const cplx x = a(i, j);
                    const cplx y = a(k, l);
                    out(i * d + k, j * e + l) = cplx(x.real() * y.real() + x.imag() * y.imag(),
                                                     x.imag() * y.real() - x.real() * y.imag());
                }
    return out;
}

Vec matvec(const Mat& a, const Vec& x) {
    const auto n = a.rows();
    std::vector<double> re(static_cast<std::size_t>(n), 0.0), im(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        const double xr = x(k).real(), xi = x(k).imag();
        for (Eigen::Index i = 0; i < n; ++i) {
            const cplx v = a(i, k);
            re[i] += v.real() * xr - v.imag() * xi;
            im[i] += v.real() * xi + v.imag() * xr;
        }
    }
    Vec y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = cplx(re[i], im[i]);
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

}  // namespace serial
}  // namespace qwalk::kernels
