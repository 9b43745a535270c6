#pragma once

#include <vector>

#include "qwalk/linalg.hpp"

// Data-parallel kernels. Every output element is produced by exactly one thread
// with the same summation order as the serial reference, so both backends agree bitwise.
namespace qwalk::kernels {

enum class Backend { Serial, Parallel };

namespace serial {
Mat orbit_compress(const Mat& m, const std::vector<std::vector<int>>& orbits);
double permutation_commutator_max(const Mat& m, const std::vector<int>& sigma);
Mat kron_conj(const Mat& a);
Vec matvec(const Mat& a, const Vec& x);
std::vector<double> measured_walk_probabilities(const Mat& u, const std::vector<char>& final_mask, Vec psi,
                                                int horizon, double stop_mass, Vec* remainder = nullptr);
}  // namespace serial

namespace parallel {
Mat orbit_compress(const Mat& m, const std::vector<std::vector<int>>& orbits);
double permutation_commutator_max(const Mat& m, const std::vector<int>& sigma);
Mat kron_conj(const Mat& a);
Vec matvec(const Mat& a, const Vec& x);
std::vector<double> measured_walk_probabilities(const Mat& u, const std::vector<char>& final_mask, Vec psi,
                                                int horizon, double stop_mass, Vec* remainder = nullptr);
int max_threads();
int openmp_version();
}  // namespace parallel

Backend default_backend();
void set_default_backend(Backend b);

// (B^dagger M B)_{jk} = sum_{x in O_j, y in O_k} M(x,y) / sqrt(|O_j||O_k|)
Mat orbit_compress(const Mat& m, const std::vector<std::vector<int>>& orbits);
// max |M(sigma x, sigma y) - M(x, y)|, i.e. the max entry of sigma M sigma^-1 - M
double permutation_commutator_max(const Mat& m, const std::vector<int>& sigma);
// A (x) conj(A)
Mat kron_conj(const Mat& a);
// p(1..T) for the pure state psi: apply U, record the mass on final rows, drop it, repeat.
// Stops early once the unmeasured mass falls below stop_mass.
std::vector<double> measured_walk_probabilities(const Mat& u, const std::vector<char>& final_mask, const Vec& psi,
                                                int horizon, double stop_mass, Vec* remainder = nullptr);

}  // namespace qwalk::kernels
