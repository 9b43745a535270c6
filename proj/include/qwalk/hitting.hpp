#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/symmetry.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// P_f is diagonal: the identity on the coin space of every final vertex.
struct Measurement {
    int dim = 0;
    std::vector<int> final_rows;
    std::vector<char> mask;

    Mat P() const;
    Mat Q() const;
    int rank() const { return static_cast<int>(final_rows.size()); }
};

Measurement make_measurement(const ColoredGraph& graph, const std::vector<int>& final_vertices);
Measurement measurement_from_rows(int dim, std::vector<int> rows);
// Throws MeasurementSymmetryViolation naming the first generator that moves a final row out of the set.
void check_measurement_symmetry(const Measurement& m, const std::vector<BasisPermutation>& reps);
// B^dagger P_f B, which is again a diagonal 0/1 projector when P_f is H-invariant.
Measurement quotient_measurement(const Measurement& m, const OrbitBasis& orbits);

// D <= 128 unless QWALK_DENSE_LIMIT says otherwise.
int dense_limit();
// Explicit D^2 x D^2 superoperators are materialized only up to this D.
inline constexpr int kSuperoperatorLimit = 48;

Vec vectorize(const Mat& rho);
Mat devectorize(const Vec& v);

struct Superoperators {
    Mat N;
    Mat Y;
};
Superoperators superoperators(const WalkOperator& U, const Measurement& M);

std::vector<double> p_sequence(const WalkOperator& U, const Measurement& M, const Mat& rho0, int horizon);
std::vector<double> p_sequence_superop(const Superoperators& ops, const Mat& rho0, int horizon);

// Solves X - A X A^dagger = R via the complex Schur form of A.
class SteinSolver {
public:
    explicit SteinSolver(const Mat& A);
    Mat solve(const Mat& R) const;
    // min |1 - lambda_i conj(lambda_j)| over eigenvalue pairs of A
    double min_gap() const { return min_gap_; }
    const Vec& eigenvalues() const { return eigenvalues_; }

private:
    Mat Z_;
    Mat T_;
    Vec eigenvalues_;
    double min_gap_ = 0.0;
};

// Closed form sum_t t p(t) = Tr(P U X2 U^dagger P) with (I-N) X1 = rho, (I-N) X2 = X1, N: X -> A X A^dagger, A = (I-P) U.
struct ClosedForm {
    double tau = 0.0;
    double hit_probability = 0.0;
    double sigma_min = 0.0;
    double min_gap = 0.0;
    bool invertible = false;
};
ClosedForm closed_form_hitting(const Mat& U, const Mat& P, const Mat& rho0, double sigma_tol = 1e-9);

struct InfiniteProjector {
    Mat P;
    int rank = 0;
    int structural_rank = 0;
    int accidental_rank = 0;
    int clusters = 0;
};
InfiniteProjector infinite_projector(const WalkOperator& U, const Measurement& M, double degeneracy_tol = 1e-8);

struct CMatrix {
    Mat C;
    RVec eigenvalues;  // ascending
    Mat eigenvectors;
};
CMatrix c_matrix(const Mat& P_hat, const ColoredGraph& graph, int v);

// Multiplicity of singular value 1 of P_hat P_H.
int intersection_dimension(const Mat& P_hat, const Mat& P_H, double tol = 1e-8);

struct IntersectionCheck {
    int dim = 0;
    int quotient_rank = 0;
};
IntersectionCheck quotient_infinite_check(const InfiniteProjector& P_hat, const WalkOperator& U, const Measurement& M,
                                          const OrbitBasis& orbits, const std::vector<BasisPermutation>& reps,
                                          double degeneracy_tol = 1e-8);

enum class TauStatus { Finite, Infinite, Indeterminate };
std::string tau_status_name(TauStatus s);

struct HittingOptions {
    int horizon = 0;  // 0 means 10 D^2
    int prefix_length = 100;
    double degeneracy_tol = 1e-8;
    double overlap_tol = 1e-9;
    double sigma_tol = 1e-9;
    double series_tol = 1e-6;
};

struct HittingReport {
    TauStatus status = TauStatus::Indeterminate;
    std::optional<double> tau;
    std::string method;  // closed-form, complement or none
    std::vector<double> p_prefix;
    double hit_probability = 0.0;  // truncated series
    std::optional<double> hit_probability_closed;
    std::optional<double> tau_series;
    int series_steps = 0;
    bool series_converged = false;
    bool cross_check_ok = false;
    int P_rank = 0;
    int P_rank_structural = 0;
    int P_rank_accidental = 0;
    double overlap = 0.0;                  // Tr(P_hat rho0)
    double hit_probability_bound = 0.0;    // Tr((I - P_hat) rho0)
    double hit_probability_bound_squared = 0.0;
    double sigma_min = 0.0;
    double min_gap = 0.0;
    std::optional<int> intersection_dim;
    std::optional<int> intersection_dim_quotient;
    std::vector<std::pair<std::string, std::vector<double>>> c_matrix_spectra;
    std::vector<std::string> notes;
    Mat P_hat;
};

void validate_density(const Mat& rho0, int dim);
HittingReport hitting_time(const WalkOperator& U, const Measurement& M, const Mat& rho0, const HittingOptions& opt = {});

}  // namespace qwalk
