#pragma once

#include "compound/numerics.hpp"
#include "compound/types.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace compound {

// ---- outcomes -------------------------------------------------------------------

/// The preimage is {A, -A} for even k and {A} for odd k.
struct UniqueUpToSign {
    Matrix a;
    bool sign_ambiguous = false;
};

/// The preimage {U * Sigma * T * V^T : det(T) = 1}; U, V orthonormal, Sigma positive diagonal.
struct RankOneFamily {
    Matrix u;
    Matrix sigma;
    Matrix v;

    Matrix representative() const { return u * sigma * v.transpose(); }
};

/// The preimage {B : rank(B) < k}; the zero matrix is its canonical member.
struct RankDeficientFamily {
    int k = 0;
};

using RecoveryOutcome = std::variant<UniqueUpToSign, RankOneFamily, RankDeficientFamily>;

struct RecoveryReport {
    int resample_count = 0;
    bool preprocessing_used = false;
    double reconstruction_residual = 0.0;  // ||C_k(result) - M||_F / ||M||_F
    int inferred_r = 0;
    double singular_value_residual = 0.0;  // residual of the log-linear system
    bool sign_fallback_used = false;       // exhaustive sign scan was needed
    std::vector<std::pair<std::string, double>> stage_timings_ms;
};

struct RecoveryResult {
    RecoveryOutcome outcome;
    RecoveryReport report;
};

std::string outcome_tag(const RecoveryOutcome& outcome);

// ---- pipeline stages ------------------------------------------------------------

/// The unique r >= k with binom(r, k) == rank_m; throws not_compound_decomposable otherwise.
int infer_base_rank(int rank_m, int k);

struct Preprocessed {
    Matrix q;        // n x n, invertible
    Matrix m_tilde;  // C_k(q) * M
    bool used = false;
    int resamples = 0;
    double gap = 0.0;  // smallest relative gap among the kept singular values of m_tilde
};

/// Smallest (sigma_i - sigma_{i+1}) / sigma_1 over the first `count` values; +inf when count < 2.
double relative_gap(const Vector& sigma, Eigen::Index count);

/// Left-multiply by C_k(Q) for random Q until the kept singular values are separated by gap_rtol.
Preprocessed preprocess_distinct(const Matrix& m, int n, int k, const TolerancePolicy& policy);

/// Recovers n x r unit columns U (up to column order and sign) from columns z = ±C_k(U).
Matrix wedge_decompose(const Matrix& z, int n, int r, int k, const TolerancePolicy& policy);

/// sqrt(diag((M M^T C_k(V))^T C_k(V))): the compound singular values in the order induced by V.
Vector order_compound_singular_values(const Matrix& m, const Matrix& v_hat, int k, const TolerancePolicy& policy);

struct SingularValueRecovery {
    Vector sigma;
    double residual = 0.0;
};

/// Positive sigma with prod_{j in I} sigma_j == d_I for every I in the lexicographic k-subsets of r.
SingularValueRecovery recover_singular_values(const Vector& d, int r, int k, const TolerancePolicy& policy);

struct AlignedFactors {
    Matrix v_tilde;
    Matrix w_tilde;
    Vector sigma;           // singular values of the base matrix, decreasing
    Vector compound_sigma;  // diag(C_k(diag(sigma)))
    double singular_value_residual = 0.0;
    bool fallback_used = false;
};

/// Orders both factor sets by their recovered singular values, matches the columns of C_k(V)
/// against the left singular vectors, and fixes the column signs of W so that
/// v_tilde * diag(sigma) * w_tilde^T reproduces M up to the sign c with c^k = 1.
AlignedFactors align_and_sign_adjust(const Matrix& v_hat, const Matrix& w_hat, const ReducedSvd& m_svd, int k,
                                     const TolerancePolicy& policy);

// ---- entry points ---------------------------------------------------------------

/// Every matrix A (n x m) with C_k(A) == M, dispatched on rank(M).
RecoveryResult inverse_compound(const Matrix& m, int n, int m_cols, int k, const TolerancePolicy& policy);

RankOneFamily rank_one_inverse(const Matrix& m, int n, int m_cols, int k, const TolerancePolicy& policy);

bool family_contains(const Matrix& b, const RankOneFamily& family, const TolerancePolicy& policy);

struct ClosedFormInverse {
    Matrix b;
    bool negation_also_valid = false;  // n odd
};

/// det(M)^{-(n-2)/(n-1)} C_{n-1}(M) for invertible compound-decomposable M with k = n - 1.
ClosedFormInverse closed_form_inverse_nminus1(const Matrix& m, const TolerancePolicy& policy);

/// ||C_k(a) - m||_F / ||m||_F (absolute when m == 0).
double compound_residual(const Matrix& a, const Matrix& m, int k);

} // namespace compound
