#include "compound/recovery.hpp"

#include "compound/combinat.hpp"
#include "compound/error.hpp"
#include "compound/exterior.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace compound {

namespace {

class StageClock {
public:
    explicit StageClock(RecoveryReport& report) : report_(report), start_(std::chrono::steady_clock::now()) {}

    void lap(std::string stage) {
        const auto now = std::chrono::steady_clock::now();
        report_.stage_timings_ms.emplace_back(std::move(stage),
                                              std::chrono::duration<double, std::milli>(now - start_).count());
        start_ = now;
    }

private:
    RecoveryReport& report_;
    std::chrono::steady_clock::time_point start_;
};

// Compact SVD truncated to exactly `rho` terms.
ReducedSvd truncated_svd(const Matrix& x, Eigen::Index rho) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU().leftCols(rho), svd.singularValues().head(rho), svd.matrixV().leftCols(rho)};
}

void check_compound_shape(const Matrix& m, int n, int m_cols, int k) {
    require(n >= 1 && m_cols >= 1 && k >= 1 && k <= std::min(n, m_cols), ErrorTag::invalid_argument,
            "k must satisfy 1 <= k <= min(n, m)");
    require(m.rows() == binomial(n, k) && m.cols() == binomial(m_cols, k), ErrorTag::invalid_argument,
            "input has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                std::to_string(binomial(n, k)) + "x" + std::to_string(binomial(m_cols, k)));
    require(m.allFinite(), ErrorTag::invalid_argument, "input has non-finite entries");
}

std::vector<int> decreasing_order(const Vector& values) {
    std::vector<int> idx(static_cast<std::size_t>(values.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return values(a) > values(b); });
    return idx;
}

Matrix permute_columns(const Matrix& x, const std::vector<int>& order) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < order.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = x.col(order[i]);
    return out;
}

// Flip the overall sign so that the first entry (column-major) of non-negligible size is positive.
void canonicalize_sign(Matrix& a) {
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (std::abs(a(i, j)) > 1e-8 * scale) {
                if (a(i, j) < 0) a = -a;
                return;
            }
        }
    }
}

std::optional<std::vector<bool>> exhaustive_sign_scan(const Matrix& incidence, const std::vector<bool>& parity) {
    const auto r = static_cast<int>(incidence.cols());
    require(r < 31, ErrorTag::unsupported, "exhaustive sign scan limited to r < 31");
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << r); ++mask) {
        bool ok = true;
        for (Eigen::Index row = 0; row < incidence.rows() && ok; ++row) {
            bool p = false;
            for (int j = 0; j < r; ++j)
                if (incidence(row, j) == 1.0 && ((mask >> j) & 1U)) p = !p;
            ok = (p == parity[static_cast<std::size_t>(row)]);
        }
        if (ok) {
            std::vector<bool> x(static_cast<std::size_t>(r));
            for (int j = 0; j < r; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1U;
            return x;
        }
    }
    return std::nullopt;
}

} // namespace

std::string outcome_tag(const RecoveryOutcome& outcome) {
    switch (outcome.index()) {
    case 0: return "unique";
    case 1: return "rank_one_family";
    default: return "rank_deficient";
    }
}

double compound_residual(const Matrix& a, const Matrix& m, int k) {
    const double diff = (compound(a, k) - m).norm();
    const double scale = m.norm();
    return scale > 0.0 ? diff / scale : diff;
}

int infer_base_rank(int rank_m, int k) {
    require(rank_m >= 1 && k >= 1, ErrorTag::invalid_argument, "infer_base_rank: requires rank_m >= 1 and k >= 1");
    for (int r = k;; ++r) {
        const auto c = binomial(r, k);
        if (c == rank_m) return r;
        if (c > rank_m) break;
    }
    fail(ErrorTag::not_compound_decomposable,
         "rank " + std::to_string(rank_m) + " is not binom(r," + std::to_string(k) + ") for any r");
}

double relative_gap(const Vector& sigma, Eigen::Index count) {
    if (count < 2) return std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i + 1 < count; ++i) gap = std::min(gap, (sigma(i) - sigma(i + 1)) / sigma(0));
    return gap;
}

Preprocessed preprocess_distinct(const Matrix& m, int n, int k, const TolerancePolicy& policy) {
    policy.validate();
    require(m.rows() == binomial(n, k), ErrorTag::invalid_argument, "preprocess_distinct: rows must equal binom(n,k)");
    const Vector sigma = singular_values(m);
    const Eigen::Index rho = numerical_rank(sigma, m.rows(), m.cols(), policy);

    Preprocessed out{Matrix::Identity(n, n), m, false, 0, relative_gap(sigma, rho)};
    if (out.gap >= policy.gap_rtol) return out;

    std::mt19937_64 rng(policy.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double best = out.gap;
    for (int attempt = 1; attempt <= policy.max_resample; ++attempt) {
        Matrix q(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) q(i, j) = normal(rng);
        Matrix mt = compound(q, k) * m;
        const Vector st = singular_values(mt);
        // Q must keep the rank; a near-singular draw shows up as a lost singular value
        if (numerical_rank(st, mt.rows(), mt.cols(), policy) != rho) continue;
        const double gap = relative_gap(st, rho);
        best = std::max(best, gap);
        if (gap >= policy.gap_rtol) return {std::move(q), std::move(mt), true, attempt, gap};
    }
    fail(ErrorTag::preprocessing_failed, "preprocess_distinct: no draw separated the singular values after " +
                                             std::to_string(policy.max_resample) + " attempts (best gap " +
                                             std::to_string(best) + ")");
}

Vector order_compound_singular_values(const Matrix& m, const Matrix& v_hat, int k, const TolerancePolicy& policy) {
    const Matrix cv = compound(v_hat, k);
    require(cv.rows() == m.rows(), ErrorTag::invalid_argument, "order_compound_singular_values: shape mismatch");
    // diag((M M^T C)^T C) = squared column norms of M^T C
    const Vector d = (m.transpose() * cv).colwise().norm();
    const double floor = policy.rank_rtol * m.norm() * static_cast<double>(std::max(m.rows(), m.cols()));
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        require(d(i) > floor, ErrorTag::ordering_failed,
                "order_compound_singular_values: entry " + std::to_string(i + 1) + " is not positive");
    }
    return d;
}

SingularValueRecovery recover_singular_values(const Vector& d, int r, int k, const TolerancePolicy& policy) {
    require(k >= 1 && k < r, ErrorTag::invalid_argument, "recover_singular_values: requires 1 <= k < r");
    require(d.size() == binomial(r, k), ErrorTag::invalid_argument, "recover_singular_values: d must have binom(r,k) entries");
    require((d.array() > 0.0).all(), ErrorTag::invalid_argument, "recover_singular_values: entries must be positive");

    const auto ls = least_squares(incidence_matrix(r, k), d.array().log().matrix());
    require(ls.residual <= policy.residual_rtol, ErrorTag::inconsistent_compound_values,
            "recover_singular_values: log-system residual " + std::to_string(ls.residual) + " exceeds tolerance");
    return {ls.x.array().exp().matrix(), ls.residual};
}

AlignedFactors align_and_sign_adjust(const Matrix& v_hat, const Matrix& w_hat, const ReducedSvd& m_svd, int k,
                                     const TolerancePolicy& policy) {
    const auto r = static_cast<int>(v_hat.cols());
    require(w_hat.cols() == r && k < r, ErrorTag::invalid_argument, "align_and_sign_adjust: factor widths differ or k >= r");
    require(m_svd.rank() == binomial(r, k), ErrorTag::invalid_argument,
            "align_and_sign_adjust: compact SVD must have binom(r,k) terms");

    // (1) shared permutation: order both factor sets by recovered singular values
    const Matrix m = m_svd.reconstruct();
    const auto sv_v = recover_singular_values(order_compound_singular_values(m, v_hat, k, policy), r, k, policy);
    const auto sv_w = recover_singular_values(order_compound_singular_values(m.transpose(), w_hat, k, policy), r, k, policy);
    const auto order_v = decreasing_order(sv_v.sigma);
    const auto order_w = decreasing_order(sv_w.sigma);

    AlignedFactors out;
    out.v_tilde = permute_columns(v_hat, order_v);
    const Matrix w_sorted = permute_columns(w_hat, order_w);
    out.sigma.resize(r);
    for (int i = 0; i < r; ++i) out.sigma(i) = sv_v.sigma(order_v[static_cast<std::size_t>(i)]);
    out.singular_value_residual = std::max(sv_v.residual, sv_w.residual);

    // (2) match each column of C_k(V~) to a left singular vector; carry the sign over to R
    const Matrix cv = compound(out.v_tilde, k);
    const Eigen::Index count = cv.cols();
    Matrix r_flipped(m_svd.right.rows(), count);
    out.compound_sigma.resize(count);
    std::vector<bool> taken(static_cast<std::size_t>(count), false);
    for (Eigen::Index i = 0; i < count; ++i) {
        Eigen::Index best = 0;
        (m_svd.left.transpose() * cv.col(i)).cwiseAbs().maxCoeff(&best);
        const double plus = (m_svd.left.col(best) - cv.col(i)).norm();
        const double minus = (m_svd.left.col(best) + cv.col(i)).norm();
        require(std::min(plus, minus) <= policy.sign_atol && !taken[static_cast<std::size_t>(best)],
                ErrorTag::alignment_failed,
                "align_and_sign_adjust: compound column " + std::to_string(i + 1) +
                    " matches no left singular vector (distance " + std::to_string(std::min(plus, minus)) + ")");
        taken[static_cast<std::size_t>(best)] = true;
        r_flipped.col(i) = (minus < plus ? -1.0 : 1.0) * m_svd.right.col(best);
        out.compound_sigma(i) = m_svd.sigma(best);
    }

    // (3) sign pattern of C_k(W) against the flipped R, as parity constraints on the column flips of W
    const Matrix cw = compound(w_sorted, k);
    std::vector<bool> parity(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i) {
        const double plus = (cw.col(i) - r_flipped.col(i)).norm();
        const double minus = (cw.col(i) + r_flipped.col(i)).norm();
        require(std::min(plus, minus) <= policy.sign_atol, ErrorTag::alignment_failed,
                "align_and_sign_adjust: right compound column " + std::to_string(i + 1) + " is inconsistent (distance " +
                    std::to_string(std::min(plus, minus)) + ")");
        parity[static_cast<std::size_t>(i)] = minus < plus;
    }

    const Matrix incidence = incidence_matrix(r, k);
    std::optional<std::vector<bool>> flips;
    if (policy.exhaustive_sign_search) {
        flips = exhaustive_sign_scan(incidence, parity);
        out.fallback_used = true;
    } else {
        flips = gf2_solve(incidence, parity);
    }
    require(flips.has_value(), ErrorTag::sign_failed, "align_and_sign_adjust: no column sign pattern reproduces R");

    out.w_tilde = w_sorted;
    for (int j = 0; j < r; ++j)
        if ((*flips)[static_cast<std::size_t>(j)]) out.w_tilde.col(j) *= -1.0;
    return out;
}

RecoveryResult inverse_compound(const Matrix& m, int n, int m_cols, int k, const TolerancePolicy& policy) {
    policy.validate();
    check_compound_shape(m, n, m_cols, k);

    RecoveryResult result{RankDeficientFamily{k}, {}};
    RecoveryReport& report = result.report;
    StageClock clock(report);

    const Vector sigma = singular_values(m);
    const auto rho = static_cast<int>(numerical_rank(sigma, m.rows(), m.cols(), policy));
    clock.lap("rank");

    if (rho == 0) {
        report.inferred_r = k;
        report.reconstruction_residual = m.norm();
        return result;
    }
    if (rho == 1) {
        auto family = rank_one_inverse(m, n, m_cols, k, policy);
        clock.lap("rank_one");
        report.inferred_r = k;
        report.reconstruction_residual = compound_residual(family.representative(), m, k);
        result.outcome = std::move(family);
        return result;
    }

    const int r = infer_base_rank(rho, k);
    require(r <= std::min(n, m_cols), ErrorTag::not_compound_decomposable,
            "inferred base rank " + std::to_string(r) + " exceeds min(n, m)");
    report.inferred_r = r;

    const Preprocessed pre = preprocess_distinct(m, n, k, policy);
    report.preprocessing_used = pre.used;
    report.resample_count = pre.resamples;
    clock.lap("preprocess");

    const ReducedSvd svd = truncated_svd(pre.m_tilde, rho);
    clock.lap("svd");

    const Matrix v_hat = wedge_decompose(svd.left, n, r, k, policy);
    const Matrix w_hat = wedge_decompose(svd.right, m_cols, r, k, policy);
    clock.lap("wedge_decompose");

    const AlignedFactors aligned = align_and_sign_adjust(v_hat, w_hat, svd, k, policy);
    report.singular_value_residual = aligned.singular_value_residual;
    report.sign_fallback_used = aligned.fallback_used;
    clock.lap("align");

    const Matrix a_tilde = aligned.v_tilde * aligned.sigma.asDiagonal() * aligned.w_tilde.transpose();
    Matrix a = pre.used ? Matrix(pre.q.partialPivLu().solve(a_tilde)) : a_tilde;
    const bool even = (k % 2 == 0);
    if (even && policy.canonical_sign) canonicalize_sign(a);
    clock.lap("compose");

    report.reconstruction_residual = compound_residual(a, m, k);
    clock.lap("verify");
    require(report.reconstruction_residual <= policy.residual_rtol, ErrorTag::verification_failed,
            "reconstruction residual " + std::to_string(report.reconstruction_residual) + " exceeds tolerance");

    result.outcome = UniqueUpToSign{std::move(a), even};
    return result;
}

} // namespace compound
