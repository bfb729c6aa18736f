#include "compound/numerics.hpp"

#include "compound/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace compound {

void TolerancePolicy::validate() const {
    require(rank_rtol > 0 && gap_rtol > 0 && sign_atol > 0 && residual_rtol > 0, ErrorTag::invalid_argument,
            "TolerancePolicy: tolerances must be strictly positive");
    require(max_resample >= 1, ErrorTag::invalid_argument, "TolerancePolicy: max_resample must be >= 1");
}

namespace {

void require_finite(const Matrix& x, const char* who) {
    require(x.allFinite(), ErrorTag::invalid_argument, std::string(who) + ": non-finite entries");
}

} // namespace

Vector singular_values(const Matrix& x) {
    if (x.size() == 0) return Vector();
    return Eigen::JacobiSVD<Matrix>(x).singularValues();
}

Eigen::Index numerical_rank(const Vector& sigma, Eigen::Index rows, Eigen::Index cols, const TolerancePolicy& policy) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    const double cutoff = policy.rank_rtol * sigma(0) * static_cast<double>(std::max(rows, cols));
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
    return rank;
}

Eigen::Index numerical_rank(const Matrix& x, const TolerancePolicy& policy) {
    require_finite(x, "numerical_rank");
    return numerical_rank(singular_values(x), x.rows(), x.cols(), policy);
}

ReducedSvd reduced_svd(const Matrix& x, const TolerancePolicy& policy) {
    require_finite(x, "reduced_svd");
    if (x.size() == 0) return {Matrix(x.rows(), 0), Vector(), Matrix(x.cols(), 0)};
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index rho = numerical_rank(svd.singularValues(), x.rows(), x.cols(), policy);
    return {svd.matrixU().leftCols(rho), svd.singularValues().head(rho), svd.matrixV().leftCols(rho)};
}

Matrix kernel_basis(const Matrix& x, const TolerancePolicy& policy) {
    require_finite(x, "kernel_basis");
    const Eigen::Index q = x.cols();
    if (x.rows() == 0) return Matrix::Identity(q, q);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullV);
    const Eigen::Index rank = numerical_rank(svd.singularValues(), x.rows(), x.cols(), policy);
    return svd.matrixV().rightCols(q - rank);
}

Matrix orthonormal_span(const Matrix& x, const TolerancePolicy& policy) {
    require_finite(x, "orthonormal_span");
    if (x.cols() == 0) return Matrix(x.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU);
    const Eigen::Index rank = numerical_rank(svd.singularValues(), x.rows(), x.cols(), policy);
    return svd.matrixU().leftCols(rank);
}

Matrix subspace_intersection(const Matrix& b1, const Matrix& b2, const TolerancePolicy& policy) {
    require(b1.rows() == b2.rows(), ErrorTag::invalid_argument, "subspace_intersection: ambient dimensions differ");
    const Eigen::Index n = b1.rows();
    const Eigen::Index k1 = b1.cols();
    if (k1 == 0 || b2.cols() == 0) return Matrix(n, 0);

    Matrix stacked(n, k1 + b2.cols());
    stacked << b1, -b2;
    const Matrix null = kernel_basis(stacked, policy);
    const Eigen::Index dim = null.cols();
    if (dim == 0) return Matrix(n, 0);

    // B1 * N_{1:k1,:} spans the intersection; re-orthonormalise to exactly `dim` columns.
    const Matrix raw = b1 * null.topRows(k1);
    Eigen::JacobiSVD<Matrix> svd(raw, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(dim);
}

LeastSquaresResult least_squares(const Matrix& a, const Vector& y) {
    require(a.rows() == y.size(), ErrorTag::invalid_argument, "least_squares: dimension mismatch");
    require_finite(a, "least_squares");
    require(y.allFinite(), ErrorTag::invalid_argument, "least_squares: non-finite right-hand side");
    const TolerancePolicy defaults;
    require(a.rows() >= a.cols() && numerical_rank(a, defaults) == a.cols(), ErrorTag::rank_deficient_system,
            "least_squares: system matrix is not of full column rank");
    LeastSquaresResult out;
    out.x = a.colPivHouseholderQr().solve(y);
    out.residual = (a * out.x - y).norm();
    return out;
}

// ---- GF(2) -------------------------------------------------------------------

Gf2System::Gf2System(int rows, int cols)
    : rows_(rows), cols_(cols), words_((cols + 1 + 63) / 64),
      bits_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(words_), 0) {
    require(rows >= 0 && cols >= 0, ErrorTag::invalid_argument, "Gf2System: negative size");
}

void Gf2System::set(int row, int col, bool value) {
    auto& w = bits_[static_cast<std::size_t>(row * words_ + col / 64)];
    const std::uint64_t mask = std::uint64_t{1} << (col % 64);
    w = value ? (w | mask) : (w & ~mask);
}

bool Gf2System::get(int row, int col) const {
    return (bits_[static_cast<std::size_t>(row * words_ + col / 64)] >> (col % 64)) & 1U;
}

void Gf2System::set_rhs(int row, bool value) { set(row, cols_, value); }
bool Gf2System::rhs(int row) const { return get(row, cols_); }

std::optional<std::vector<bool>> Gf2System::solve() const {
    auto m = bits_;
    auto row_ptr = [&](int r) { return m.data() + static_cast<std::ptrdiff_t>(r) * words_; };
    auto bit = [&](int r, int c) { return (row_ptr(r)[c / 64] >> (c % 64)) & 1U; };

    std::vector<int> pivot_col;
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
        int p = rank;
        while (p < rows_ && !bit(p, c)) ++p;
        if (p == rows_) continue;
        if (p != rank) std::swap_ranges(row_ptr(p), row_ptr(p) + words_, row_ptr(rank));
        for (int r = 0; r < rows_; ++r) {
            if (r != rank && bit(r, c)) {
                for (int w = 0; w < words_; ++w) row_ptr(r)[w] ^= row_ptr(rank)[w];
            }
        }
        pivot_col.push_back(c);
        ++rank;
    }
    // 0 = 1 rows
    for (int r = rank; r < rows_; ++r)
        if (bit(r, cols_)) return std::nullopt;

    std::vector<bool> x(static_cast<std::size_t>(cols_), false);
    for (int r = 0; r < rank; ++r) x[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(r)])] = bit(r, cols_);
    return x;
}

std::optional<std::vector<bool>> gf2_solve(const Matrix& a, const std::vector<bool>& b) {
    require(static_cast<std::size_t>(a.rows()) == b.size(), ErrorTag::invalid_argument, "gf2_solve: dimension mismatch");
    Gf2System sys(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double v = a(i, j);
            require(v == 0.0 || v == 1.0, ErrorTag::invalid_argument, "gf2_solve: entries must be 0 or 1");
            sys.set(static_cast<int>(i), static_cast<int>(j), v == 1.0);
        }
        sys.set_rhs(static_cast<int>(i), b[static_cast<std::size_t>(i)]);
    }
    return sys.solve();
}

} // namespace compound
