#include "compound/exterior.hpp"

#include "compound/combinat.hpp"
#include "compound/error.hpp"
#include "compound/numerics.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace compound {

namespace {

// In-place LU with partial pivoting on a row-major k x k buffer.
double lu_det_inplace(double* a, int k) {
    double det = 1.0;
    for (int c = 0; c < k; ++c) {
        int p = c;
        double best = std::abs(a[c * k + c]);
        for (int r = c + 1; r < k; ++r) {
            const double v = std::abs(a[r * k + c]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (p != c) {
            for (int j = 0; j < k; ++j) std::swap(a[c * k + j], a[p * k + j]);
            det = -det;
        }
        const double pivot = a[c * k + c];
        det *= pivot;
        for (int r = c + 1; r < k; ++r) {
            const double f = a[r * k + c] / pivot;
            if (f == 0.0) continue;
            for (int j = c + 1; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
        }
    }
    return det;
}

std::vector<std::vector<int>> zero_based(const std::vector<IndexTuple>& tuples) {
    std::vector<std::vector<int>> out;
    out.reserve(tuples.size());
    for (const auto& t : tuples) {
        std::vector<int> e;
        e.reserve(static_cast<std::size_t>(t.size()));
        for (int v : t.entries()) e.push_back(v - 1);
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

double determinant(const Matrix& a) {
    require(a.rows() == a.cols(), ErrorTag::invalid_argument, "determinant: matrix must be square");
    const int k = static_cast<int>(a.rows());
    if (k == 0) return 1.0;
    std::vector<double> buf(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) buf[static_cast<std::size_t>(i * k + j)] = a(i, j);
    return lu_det_inplace(buf.data(), k);
}

Matrix compound(const Matrix& x, int k) {
    const int n = static_cast<int>(x.rows());
    const int m = static_cast<int>(x.cols());
    require(k >= 1 && k <= std::min(n, m), ErrorTag::invalid_argument,
            "compound: k=" + std::to_string(k) + " out of range for a " + std::to_string(n) + "x" + std::to_string(m) +
                " matrix");
    if (k == 1) return x;

    const auto rows = zero_based(lex_tuples(n, k));
    const auto cols = zero_based(lex_tuples(m, k));
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    std::vector<double> buf(static_cast<std::size_t>(k * k));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& ri = rows[i];
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto& cj = cols[j];
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    buf[static_cast<std::size_t>(a * k + b)] = x(ri[static_cast<std::size_t>(a)], cj[static_cast<std::size_t>(b)]);
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = lu_det_inplace(buf.data(), k);
        }
    }
    return out;
}

Vector wedge(const Matrix& factors) {
    require(factors.cols() >= 1 && factors.cols() <= factors.rows(), ErrorTag::invalid_argument,
            "wedge: need 1 <= k <= n factors");
    return compound(factors, static_cast<int>(factors.cols())).col(0);
}

Vector wedge(std::span<const Vector> factors) {
    require(!factors.empty(), ErrorTag::invalid_argument, "wedge: no factors");
    const Eigen::Index n = factors.front().size();
    Matrix stacked(n, static_cast<Eigen::Index>(factors.size()));
    for (std::size_t i = 0; i < factors.size(); ++i) {
        require(factors[i].size() == n, ErrorTag::invalid_argument, "wedge: factors have mismatched lengths");
        stacked.col(static_cast<Eigen::Index>(i)) = factors[i];
    }
    return wedge(stacked);
}

WedgeMatrix wedge_matrix(const Vector& z, int n, int k) {
    require(k >= 1 && k < n, ErrorTag::invalid_argument, "wedge_matrix: requires 1 <= k < n");
    require(z.size() == binomial(n, k), ErrorTag::invalid_argument, "wedge_matrix: z has the wrong length");
    require(z.allFinite(), ErrorTag::invalid_argument, "wedge_matrix: non-finite z");
    require(z.squaredNorm() > 0.0, ErrorTag::degenerate_input, "wedge_matrix: z is zero");

    const auto rows = lex_tuples(n, k + 1);
    WedgeMatrix out{Matrix::Zero(static_cast<Eigen::Index>(rows.size()), n), n, k};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const IndexTuple& big = rows[i];
        for (int pos = 1; pos <= big.size(); ++pos) {
            const int j = big[pos - 1];
            const double sign = (pos % 2 == 1) ? 1.0 : -1.0;  // (-1)^(pos-1)
            const auto idx = indexof_tuple(big.without(j));
            out.data(static_cast<Eigen::Index>(i), j - 1) = sign * z(idx - 1);
        }
    }
    return out;
}

Decomposability is_decomposable(const Vector& z, int n, int k, const TolerancePolicy& policy) {
    require(k >= 1 && k < n, ErrorTag::invalid_argument, "is_decomposable: requires 1 <= k < n");
    require(z.size() == binomial(n, k), ErrorTag::invalid_argument, "is_decomposable: z has the wrong length");
    if (!z.allFinite() || z.squaredNorm() == 0.0) return {false, Matrix(n, 0)};

    const Vector unit = z.normalized();
    Matrix basis = kernel_basis(wedge_matrix(unit, n, k).data, policy);
    return {basis.cols() == k, std::move(basis)};
}

Matrix adjugate(const Matrix& a) {
    require(a.rows() == a.cols(), ErrorTag::invalid_argument, "adjugate: matrix must be square");
    const Eigen::Index n = a.rows();
    require(n >= 1, ErrorTag::invalid_argument, "adjugate: empty matrix");
    if (n == 1) return Matrix::Ones(1, 1);

    Matrix out(n, n);
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // minor of A with row j and column i deleted
            for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            out(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * determinant(minor);
        }
    }
    return out;
}

SignReversalPair sign_reversal_pair(int n) {
    require(n >= 1, ErrorTag::invalid_argument, "sign_reversal_pair: n must be positive");
    SignReversalPair out{Matrix::Zero(n, n), Matrix::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        out.s(i, i) = ((i + 1) % 2 == 0) ? 1.0 : -1.0;
        out.p(i, n - 1 - i) = 1.0;
    }
    return out;
}

Matrix adjugate_via_compound(const Matrix& a) {
    require(a.rows() == a.cols(), ErrorTag::invalid_argument, "adjugate_via_compound: matrix must be square");
    const int n = static_cast<int>(a.rows());
    require(n >= 2, ErrorTag::invalid_argument, "adjugate_via_compound: requires n >= 2");
    const auto [s, p] = sign_reversal_pair(n);
    return s * p * compound(a, n - 1).transpose() * p * s;
}

} // namespace compound
