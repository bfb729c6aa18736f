#pragma once

#include "compound/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace compound {

/// Compact SVD X = left * diag(sigma) * right^T keeping only the numerically
/// non-zero singular values (sigma strictly positive, non-increasing).
struct ReducedSvd {
    Matrix left;
    Vector sigma;
    Matrix right;

    Eigen::Index rank() const noexcept { return sigma.size(); }
    Matrix reconstruct() const { return left * sigma.asDiagonal() * right.transpose(); }
};

/// Singular values of X, non-increasing.
Vector singular_values(const Matrix& x);

/// Number of singular values above rank_rtol * sigma_max * max(rows, cols).
Eigen::Index numerical_rank(const Vector& sigma, Eigen::Index rows, Eigen::Index cols, const TolerancePolicy& policy);
Eigen::Index numerical_rank(const Matrix& x, const TolerancePolicy& policy);

ReducedSvd reduced_svd(const Matrix& x, const TolerancePolicy& policy);

/// Orthonormal basis (columns) of the numerical kernel of x.
Matrix kernel_basis(const Matrix& x, const TolerancePolicy& policy);

/// Orthonormal basis of im(b1) ∩ im(b2); zero columns when the intersection is trivial.
Matrix subspace_intersection(const Matrix& b1, const Matrix& b2, const TolerancePolicy& policy);

/// Orthonormal basis of the column span of x (numerical rank under the policy).
Matrix orthonormal_span(const Matrix& x, const TolerancePolicy& policy);

struct LeastSquaresResult {
    Vector x;
    double residual = 0.0;  // ||a x - y||_2
};

/// Minimises ||a x - y||_2 for full-column-rank a; throws rank_deficient_system otherwise.
LeastSquaresResult least_squares(const Matrix& a, const Vector& y);

/// Dense GF(2) system over packed 64-bit words.
class Gf2System {
public:
    Gf2System(int rows, int cols);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    void set(int row, int col, bool value);
    bool get(int row, int col) const;
    void set_rhs(int row, bool value);
    bool rhs(int row) const;

    /// Gaussian elimination; nullopt when inconsistent. Free variables are set to zero.
    std::optional<std::vector<bool>> solve() const;

private:
    int rows_;
    int cols_;
    int words_;  // per row, includes the rhs bit in column `cols_`
    std::vector<std::uint64_t> bits_;
};

/// Solve a * x = b over GF(2); a and b hold 0/1 values. nullopt when infeasible.
std::optional<std::vector<bool>> gf2_solve(const Matrix& a, const std::vector<bool>& b);

} // namespace compound
