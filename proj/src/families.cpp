// Inverse-compound families: the rank-one preimage and the k = n-1 closed form.

#include "compound/combinat.hpp"
#include "compound/error.hpp"
#include "compound/exterior.hpp"
#include "compound/recovery.hpp"

#include <cmath>
#include <string>

namespace compound {

namespace {

// Orthonormal n x k basis whose compound is a positive multiple of the unit vector z.
Matrix decomposition_basis(const Vector& z, int n, int k, const TolerancePolicy& policy) {
    Matrix basis;
    if (k == n) {
        basis = Matrix::Identity(n, n);
    } else {
        auto dec = is_decomposable(z, n, k, policy);
        require(dec.decomposable, ErrorTag::not_compound_decomposable,
                "rank_one_inverse: singular vector is not decomposable (kernel dimension " +
                    std::to_string(dec.kernel.cols()) + ", expected " + std::to_string(k) + ")");
        basis = std::move(dec.kernel);
    }
    if (z.dot(wedge(basis)) < 0.0) basis.col(0) *= -1.0;
    return basis;
}

} // namespace

RankOneFamily rank_one_inverse(const Matrix& m, int n, int m_cols, int k, const TolerancePolicy& policy) {
    require(k >= 1 && k <= std::min(n, m_cols), ErrorTag::invalid_argument, "rank_one_inverse: k out of range");
    require(m.rows() == binomial(n, k) && m.cols() == binomial(m_cols, k), ErrorTag::invalid_argument,
            "rank_one_inverse: input is not compound-shaped");
    const ReducedSvd svd = reduced_svd(m, policy);
    require(svd.rank() == 1, ErrorTag::invalid_argument,
            "rank_one_inverse: numerical rank is " + std::to_string(svd.rank()) + ", expected 1");

    const Vector u = svd.left.col(0);
    const Vector v = svd.right.col(0);
    RankOneFamily family;
    family.u = decomposition_basis(u, n, k, policy);
    family.v = decomposition_basis(v, m_cols, k, policy);

    // u = alpha C_k(U), v = beta C_k(V) with alpha, beta > 0
    const double alpha = u.dot(wedge(family.u));
    const double beta = v.dot(wedge(family.v));
    const double scale = std::pow(alpha * svd.sigma(0) * beta, 1.0 / k);
    family.sigma = scale * Matrix::Identity(k, k);

    const double residual = compound_residual(family.representative(), m, k);
    require(residual <= policy.residual_rtol, ErrorTag::not_compound_decomposable,
            "rank_one_inverse: reconstruction residual " + std::to_string(residual) + " exceeds tolerance");
    return family;
}

bool family_contains(const Matrix& b, const RankOneFamily& family, const TolerancePolicy& policy) {
    if (b.rows() != family.u.rows() || b.cols() != family.v.rows()) return false;
    const double scale = b.norm();
    if (scale == 0.0) return false;
    // the unique T with U Sigma T V^T = P_U B P_V
    const Matrix t = family.sigma.inverse() * family.u.transpose() * b * family.v;
    const Matrix back = family.u * family.sigma * t * family.v.transpose();
    if ((b - back).norm() > policy.residual_rtol * scale) return false;
    return std::abs(determinant(t) - 1.0) <= policy.residual_rtol;
}

ClosedFormInverse closed_form_inverse_nminus1(const Matrix& m, const TolerancePolicy& policy) {
    require(m.rows() == m.cols() && m.rows() >= 2, ErrorTag::invalid_argument,
            "closed_form_inverse_nminus1: requires a square matrix with n >= 2");
    const int n = static_cast<int>(m.rows());
    require(m.allFinite(), ErrorTag::invalid_argument, "closed_form_inverse_nminus1: non-finite input");
    require(numerical_rank(m, policy) == n, ErrorTag::singular_input, "closed_form_inverse_nminus1: det(M) is zero");

    const double det = determinant(m);
    const int degree = n - 1;
    // det(M) = det(A)^(n-1): a negative value with even n-1 has no real preimage
    require(det > 0.0 || degree % 2 == 1, ErrorTag::not_compound_decomposable,
            "closed_form_inverse_nminus1: negative determinant with even n-1");
    const double root = std::copysign(std::pow(std::abs(det), 1.0 / degree), det);

    ClosedFormInverse out;
    out.b = compound(m, n - 1) / std::pow(root, n - 2);
    out.negation_also_valid = (n % 2 == 1);
    const double residual = compound_residual(out.b, m, n - 1);
    require(residual <= policy.residual_rtol, ErrorTag::not_compound_decomposable,
            "closed_form_inverse_nminus1: reconstruction residual " + std::to_string(residual) + " exceeds tolerance");
    return out;
}

} // namespace compound
