#include "compound/combinat.hpp"
#include "compound/error.hpp"
#include "compound/exterior.hpp"
#include "compound/recovery.hpp"

#include <string>
#include <vector>

namespace compound {

namespace {

bool same_up_to_sign(const Vector& a, const Vector& b, double atol) {
    return std::min((a - b).norm(), (a + b).norm()) <= atol;
}

bool same_subspace(const Matrix& a, const Matrix& b, double atol) {
    if (a.cols() != b.cols()) return false;
    // orthonormal bases: compare the orthogonal projectors
    return (a * a.transpose() - b * b.transpose()).norm() <= atol;
}

void add_unique_direction(std::vector<Vector>& found, const Vector& v, double atol) {
    for (const auto& f : found)
        if (same_up_to_sign(f, v, atol)) return;
    found.push_back(v);
}

// All distinct 1-dimensional pairwise intersections.
std::vector<Vector> one_dimensional_intersections(const std::vector<Matrix>& subspaces, const TolerancePolicy& policy) {
    std::vector<Vector> found;
    for (std::size_t i = 0; i < subspaces.size(); ++i) {
        for (std::size_t j = i + 1; j < subspaces.size(); ++j) {
            const Matrix b = subspace_intersection(subspaces[i], subspaces[j], policy);
            if (b.cols() == 1) add_unique_direction(found, b.col(0), policy.sign_atol);
        }
    }
    return found;
}

} // namespace

Matrix wedge_decompose(const Matrix& z, int n, int r, int k, const TolerancePolicy& policy) {
    require(k >= 1 && k < r && r <= n, ErrorTag::invalid_argument, "wedge_decompose: requires 1 <= k < r <= n");
    require(z.rows() == binomial(n, k), ErrorTag::invalid_argument, "wedge_decompose: rows must equal binom(n,k)");
    require(z.cols() == binomial(r, k), ErrorTag::invalid_argument, "wedge_decompose: cols must equal binom(r,k)");

    std::vector<Vector> found;
    if (k == 1) {
        // each column already is ±u_i
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            require(z.col(c).norm() > 0.0, ErrorTag::decomposition_failed, "wedge_decompose: zero column");
            add_unique_direction(found, z.col(c).normalized(), policy.sign_atol);
        }
    } else {
        std::vector<Matrix> subspaces;
        subspaces.reserve(static_cast<std::size_t>(z.cols()));
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            const auto dec = is_decomposable(z.col(c), n, k, policy);
            require(dec.decomposable, ErrorTag::decomposition_failed,
                    "wedge_decompose: column " + std::to_string(c + 1) + " is not decomposable (kernel dimension " +
                        std::to_string(dec.kernel.cols()) + ")");
            subspaces.push_back(dec.kernel);
        }

        const int half = (r + 1) / 2;  // ceil(r/2)
        int current = k;
        while (current > half) {
            // pairs of current-dimensional spans overlap in at least 2*current - r dimensions
            const int target = 2 * current - r;
            std::vector<Matrix> next;
            for (std::size_t i = 0; i < subspaces.size(); ++i) {
                for (std::size_t j = i + 1; j < subspaces.size(); ++j) {
                    Matrix b = subspace_intersection(subspaces[i], subspaces[j], policy);
                    if (b.cols() != target) continue;
                    bool seen = false;
                    for (const auto& s : next) {
                        if (same_subspace(s, b, policy.sign_atol)) {
                            seen = true;
                            break;
                        }
                    }
                    if (!seen) next.push_back(std::move(b));
                }
            }
            subspaces = std::move(next);
            current = target;
        }
        found = one_dimensional_intersections(subspaces, policy);
    }

    require(static_cast<int>(found.size()) == r, ErrorTag::decomposition_failed,
            "wedge_decompose: recovered " + std::to_string(found.size()) + " directions, expected " + std::to_string(r));
    Matrix out(n, r);
    for (int i = 0; i < r; ++i) out.col(i) = found[static_cast<std::size_t>(i)].normalized();
    return out;
}

} // namespace compound
