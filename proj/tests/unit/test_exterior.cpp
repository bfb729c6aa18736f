#include "compound/combinat.hpp"
#include "compound/exterior.hpp"
#include "compound/numerics.hpp"
#include "compound/testkit.hpp"

#include "support.hpp"

#include <cmath>

namespace compound {

namespace {

Matrix running_a() { return testkit::fixture("example3_running").get("A"); }

Vector unit(int n, int i) { return Vector::Unit(n, i - 1); }

} // namespace

TEST_CASE("determinant") {
    CHECK(determinant(Matrix::Identity(5, 5)) == 1.0);
    CHECK(determinant(running_a()) == doctest::Approx(testkit::laplace_determinant(running_a())));
    Matrix s(2, 2);
    s << 1, 2, 2, 4;
    CHECK(determinant(s) == 0.0);
    CHECK_TAG(determinant(Matrix(2, 3)), invalid_argument);
}

TEST_CASE("compound examples") {
    const auto& fx = testkit::fixture("example3_running");
    CHECK((compound(fx.get("A"), 2) - fx.get("M")).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((compound(fx.get("A"), 2).row(0) - (Eigen::RowVectorXd(6) << -6, 12, 24, -16, -16, -32).finished()).norm() < 1e-12);
    CHECK(compound(Matrix::Identity(4, 4), 2) == Matrix::Identity(6, 6));

    std::mt19937_64 rng(1);
    const Matrix x = support::gaussian(5, 4, rng);
    CHECK(compound(x, 1) == x);
    CHECK(support::rel(compound(2.5 * x, 3), std::pow(2.5, 3) * compound(x, 3)) < 1e-12);
    CHECK(compound(x, 4).size() == 5);

    CHECK_TAG(compound(x, 0), invalid_argument);
    CHECK_TAG(compound(x, 5), invalid_argument);
}

TEST_CASE("compound agrees with the cofactor oracle") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6), m = 1 + static_cast<int>(rng() % 6);
        const Matrix x = support::gaussian(n, m, rng);
        for (int k = 1; k <= std::min({n, m, 4}); ++k)
            CHECK(support::rel(compound(x, k), testkit::reference_compound(x, k)) < 1e-12);
    }
}

TEST_CASE("wedge") {
    const Vector e12 = wedge(std::vector<Vector>{unit(4, 1), unit(4, 2)});
    CHECK(e12 == Vector::Unit(6, 0));

    std::mt19937_64 rng(3);
    const Vector u = support::gaussian(5, 1, rng), v = support::gaussian(5, 1, rng);
    CHECK(wedge(std::vector<Vector>{u, u}).norm() < 1e-14);
    CHECK((wedge(std::vector<Vector>{u, v}) + wedge(std::vector<Vector>{v, u})).norm() < 1e-14);

    const Matrix f = support::gaussian(6, 3, rng);
    CHECK(support::rel(wedge(f), compound(f, 3)) < 1e-14);
    CHECK_TAG(wedge(std::vector<Vector>{}), invalid_argument);
    CHECK_TAG(wedge(std::vector<Vector>{u, Vector::Ones(4)}), invalid_argument);
    CHECK_TAG(wedge(Matrix(2, 3)), invalid_argument);
}

TEST_CASE("wedge_matrix") {
    TolerancePolicy policy;
    const Vector e12 = Vector::Unit(6, 0);
    const WedgeMatrix w = wedge_matrix(e12, 4, 2);
    CHECK(w.data.rows() == 4);
    CHECK(w.data.cols() == 4);
    const Matrix ker = kernel_basis(w.data, policy);
    REQUIRE(ker.cols() == 2);
    CHECK(ker.bottomRows(2).norm() < 1e-14);

    // z = first column of the running example's left factor
    const Vector z = testkit::fixture("example3_running").get("L").col(0);
    Matrix want(4, 4);
    want << z(3), -z(1), z(0), 0,
            z(4), -z(2), 0, z(0),
            z(5), 0, -z(2), z(1),
            0, z(5), -z(4), z(3);
    CHECK(wedge_matrix(z, 4, 2).data == want);

    // zero pattern: entry (I, j) vanishes for j not in I
    std::mt19937_64 rng(4);
    const Vector zr = support::gaussian(10, 1, rng);
    const Matrix mz = wedge_matrix(zr, 5, 2).data;
    const auto rows = lex_tuples(5, 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 1; j <= 5; ++j)
            if (!rows[i].contains(j)) CHECK(mz(static_cast<Eigen::Index>(i), j - 1) == 0.0);

    // M_z x = x ∧ z
    const Matrix uvw = support::gaussian(6, 3, rng);
    const Vector zd = wedge(uvw);
    const Matrix m6 = wedge_matrix(zd, 6, 3).data;
    for (int t = 0; t < 20; ++t) {
        Matrix xz(6, 4);
        xz.col(0) = support::gaussian(6, 1, rng);
        xz.rightCols(3) = uvw;
        CHECK((m6 * xz.col(0) - wedge(xz)).norm() < 1e-12 * (1.0 + wedge(xz).norm()));
    }

    CHECK_TAG(wedge_matrix(Vector::Zero(6), 4, 2), degenerate_input);
    CHECK_TAG(wedge_matrix(Vector::Ones(5), 4, 2), invalid_argument);
    CHECK_TAG(wedge_matrix(Vector::Ones(1), 4, 4), invalid_argument);
}

TEST_CASE("is_decomposable") {
    TolerancePolicy policy;
    Vector q = Vector::Zero(6);
    q(0) = q(5) = 1.0 / std::sqrt(2.0);
    const auto dq = is_decomposable(q, 4, 2, policy);
    CHECK_FALSE(dq.decomposable);
    CHECK(dq.kernel.cols() < 2);

    const Matrix m = testkit::fixture("example3_running").get("M");
    for (int j = 0; j < 6; ++j) {
        const auto d = is_decomposable(m.col(j), 4, 2, policy);
        CHECK(d.decomposable);
        CHECK(d.kernel.cols() == 2);
    }
    CHECK(is_decomposable(Vector::Unit(6, 0), 4, 2, policy).decomposable);
    CHECK_FALSE(is_decomposable(Vector::Zero(6), 4, 2, policy).decomposable);
    CHECK_TAG(is_decomposable(q, 4, 4, policy), invalid_argument);
}

TEST_CASE("adjugate") {
    CHECK(adjugate(Matrix::Identity(4, 4)) == Matrix::Identity(4, 4));
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 2, 3, 5;
    Matrix want = Matrix::Zero(3, 3);
    want.diagonal() << 15, 10, 6;
    CHECK(adjugate(d) == want);
    CHECK(adjugate(Matrix::Constant(1, 1, 7.0)) == Matrix::Identity(1, 1));

    std::mt19937_64 rng(5);
    const Matrix a = support::gaussian(5, 5, rng);
    CHECK(support::rel(adjugate(a) * a, determinant(a) * Matrix::Identity(5, 5)) < 1e-12);

    const Matrix b = support::gaussian(4, 4, rng);
    CHECK(support::rel(adjugate_via_compound(b), adjugate(b)) < 1e-12);
    CHECK(support::rel(adjugate_via_compound(running_a()), adjugate(running_a())) < 1e-12);

    const Matrix c = support::gaussian(5, 5, rng);
    const Matrix aa = adjugate(adjugate(c));
    CHECK(support::rel(aa, compound(compound(c, 4), 4)) < 1e-10);
    CHECK(support::rel(aa, std::pow(determinant(c), 3) * c) < 1e-10);

    CHECK_TAG(adjugate(Matrix(2, 3)), invalid_argument);
    CHECK_TAG(adjugate_via_compound(Matrix::Identity(1, 1)), invalid_argument);
}

TEST_CASE("sign reversal pair") {
    for (int n = 1; n <= 7; ++n) {
        const auto [s, p] = sign_reversal_pair(n);
        const Matrix id = Matrix::Identity(n, n);
        CHECK(p * p == id);
        CHECK(s * s == id);
        CHECK(s * p == (p * s).transpose());
        CHECK((s * p) * (s * p) == ((n + 1) % 2 == 0 ? 1.0 : -1.0) * id);
        CHECK(determinant(s) == ((n * (n + 1) / 2) % 2 == 0 ? 1.0 : -1.0));
    }
    // diag(-1, 1, -1)
    CHECK(determinant(sign_reversal_pair(3).s) == 1.0);
    CHECK((sign_reversal_pair(4).s * sign_reversal_pair(4).p) * (sign_reversal_pair(4).s * sign_reversal_pair(4).p) ==
          -Matrix::Identity(4, 4));
    CHECK_TAG(sign_reversal_pair(0), invalid_argument);
}

TEST_CASE("compound identities on random instances") {
    std::mt19937_64 rng(6);
    TolerancePolicy policy;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5), m = 2 + static_cast<int>(rng() % 5), p = 2 + static_cast<int>(rng() % 5);
        const Matrix a = support::gaussian(n, m, rng), b = support::gaussian(m, p, rng);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min({n, m, p})));
        CHECK(support::rel(compound(a * b, k), compound(a, k) * compound(b, k)) < 1e-10);
        CHECK(support::rel(compound(a.transpose(), k), compound(a, k).transpose()) < 1e-12);

        const Matrix sq = support::gaussian(n, n, rng);
        const int ks = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        CHECK(support::rel(compound(sq.inverse(), ks), compound(sq, ks).inverse()) < 1e-8);
        // Sylvester-Franke
        CHECK(std::abs(determinant(compound(sq, ks)) - std::pow(determinant(sq), static_cast<double>(binomial(n - 1, ks - 1)))) <=
              1e-8 * (1.0 + std::abs(std::pow(determinant(sq), static_cast<double>(binomial(n - 1, ks - 1))))));

        const int r = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(n, m)));
        const Matrix low = testkit::random_rank_r(n, m, r, rng());
        for (int kk = 1; kk <= std::min(n, m); ++kk) {
            const Matrix c = compound(low, kk);
            if (kk > r)
                CHECK(c.norm() < 1e-10 * std::pow(low.norm(), kk));
            else
                CHECK(numerical_rank(c, policy) == binomial(r, kk));
        }
    }
}
} // namespace compound
