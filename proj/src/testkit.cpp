#include "compound/testkit.hpp"

#include "compound/error.hpp"
#include "compound/exterior.hpp"
#include "compound/numerics.hpp"
#include "compound/recovery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace compound::testkit {

namespace {

Matrix rows_of(int n, int m, std::initializer_list<double> values) {
    Matrix out(n, m);
    auto it = values.begin();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = *it++;
    return out;
}

Matrix column(std::initializer_list<double> values) {
    return rows_of(static_cast<int>(values.size()), 1, values);
}

double max_abs(const Matrix& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

} // namespace

Matrix random_gaussian(int n, int m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix out(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = normal(rng);
    return out;
}

Matrix random_orthonormal(int n, int r, std::mt19937_64& rng) {
    require(r >= 0 && r <= n, ErrorTag::invalid_argument, "random_orthonormal: requires r <= n");
    const Matrix g = random_gaussian(n, r, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, r);
}

Vector random_spectrum(int r, std::mt19937_64& rng, double min_gap) {
    std::uniform_real_distribution<double> unif(1.0, 10.0);
    Vector s(r);
    while (true) {
        for (int i = 0; i < r; ++i) s(i) = unif(rng);
        std::sort(s.data(), s.data() + r, std::greater<>());
        bool ok = true;
        for (int i = 0; i + 1 < r; ++i) ok = ok && (s(i) - s(i + 1)) / s(0) >= min_gap;
        if (ok) return s;
    }
}

Matrix random_rank_r(int n, int m, int r, std::uint64_t seed, const std::optional<Vector>& spectrum) {
    require(r >= 0 && r <= std::min(n, m), ErrorTag::invalid_argument, "random_rank_r: r out of range");
    std::mt19937_64 rng(seed);
    const Vector s = spectrum ? *spectrum : random_spectrum(r, rng);
    require(s.size() == r && (s.array() > 0).all(), ErrorTag::invalid_argument,
            "random_rank_r: spectrum must hold r positive values");
    const Matrix v = random_orthonormal(n, r, rng);
    const Matrix w = random_orthonormal(m, r, rng);
    return v * s.asDiagonal() * w.transpose();
}

double laplace_determinant(const Matrix& a) {
    const Eigen::Index n = a.rows();
    if (n == 0) return 1.0;
    if (n == 1) return a(0, 0);
    double det = 0.0;
    Matrix sub(n - 1, n - 1);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index i = 1; i < n; ++i)
            for (Eigen::Index j = 0, jj = 0; j < n; ++j)
                if (j != c) sub(i - 1, jj++) = a(i, j);
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a(0, c) * laplace_determinant(sub);
    }
    return det;
}

std::vector<std::vector<int>> subsets_by_bitmask(int n, int k) {
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        std::vector<int> t;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1U) t.push_back(i + 1);
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t linear_search_index(const std::vector<std::vector<int>>& tuples, const std::vector<int>& t) {
    for (std::size_t i = 0; i < tuples.size(); ++i)
        if (tuples[i] == t) return i + 1;
    return 0;
}

Matrix reference_compound(const Matrix& x, int k) {
    require(k <= 4, ErrorTag::unsupported, "reference_compound: k > 4 is not supported");
    const int n = static_cast<int>(x.rows());
    const int m = static_cast<int>(x.cols());
    require(k >= 1 && k <= std::min(n, m), ErrorTag::invalid_argument, "reference_compound: k out of range");
    const auto rows = subsets_by_bitmask(n, k);
    const auto cols = subsets_by_bitmask(m, k);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    Matrix sub(k, k);
    for (const auto& ri : rows) {
        for (const auto& cj : cols) {
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) sub(a, b) = x(ri[a] - 1, cj[b] - 1);
            const auto i = linear_search_index(rows, ri);
            const auto j = linear_search_index(cols, cj);
            out(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = laplace_determinant(sub);
        }
    }
    return out;
}

double signed_relative_error(const Matrix& a, const Matrix& b) {
    const double scale = b.norm();
    const double err = std::min((a - b).norm(), (a + b).norm());
    return scale > 0.0 ? err / scale : err;
}

double column_match_error(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(static_cast<std::size_t>(b.cols()), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index pick = -1;
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double e = std::min((a.col(i) - b.col(j)).norm(), (a.col(i) + b.col(j)).norm());
            if (e < best) {
                best = e;
                pick = j;
            }
        }
        if (pick < 0) return std::numeric_limits<double>::infinity();
        used[static_cast<std::size_t>(pick)] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

// ---- fixtures ----------------------------------------------------------------------

const Matrix& Fixture::get(const std::string& key) const {
    for (const auto& [name, mat] : matrices)
        if (name == key) return mat;
    fail(ErrorTag::invalid_argument, "fixture " + name + " has no matrix '" + key + "'");
}

const std::vector<Fixture>& worked_examples() {
    static const std::vector<Fixture> fixtures = [] {
        std::vector<Fixture> out;
        const double h = 1.0 / std::sqrt(2.0);

        out.push_back({"example1_nondecomposable", Provenance::published,
                       "repeated singular values example: q is not a wedge of two vectors", 4, 4, 2,
                       {{"q", column({h, 0, 0, 0, 0, h})}, {"M", Matrix::Identity(6, 6)}}});

        out.push_back({"rank2_family", Provenance::published, "rank-two example after the preimage cardinality result", 3, 3, 2,
                       {{"A", rows_of(3, 3, {1, 0, 1, 0, 1, 0, 0, 1, 0})},
                        {"B", rows_of(3, 3, {1, 1, 1, 0, 1, 0, 0, 1, 0})},
                        {"C2", rows_of(3, 3, {1, 0, -1, 1, 0, -1, 0, 0, 0})},
                        {"U", rows_of(3, 2, {1, 0, 0, 1, 0, 1})},
                        {"V", rows_of(3, 2, {1, 0, 0, 1, 1, 0})},
                        {"T", rows_of(2, 2, {1, 1, 0, 1})}}});

        out.push_back(
            {"example3_running", Provenance::published, "4x4 running example of the recovery pipeline", 4, 4, 2,
             {{"A", rows_of(4, 4, {3, -1, -6, -4, 3, -3, -2, 4, 4, 3, 7, 1, -5, -1, -1, 1})},
              {"M", rows_of(6, 6, {-6, 12, 24, -16, -16, -32, 13, 45, 19, 11, 11, 22, -8, -33, -17, -5, -5, -10,
                                   21, 29, -13, -15, -15, -30, -18, -13, 23, 1, 1, 2, 11, 31, 9, 4, 4, 8})},
              {"V", rows_of(4, 3, {0.58, -0.60, 0.34, 0.13, -0.32, -0.93, -0.79, -0.35, 0.08, 0.18, 0.64, -0.10})},
              {"Sigma", column({10.50, 7.60, 5.92})},
              {"W", rows_of(4, 3, {-0.19, -0.97, -0.16, -0.33, -0.02, 0.47, -0.90, 0.16, 0.08, -0.23, 0.19, -0.86})},
              {"L", rows_of(6, 3, {0.11, 0.58, 0.67, 0.67, -0.31, 0.07, -0.48, 0.12, -0.16, 0.29, 0.72, -0.35, -0.14,
                                   -0.16, 0.63, 0.44, -0.06, -0.02})},
              {"S", column({79.80, 62.12, 45.01})},
              {"R", rows_of(6, 3, {0.32, 0.14, -0.46, 0.90, 0.16, -0.05, 0.26, -0.12, 0.87, 0.07, -0.40, -0.08, 0.07,
                                   -0.40, -0.08, 0.13, -0.79, -0.15})},
              {"V_hat", rows_of(4, 3, {0.58, -0.60, -0.34, 0.13, -0.32, 0.93, -0.79, -0.35, -0.08, 0.18, 0.64, 0.10})},
              {"W_hat", rows_of(4, 3, {0.19, 0.97, 0.16, 0.33, 0.02, -0.47, 0.90, -0.16, -0.08, 0.23, -0.19, 0.86})},
              {"W_tilde", rows_of(4, 3, {0.19, 0.97, -0.16, 0.33, 0.02, 0.47, 0.90, -0.16, 0.08, 0.23, -0.19, -0.86})},
              {"C2_Sigma_hat", column({79.80, 62.12, 45.01})}}});

        out.push_back({"log_linear_system", Provenance::published, "singular values from the compound diagonal", 0, 0, 2,
                       {{"L", rows_of(3, 3, {1, 1, 0, 1, 0, 1, 0, 1, 1})},
                        {"y", column({4.38, 4.13, 3.81})},
                        {"exp_x", column({10.50, 7.60, 5.92})}}});

        out.push_back({"closed_form_diagonal", Provenance::derived,
                       "C_2 of diag(2,3,5) is diag(6,10,15); the closed form returns diag(2,3,5)", 3, 3, 2,
                       {{"A", rows_of(3, 3, {2, 0, 0, 0, 3, 0, 0, 0, 5})},
                        {"M", rows_of(3, 3, {6, 0, 0, 0, 10, 0, 0, 0, 15})}}});
        return out;
    }();
    return fixtures;
}

const Fixture& fixture(const std::string& name) {
    for (const auto& f : worked_examples())
        if (f.name == name) return f;
    fail(ErrorTag::invalid_argument, "unknown fixture '" + name + "'");
}

std::pair<Matrix, Matrix> running_example_hat_factors() {
    const auto& f = fixture("example3_running");
    Eigen::JacobiSVD<Matrix> svd(f.get("A"), Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix v = svd.matrixU().leftCols(3);
    Matrix w = svd.matrixV().leftCols(3);
    const Matrix& v_hat = f.get("V_hat");
    const Matrix& w_hat = f.get("W_hat");
    for (int j = 0; j < 3; ++j) {
        if (v.col(j).dot(v_hat.col(j)) < 0) v.col(j) *= -1.0;
        if (w.col(j).dot(w_hat.col(j)) < 0) w.col(j) *= -1.0;
    }
    return {v, w};
}

std::vector<FixtureCheck> run_fixture_checks() {
    constexpr double kRounding = 5e-3;  // radius of the printed 2-decimal values
    const TolerancePolicy policy;
    std::vector<FixtureCheck> out;
    auto record = [&](const std::string& fx, const std::string& check, auto&& body) {
        FixtureCheck c{fx, check, false, ""};
        try {
            std::tie(c.passed, c.detail) = body();
        } catch (const std::exception& e) {
            c.detail = std::string("threw: ") + e.what();
        }
        out.push_back(std::move(c));
    };

    {
        const auto& f = fixture("example1_nondecomposable");
        record(f.name, "q rejected as non-decomposable", [&] {
            const auto dec = is_decomposable(f.get("q").col(0), f.n, f.k, policy);
            return std::pair{!dec.decomposable && dec.kernel.cols() < f.k,
                             "kernel dimension " + std::to_string(dec.kernel.cols())};
        });
    }
    {
        const auto& f = fixture("rank2_family");
        record(f.name, "C_2(A) = C_2(B) = printed", [&] {
            const double e = std::max(max_abs(compound(f.get("A"), 2) - f.get("C2")),
                                      max_abs(compound(f.get("B"), 2) - f.get("C2")));
            return std::pair{e == 0.0, "max abs error " + fmt_double(e)};
        });
        record(f.name, "printed factors: A = U V^T, B = U T V^T", [&] {
            const double e = std::max(max_abs(f.get("U") * f.get("V").transpose() - f.get("A")),
                                      max_abs(f.get("U") * f.get("T") * f.get("V").transpose() - f.get("B")));
            return std::pair{e == 0.0, "max abs error " + fmt_double(e)};
        });
        record(f.name, "rank-one family contains A and B", [&] {
            const auto fam = rank_one_inverse(f.get("C2"), f.n, f.m, f.k, policy);
            const bool a = family_contains(f.get("A"), fam, policy);
            const bool b = family_contains(f.get("B"), fam, policy);
            const bool twice = family_contains(2.0 * f.get("B"), fam, policy);
            return std::pair{a && b && !twice, std::string("A:") + (a ? "in" : "out") + " B:" + (b ? "in" : "out") +
                                                   " 2B:" + (twice ? "in" : "out")};
        });
    }
    {
        const auto& f = fixture("example3_running");
        record(f.name, "C_2(A) equals printed M", [&] {
            const double e = std::max(max_abs(compound(f.get("A"), 2) - f.get("M")),
                                      max_abs(reference_compound(f.get("A"), 2) - f.get("M")));
            return std::pair{e <= 1e-12, "max abs error " + fmt_double(e)};
        });
        record(f.name, "singular values of M and A match print", [&] {
            const Vector sm = singular_values(f.get("M")).head(3);
            const Vector sa = singular_values(f.get("A")).head(3);
            const double e = std::max(max_abs(sm - f.get("S")), max_abs(sa - f.get("Sigma")));
            return std::pair{e <= kRounding, "max abs error " + fmt_double(e)};
        });
        record(f.name, "SVD factors of A and M match print up to column sign", [&] {
            const auto svd_a = reduced_svd(f.get("A"), policy);
            const auto svd_m = reduced_svd(f.get("M"), policy);
            const double e = std::max({column_match_error(svd_a.left, f.get("V")), column_match_error(svd_a.right, f.get("W")),
                                       column_match_error(svd_m.left, f.get("L")), column_match_error(svd_m.right, f.get("R"))});
            // column norm error of a vector with 2-decimal entries
            const double tol = kRounding * std::sqrt(6.0);
            return std::pair{e <= tol, "max column error " + fmt_double(e)};
        });
        record(f.name, "ordered compound singular values from V_hat", [&] {
            const auto [v_hat, w_hat] = running_example_hat_factors();
            const Vector d = order_compound_singular_values(f.get("M"), v_hat, 2, policy);
            const double e = max_abs(d - f.get("C2_Sigma_hat"));
            return std::pair{e <= kRounding, "max abs error " + fmt_double(e)};
        });
        record(f.name, "sign adjustment reproduces printed W_tilde", [&] {
            const auto [v_hat, w_hat] = running_example_hat_factors();
            const double hat_err = std::max(max_abs(v_hat - f.get("V_hat")), max_abs(w_hat - f.get("W_hat")));
            const auto svd = reduced_svd(f.get("M"), policy);
            const auto aligned = align_and_sign_adjust(v_hat, w_hat, svd, 2, policy);
            const Matrix& printed = f.get("W_tilde");
            const double e = std::min(max_abs(aligned.w_tilde - printed), max_abs(aligned.w_tilde + printed));
            return std::pair{e <= kRounding && hat_err <= kRounding, "max abs error " + fmt_double(e)};
        });
        record(f.name, "inverse_compound recovers A up to sign", [&] {
            const auto res = inverse_compound(f.get("M"), 4, 4, 2, policy);
            const auto* u = std::get_if<UniqueUpToSign>(&res.outcome);
            if (u == nullptr) return std::pair{false, "outcome " + outcome_tag(res.outcome)};
            const double e = std::min(max_abs(u->a - f.get("A")), max_abs(u->a + f.get("A")));
            return std::pair{e <= 1e-8 && u->sign_ambiguous, "max abs error " + fmt_double(e)};
        });
    }
    {
        const auto& f = fixture("log_linear_system");
        record(f.name, "exp of the least-squares solution (printed y)", [&] {
            const auto ls = least_squares(f.get("L"), f.get("y").col(0));
            const Vector sigma = ls.x.array().exp().matrix();
            // y is itself rounded: |dy| <= 0.005 moves each x_i by at most 0.0075
            const Vector tol = sigma * std::expm1(0.0075) + Vector::Constant(sigma.size(), kRounding);
            const Vector err = (sigma - f.get("exp_x")).cwiseAbs();
            return std::pair{(err.array() <= tol.array()).all(), "max abs error " + fmt_double(err.maxCoeff())};
        });
        record(f.name, "exp of the solution for unrounded y = log(sv(M))", [&] {
            const Vector y = singular_values(fixture("example3_running").get("M")).head(3).array().log().matrix();
            const double rounding = max_abs(y - f.get("y"));
            const auto ls = least_squares(f.get("L"), y);
            const double e = max_abs(ls.x.array().exp().matrix() - f.get("exp_x"));
            return std::pair{e <= kRounding && rounding <= kRounding, "max abs error " + fmt_double(e)};
        });
    }
    {
        const auto& f = fixture("closed_form_diagonal");
        record(f.name, "closed form recovers diag(2,3,5)", [&] {
            const double fwd = max_abs(compound(f.get("A"), 2) - f.get("M"));
            const auto cf = closed_form_inverse_nminus1(f.get("M"), policy);
            const double e = std::min(max_abs(cf.b - f.get("A")), max_abs(cf.b + f.get("A")));
            return std::pair{fwd == 0.0 && e <= 1e-12, "max abs error " + fmt_double(e)};
        });
    }
    return out;
}

} // namespace compound::testkit
