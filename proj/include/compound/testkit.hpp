#pragma once

// Independent oracles, seeded generators and worked-example fixtures.
// Nothing here shares an implementation path with the modules it checks:
// determinants use cofactor expansion and tuple positions use linear search.

#include "compound/types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace compound::testkit {

/// n x r matrix with orthonormal columns from a seeded Gaussian draw.
Matrix random_orthonormal(int n, int r, std::mt19937_64& rng);

Matrix random_gaussian(int n, int m, std::mt19937_64& rng);

/// Distinct decreasing positive values in [1, 10] with relative gaps >= min_gap.
Vector random_spectrum(int r, std::mt19937_64& rng, double min_gap = 1e-5);

/// V diag(spectrum) W^T with seeded orthonormal V (n x r), W (m x r).
Matrix random_rank_r(int n, int m, int r, std::uint64_t seed, const std::optional<Vector>& spectrum = std::nullopt);

/// Determinant by cofactor expansion along the first row.
double laplace_determinant(const Matrix& a);

/// All increasing k-subsets of {1..n} (1-based) enumerated by bitmask and sorted.
std::vector<std::vector<int>> subsets_by_bitmask(int n, int k);

/// 1-based position of t in `tuples` by linear search; 0 when absent.
std::size_t linear_search_index(const std::vector<std::vector<int>>& tuples, const std::vector<int>& t);

/// Compound via cofactor-expansion minors; k <= 4.
Matrix reference_compound(const Matrix& x, int k);

/// min(||a - b||, ||a + b||) / ||b|| (Frobenius).
double signed_relative_error(const Matrix& a, const Matrix& b);

/// Greedy column matching up to sign: max over columns of min(||a_i - b_j||, ||a_i + b_j||).
double column_match_error(const Matrix& a, const Matrix& b);

enum class Provenance { published, trivial, derived };

struct Fixture {
    std::string name;
    Provenance provenance = Provenance::published;
    std::string citation;
    int n = 0;
    int m = 0;
    int k = 0;
    std::vector<std::pair<std::string, Matrix>> matrices;

    const Matrix& get(const std::string& key) const;
};

/// The worked examples: non-decomposable singular vector, rank-two family,
/// the 4x4 running example with its rounded factorisations, and the log-linear system.
const std::vector<Fixture>& worked_examples();
const Fixture& fixture(const std::string& name);

struct FixtureCheck {
    std::string fixture;
    std::string check;
    bool passed = false;
    std::string detail;
};

/// Runs every check attached to the fixtures.
std::vector<FixtureCheck> run_fixture_checks();

/// Exact-precision singular vectors of the running example with the column signs of
/// the printed V-hat and W-hat.
std::pair<Matrix, Matrix> running_example_hat_factors();

} // namespace compound::testkit
