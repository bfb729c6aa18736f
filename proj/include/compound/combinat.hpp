#pragma once

#include "compound/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace compound {

/// Upper bound on binom(n, k) for any enumeration this library performs.
inline constexpr std::int64_t kMaxTupleCount = 1'000'000;

/// binom(n, k) in 64-bit arithmetic; throws invalid_argument on overflow or negative input.
/// Returns 0 for k > n.
std::int64_t binomial(int n, int k);

/// Strictly increasing k-tuple drawn from {1, ..., n}. Indices are 1-based.
class IndexTuple {
public:
    IndexTuple(std::vector<int> entries, int ambient);
    IndexTuple(std::initializer_list<int> entries, int ambient)
        : IndexTuple(std::vector<int>(entries), ambient) {}

    int ambient() const noexcept { return ambient_; }
    int size() const noexcept { return static_cast<int>(entries_.size()); }
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    std::span<const int> entries() const noexcept { return entries_; }

    bool contains(int j) const;
    /// 1-based position of j within the tuple, 0 when absent.
    int position_of(int j) const;
    /// The tuple with j removed; j must be present and size() >= 2.
    IndexTuple without(int j) const;

    friend bool operator==(const IndexTuple&, const IndexTuple&) = default;
    friend auto operator<=>(const IndexTuple& a, const IndexTuple& b) { return a.entries_ <=> b.entries_; }

private:
    std::vector<int> entries_;
    int ambient_;
};

/// All binom(n, k) increasing k-tuples of {1..n} in lexicographic order.
std::vector<IndexTuple> lex_tuples(int n, int k);

/// 1-based lexicographic rank of t among the tuples of the same size, via the combinadic formula.
std::int64_t indexof_tuple(const IndexTuple& t);

/// Inverse of indexof_tuple.
IndexTuple unrank_tuple(std::int64_t index, int n, int k);

/// binom(r,k) x r 0/1 matrix; row I has ones exactly at the columns j in I.
/// Requires 1 <= k < r.
Matrix incidence_matrix(int r, int k);

} // namespace compound
