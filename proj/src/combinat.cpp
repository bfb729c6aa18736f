#include "compound/combinat.hpp"

#include "compound/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace compound {

std::int64_t binomial(int n, int k) {
    require(n >= 0 && k >= 0, ErrorTag::invalid_argument, "binomial: negative argument");
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t v = 1;
    for (int i = 1; i <= k; ++i) {
        // v * (n - k + i) / i stays integral at every step
        const auto num = static_cast<std::int64_t>(n - k + i);
        require(v <= std::numeric_limits<std::int64_t>::max() / num, ErrorTag::invalid_argument,
                "binomial: overflow for binom(" + std::to_string(n) + "," + std::to_string(k) + ")");
        v = v * num / i;
    }
    return v;
}

namespace {

void check_tuple_count(int n, int k) {
    require(k >= 1 && k <= n, ErrorTag::invalid_argument,
            "tuple size k=" + std::to_string(k) + " out of range for n=" + std::to_string(n));
    require(binomial(n, k) <= kMaxTupleCount, ErrorTag::invalid_argument,
            "binom(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds the size cap");
}

} // namespace

IndexTuple::IndexTuple(std::vector<int> entries, int ambient) : entries_(std::move(entries)), ambient_(ambient) {
    const int k = size();
    require(k >= 1 && k <= ambient_, ErrorTag::invalid_argument, "IndexTuple: size out of range");
    for (int i = 0; i < k; ++i) {
        const int e = entries_[static_cast<std::size_t>(i)];
        require(e >= 1 && e <= ambient_, ErrorTag::invalid_argument, "IndexTuple: entry out of range");
        require(i == 0 || entries_[static_cast<std::size_t>(i - 1)] < e, ErrorTag::invalid_argument,
                "IndexTuple: entries must be strictly increasing");
    }
}

bool IndexTuple::contains(int j) const { return std::binary_search(entries_.begin(), entries_.end(), j); }

int IndexTuple::position_of(int j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), j);
    if (it == entries_.end() || *it != j) return 0;
    return static_cast<int>(it - entries_.begin()) + 1;
}

IndexTuple IndexTuple::without(int j) const {
    require(contains(j) && size() >= 2, ErrorTag::invalid_argument, "IndexTuple::without: bad element");
    std::vector<int> rest;
    rest.reserve(entries_.size() - 1);
    std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(rest), [j](int e) { return e != j; });
    return IndexTuple(std::move(rest), ambient_);
}

std::vector<IndexTuple> lex_tuples(int n, int k) {
    check_tuple_count(n, k);
    std::vector<IndexTuple> out;
    out.reserve(static_cast<std::size_t>(binomial(n, k)));
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        out.emplace_back(c, n);
        // rightmost entry that can still advance
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::int64_t indexof_tuple(const IndexTuple& t) {
    const int n = t.ambient();
    const int k = t.size();
    // rank = binom(n,k) - 1 - sum_i binom(n - c_i, k - i + 1)   (0-based, i 1-based)
    std::int64_t tail = 0;
    for (int i = 0; i < k; ++i) tail += binomial(n - t[i], k - i);
    return binomial(n, k) - tail;
}

IndexTuple unrank_tuple(std::int64_t index, int n, int k) {
    check_tuple_count(n, k);
    const std::int64_t total = binomial(n, k);
    require(index >= 1 && index <= total, ErrorTag::invalid_argument,
            "unrank_tuple: index " + std::to_string(index) + " out of range");
    std::int64_t rest = total - index;  // = sum_i binom(n - c_i, k - i + 1)
    std::vector<int> c;
    c.reserve(static_cast<std::size_t>(k));
    int prev = 0;
    for (int i = 0; i < k; ++i) {
        const int remaining = k - i;
        int ci = prev + 1;
        while (binomial(n - ci, remaining) > rest) ++ci;
        rest -= binomial(n - ci, remaining);
        c.push_back(ci);
        prev = ci;
    }
    return IndexTuple(std::move(c), n);
}

Matrix incidence_matrix(int r, int k) {
    require(k >= 1 && k < r, ErrorTag::invalid_argument, "incidence_matrix: requires 1 <= k < r");
    const auto rows = lex_tuples(r, k);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), r);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j : rows[i].entries()) out(static_cast<Eigen::Index>(i), j - 1) = 1.0;
    return out;
}

} // namespace compound
