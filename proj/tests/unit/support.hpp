#pragma once

#include "compound/error.hpp"
#include "compound/types.hpp"

#include <doctest.h>

#include <random>

namespace support {

inline compound::Matrix gaussian(int n, int m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    compound::Matrix x(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = g(rng);
    return x;
}

inline double rel(const compound::Matrix& a, const compound::Matrix& b) {
    const double nb = b.norm();
    return nb == 0.0 ? a.norm() : (a - b).norm() / nb;
}

template <class F>
compound::ErrorTag tag_of(F&& f) {
    try {
        f();
    } catch (const compound::Error& e) {
        return e.tag();
    }
    FAIL("expected compound::Error");
    return compound::ErrorTag::invalid_argument;
}

} // namespace support

#define CHECK_TAG(expr, t) CHECK(support::tag_of([&] { (void)(expr); }) == compound::ErrorTag::t)
