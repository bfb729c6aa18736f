#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace compound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// All numerical thresholds used anywhere in the library. One value of this
// type is threaded through every operation; nothing owns private cutoffs.
struct TolerancePolicy {
    double rank_rtol = 1e-10;     // sigma_i kept iff sigma_i > rank_rtol * sigma_max * max(rows, cols)
    double gap_rtol = 1e-6;       // minimum (sigma_i - sigma_{i+1}) / sigma_1 among kept values
    double sign_atol = 1e-8;      // column match: min(|a - b|, |a + b|) <= sign_atol
    double residual_rtol = 1e-8;  // relative Frobenius residual for verification
    int max_resample = 16;
    std::uint64_t rng_seed = 0x5eed;
    bool exhaustive_sign_search = false;  // use the 2^r scan instead of the GF(2) solve
    bool canonical_sign = false;          // normalise the overall sign for even k

    void validate() const;
};

} // namespace compound
