#pragma once

#include "compound/error.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace compound::cli {

/// Stable contract: 1 = not decomposable / verification failure, 2 = numerical failure,
/// 3 = I/O or argument error.
int exit_code(ErrorTag tag) noexcept;

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchSample {
    int n = 0;
    int k = 0;
    int rep = 0;
    std::string stage;  // "total" or a pipeline stage
    double ms = 0.0;
};

/// Times inverse_compound on C_k(A) for random full-rank n x n A, n = min_n, min_n + 2, ..., max_n.
std::vector<BenchSample> bench(int min_n, int max_n, int k, int reps, std::uint64_t seed);

} // namespace compound::cli
