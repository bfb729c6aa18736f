#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace compound {

/// Machine-readable failure categories. Each tag maps to exactly one CLI exit code.
enum class ErrorTag {
    invalid_argument,
    degenerate_input,
    rank_deficient_system,
    not_compound_decomposable,
    preprocessing_failed,
    decomposition_failed,
    ordering_failed,
    alignment_failed,
    sign_failed,
    inconsistent_compound_values,
    singular_input,
    verification_failed,
    unsupported,
    io_error,
};

std::string_view to_string(ErrorTag tag) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorTag tag, const std::string& what) : std::runtime_error(what), tag_(tag) {}

    ErrorTag tag() const noexcept { return tag_; }

private:
    ErrorTag tag_;
};

[[noreturn]] inline void fail(ErrorTag tag, const std::string& what) { throw Error(tag, what); }

inline void require(bool cond, ErrorTag tag, const std::string& what) {
    if (!cond) fail(tag, what);
}

} // namespace compound
