#include "compound/error.hpp"

namespace compound {

std::string_view to_string(ErrorTag tag) noexcept {
    switch (tag) {
    case ErrorTag::invalid_argument: return "invalid-argument";
    case ErrorTag::degenerate_input: return "degenerate-input";
    case ErrorTag::rank_deficient_system: return "rank-deficient-system";
    case ErrorTag::not_compound_decomposable: return "not-compound-decomposable";
    case ErrorTag::preprocessing_failed: return "preprocessing-failed";
    case ErrorTag::decomposition_failed: return "decomposition-failed";
    case ErrorTag::ordering_failed: return "ordering-failed";
    case ErrorTag::alignment_failed: return "alignment-failed";
    case ErrorTag::sign_failed: return "sign-failed";
    case ErrorTag::inconsistent_compound_values: return "inconsistent-compound-values";
    case ErrorTag::singular_input: return "singular-input";
    case ErrorTag::verification_failed: return "verification-failed";
    case ErrorTag::unsupported: return "unsupported";
    case ErrorTag::io_error: return "io-error";
    }
    return "unknown";
}

} // namespace compound
