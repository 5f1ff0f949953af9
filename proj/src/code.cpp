#include "qbc/code.hpp"

#include <stdexcept>
#include <utility>

namespace qbc {

Code::Code(std::string id, std::vector<Bits> checks)
    : id_(std::move(id)), checks_(std::move(checks)) {}

Code Code::all_strings() { return Code("all", {}); }

Code Code::parity_check(std::vector<Bits> checks) {
    if (checks.empty())
        throw std::invalid_argument("Code::parity_check: no rows");
    for (const auto& row : checks)
        if (row.size() != checks.front().size())
            throw std::invalid_argument("Code::parity_check: ragged rows");
    return Code("parity_check", std::move(checks));
}

bool Code::contains(const Bits& word) const {
    if (checks_.empty()) return true;
    if (word.size() != checks_.front().size()) return false;
    for (const auto& row : checks_)
        if (parity(row, word) != 0) return false;
    return true;
}

Bits Code::sample_preparation(int n, Rng& rng) const {
    if (checks_.empty()) return random_bits(n, rng);
    // The code constrains excluded (n-1 bit) strings; accept an n-bit draw
    // once some exclusion of it is a codeword.
    constexpr int kMaxAttempts = 20000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Bits candidate = random_bits(n, rng);
        for (int x = 0; x < n; ++x)
            if (contains(exclude(candidate, x))) return candidate;
    }
    throw std::runtime_error(
        "Code::sample_preparation: no preparation string admits an "
        "exclusion into the code");
}

}  // namespace qbc
