#pragma once

#include <string>
#include <vector>

#include "qbc/bits.hpp"
#include "qbc/rng.hpp"

namespace qbc {

// Pluggable membership predicate for the agreed code. The default accepts
// every string, which isolates the commitment logic; a parity-check-matrix
// code can be plugged in instead. Membership is checked on the excluded
// (length n-1) strings.
class Code {
  public:
    // Accepts all strings of any length.
    static Code all_strings();

    // Accepts words w of length checks[0].size() with checks[i] . w = 0
    // (mod 2) for every row.
    static Code parity_check(std::vector<Bits> checks);

    bool contains(const Bits& word) const;

    // Uniform n-bit preparation string for the acceptor. For the
    // all-accepting code this is a uniform n-bit draw; for a parity-check
    // code the string is rejection-sampled until some single-position
    // exclusion lands in the code, so an honest run stays feasible.
    Bits sample_preparation(int n, Rng& rng) const;

    const std::string& id() const { return id_; }
    const std::vector<Bits>& checks() const { return checks_; }

  private:
    Code(std::string id, std::vector<Bits> checks);

    std::string id_;
    std::vector<Bits> checks_;
};

}  // namespace qbc
