#pragma once

#include <cstdint>
#include <optional>

#include "sumsetlab/core.hpp"
#include "sumsetlab/repcount.hpp"

namespace sumsetlab {

// Largest values of the pair-sum and difference multiplicity profiles, plus
// the largest index-aligned sum sigma[m] + delta[m] (delta is 0 outside 1..n).
// A set is Sidon exactly when max_sigma <= 2, equivalently max_delta <= 1.
struct SigmaDeltaMax {
    std::int64_t max_sigma = 0;
    std::int64_t max_delta = 0;
    std::int64_t max_joint = 0;
};

SigmaDeltaMax max_sigma_delta(const IntegerSet& set);

// True iff no integer has more than g representations as an h-element multiset
// sum. Engine defaults to whichever rep_counts backend looks cheaper.
bool is_bhg(const IntegerSet& set, int h, int g,
            std::optional<Engine> engine = std::nullopt);

// B_2[1] membership via the difference profile.
bool is_sidon(const IntegerSet& set);

// True iff every target in [ceil(alpha*n), floor((h-alpha)*n)] has at least g
// representations as an h-element multiset sum from the set.
bool is_truncated_basis(const IntegerSet& set, double alpha, int h, int g,
                        std::optional<Engine> engine = std::nullopt);

}  // namespace sumsetlab
