#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sumsetlab/core.hpp"

namespace sumsetlab {

enum class Engine { naive, convolution };

Engine engine_from_string(const std::string& name);
std::string to_string(Engine engine);

// Unordered h-sum representation counts. counts[j] is the number of
// multisets {a_1 <= ... <= a_h} drawn from the set with a_1+...+a_h = j.
struct RepProfile {
    int h = 2;
    std::int64_t max_sum = 0;            // h * n
    std::vector<std::int64_t> counts;    // indexed 0..max_sum

    std::int64_t max_count() const;
    std::int64_t total() const;          // sum of all counts
};

// Ordered-pair sum and positive-difference counting functions.
// sigma[m] = #{(a,b) in A x A : a+b = m},   m in 0..2n
// delta[m] = #{(a,b) in A x A : a-b = m},   m in 1..n (index 0 unused)
struct SigmaDeltaProfile {
    std::vector<std::int64_t> sigma;
    std::vector<std::int64_t> delta;
};

// engine=naive enumerates nondecreasing h-tuples of members (h <= 5);
// engine=convolution self-convolves the indicator array and converts ordered
// tuple counts to multiset counts (h in {2,3}). Both return identical counts.
RepProfile rep_counts(const IntegerSet& set, int h, Engine engine);

// Cheapest valid engine for this input (cost-based; used when the caller
// has no preference).
Engine choose_engine(const IntegerSet& set, int h);

// Quadratic in |A|; intended for exploratory set sizes.
SigmaDeltaProfile sigma_delta(const IntegerSet& set);

// X = #{j in [w.lo, w.hi] : counts[j] <= g-1}.
std::int64_t underrepresented_count(const RepProfile& profile, const Window& window, int g);

// #{j : counts[j] > g}; zero exactly when the set is B_h[g].
std::int64_t overrepresented_count(const RepProfile& profile, int g);

}  // namespace sumsetlab
