#include "sumsetlab/repcount.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "sumsetlab/convolve.hpp"

namespace sumsetlab {

Engine engine_from_string(const std::string& name) {
    if (name == "naive") return Engine::naive;
    if (name == "convolution") return Engine::convolution;
    throw std::invalid_argument("unknown engine \"" + name + "\" (expected naive or convolution)");
}

std::string to_string(Engine engine) {
    return engine == Engine::naive ? "naive" : "convolution";
}

std::int64_t RepProfile::max_count() const {
    std::int64_t best = 0;
    for (const std::int64_t c : counts) best = std::max(best, c);
    return best;
}

std::int64_t RepProfile::total() const {
    std::int64_t sum = 0;
    for (const std::int64_t c : counts) sum += c;
    return sum;
}

namespace {

void enumerate_tuples(const std::vector<std::int64_t>& members, int depth, int h,
                      std::size_t start, std::int64_t partial,
                      std::vector<std::int64_t>& counts) {
    if (depth == h) {
        ++counts[static_cast<std::size_t>(partial)];
        return;
    }
    for (std::size_t i = start; i < members.size(); ++i) {
        enumerate_tuples(members, depth + 1, h, i, partial + members[i], counts);
    }
}

RepProfile rep_counts_naive(const IntegerSet& set, int h) {
    RepProfile profile;
    profile.h = h;
    profile.max_sum = static_cast<std::int64_t>(h) * set.n();
    profile.counts.assign(static_cast<std::size_t>(profile.max_sum) + 1, 0);
    const auto& members = set.members();
    if (h == 2) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i; j < members.size(); ++j) {
                ++profile.counts[static_cast<std::size_t>(members[i] + members[j])];
            }
        }
    } else {
        enumerate_tuples(members, 0, h, 0, 0, profile.counts);
    }
    return profile;
}

RepProfile rep_counts_convolution(const IntegerSet& set, int h) {
    RepProfile profile;
    profile.h = h;
    profile.max_sum = static_cast<std::int64_t>(h) * set.n();
    profile.counts.assign(static_cast<std::size_t>(profile.max_sum) + 1, 0);
    if (set.empty()) return profile;

    const std::vector<std::int64_t> ind = set.indicator();
    const std::vector<std::int64_t> pair_counts = convolve(ind, ind);  // ordered pairs

    if (h == 2) {
        // multisets = (ordered + diagonal) / 2
        for (std::size_t j = 0; j < pair_counts.size(); ++j) {
            const bool diag = (j % 2 == 0) && set.contains(static_cast<std::int64_t>(j / 2));
            const std::int64_t ordered = pair_counts[j] + (diag ? 1 : 0);
            assert(ordered % 2 == 0);
            profile.counts[j] = ordered / 2;
        }
        return profile;
    }

    // h == 3. Orbit count over permutations of ordered triples:
    //   multisets[j] = (ordered[j] + 3*paired[j] + 2*triple[j]) / 6
    // where paired[j] = #{(a,b): 2a+b=j} and triple[j] = [3|j and j/3 in A].
    const std::vector<std::int64_t> ordered = convolve(pair_counts, ind);
    std::vector<std::int64_t> stretched(2 * ind.size() - 1, 0);
    for (std::size_t a = 0; a < ind.size(); ++a) stretched[2 * a] = ind[a];
    const std::vector<std::int64_t> paired = convolve(stretched, ind);

    for (std::size_t j = 0; j < ordered.size(); ++j) {
        const bool triple = (j % 3 == 0) && set.contains(static_cast<std::int64_t>(j / 3));
        const std::int64_t total =
            ordered[j] + 3 * (j < paired.size() ? paired[j] : 0) + (triple ? 2 : 0);
        assert(total % 6 == 0);
        profile.counts[j] = total / 6;
    }
    return profile;
}

}  // namespace

RepProfile rep_counts(const IntegerSet& set, int h, Engine engine) {
    if (h < 2) throw std::invalid_argument("rep_counts: h must be >= 2");
    if (engine == Engine::naive) {
        if (h > 5) {
            throw std::invalid_argument("rep_counts: naive engine supports h <= 5, got h=" +
                                        std::to_string(h));
        }
        return rep_counts_naive(set, h);
    }
    if (h != 2 && h != 3) {
        throw std::invalid_argument("rep_counts: convolution engine supports h in {2,3}, got h=" +
                                    std::to_string(h));
    }
    return rep_counts_convolution(set, h);
}

Engine choose_engine(const IntegerSet& set, int h) {
    if (h != 2 && h != 3) return Engine::naive;
    // C(s+h-1, h) tuple enumerations vs a few length-h*n transforms.
    const double s = static_cast<double>(set.size());
    const double naive_cost = h == 2 ? s * (s + 1) / 2 : s * (s + 1) * (s + 2) / 6;
    const double n = static_cast<double>(set.n()) + 1;
    const double conv_cost = 40.0 * h * n * std::max(1.0, std::log2(n));
    return naive_cost <= conv_cost ? Engine::naive : Engine::convolution;
}

SigmaDeltaProfile sigma_delta(const IntegerSet& set) {
    SigmaDeltaProfile profile;
    profile.sigma.assign(static_cast<std::size_t>(2 * set.n()) + 1, 0);
    profile.delta.assign(static_cast<std::size_t>(set.n()) + 1, 0);
    const auto& members = set.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
        ++profile.sigma[static_cast<std::size_t>(2 * members[i])];
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            profile.sigma[static_cast<std::size_t>(members[i] + members[j])] += 2;
            ++profile.delta[static_cast<std::size_t>(members[j] - members[i])];
        }
    }
    return profile;
}

std::int64_t underrepresented_count(const RepProfile& profile, const Window& window, int g) {
    if (g < 1) throw std::invalid_argument("underrepresented_count: g must be >= 1");
    if (window.lo < 0 || window.hi > profile.max_sum || window.lo > window.hi) {
        throw std::out_of_range("underrepresented_count: window [" + std::to_string(window.lo) +
                                "," + std::to_string(window.hi) + "] outside profile range [0," +
                                std::to_string(profile.max_sum) + "]");
    }
    std::int64_t count = 0;
    for (std::int64_t j = window.lo; j <= window.hi; ++j) {
        if (profile.counts[static_cast<std::size_t>(j)] <= g - 1) ++count;
    }
    return count;
}

std::int64_t overrepresented_count(const RepProfile& profile, int g) {
    if (g < 1) throw std::invalid_argument("overrepresented_count: g must be >= 1");
    std::int64_t count = 0;
    for (const std::int64_t c : profile.counts) {
        if (c > g) ++count;
    }
    return count;
}

}  // namespace sumsetlab
