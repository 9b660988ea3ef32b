#include "sumsetlab/checkers.hpp"

#include <algorithm>
#include <stdexcept>

namespace sumsetlab {

SigmaDeltaMax max_sigma_delta(const IntegerSet& set) {
    const SigmaDeltaProfile profile = sigma_delta(set);
    SigmaDeltaMax out;
    for (std::size_t m = 0; m < profile.sigma.size(); ++m) {
        const std::int64_t s = profile.sigma[m];
        const std::int64_t d = (m >= 1 && m < profile.delta.size()) ? profile.delta[m] : 0;
        out.max_sigma = std::max(out.max_sigma, s);
        out.max_delta = std::max(out.max_delta, d);
        out.max_joint = std::max(out.max_joint, s + d);
    }
    return out;
}

bool is_bhg(const IntegerSet& set, int h, int g, std::optional<Engine> engine) {
    if (g < 1) throw std::invalid_argument("is_bhg: g must be >= 1");
    const RepProfile profile = rep_counts(set, h, engine ? *engine : choose_engine(set, h));
    return overrepresented_count(profile, g) == 0;
}

bool is_sidon(const IntegerSet& set) {
    return max_sigma_delta(set).max_delta <= 1;
}

bool is_truncated_basis(const IntegerSet& set, double alpha, int h, int g,
                        std::optional<Engine> engine) {
    if (g < 1) throw std::invalid_argument("is_truncated_basis: g must be >= 1");
    const Window window = window_bounds(set.n(), alpha, h);
    if (window.lo > window.hi) return true;  // empty target range is vacuously covered
    const RepProfile profile = rep_counts(set, h, engine ? *engine : choose_engine(set, h));
    return underrepresented_count(profile, window, g) == 0;
}

}  // namespace sumsetlab
