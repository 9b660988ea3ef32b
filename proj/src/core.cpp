#include "sumsetlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sumsetlab/rng.hpp"

namespace sumsetlab {

namespace {

// ceil/floor with a relative snap so that products like 0.1*30, which land an
// ulp above the true integer, do not round across the boundary.
std::int64_t snapped_ceil(double x) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(x));
    return static_cast<std::int64_t>(std::ceil(x - tol));
}

std::int64_t snapped_floor(double x) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(x));
    return static_cast<std::int64_t>(std::floor(x + tol));
}

}  // namespace

IntegerSet::IntegerSet(std::int64_t n, std::vector<std::int64_t> members)
    : n_(n), members_(std::move(members)) {
    if (n_ < 0) {
        throw std::invalid_argument("IntegerSet: n must be nonnegative");
    }
    std::int64_t prev = -1;
    for (const std::int64_t m : members_) {
        if (m < 0 || m > n_) {
            throw std::invalid_argument("IntegerSet: member " + std::to_string(m) +
                                        " outside [0," + std::to_string(n_) + "]");
        }
        if (m <= prev) {
            throw std::invalid_argument("IntegerSet: members must be strictly increasing");
        }
        prev = m;
    }
}

bool IntegerSet::contains(std::int64_t value) const {
    return std::binary_search(members_.begin(), members_.end(), value);
}

std::vector<std::int64_t> IntegerSet::indicator() const {
    std::vector<std::int64_t> ind(static_cast<std::size_t>(n_) + 1, 0);
    for (const std::int64_t m : members_) ind[static_cast<std::size_t>(m)] = 1;
    return ind;
}

IntegerSet IntegerSet::parse(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("IntegerSet::parse: empty input, expected header line n=<value>");
    }
    if (line.rfind("n=", 0) != 0) {
        throw std::runtime_error("IntegerSet::parse: first line must be n=<value>, got \"" + line + "\"");
    }
    std::int64_t n = 0;
    try {
        n = std::stoll(line.substr(2));
    } catch (const std::exception&) {
        throw std::runtime_error("IntegerSet::parse: bad header \"" + line + "\"");
    }
    std::vector<std::int64_t> members;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            members.push_back(std::stoll(line));
        } catch (const std::exception&) {
            throw std::runtime_error("IntegerSet::parse: bad integer on line " + std::to_string(lineno));
        }
    }
    return IntegerSet(n, std::move(members));  // constructor re-validates order/range
}

void IntegerSet::write(std::ostream& out) const {
    out << "n=" << n_ << '\n';
    for (const std::int64_t m : members_) out << m << '\n';
}

void ThresholdSpec::validate() const {
    if (n < 1) throw std::invalid_argument("ThresholdSpec: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("ThresholdSpec: alpha must lie strictly in (0,1)");
    }
    if (h < 2) throw std::invalid_argument("ThresholdSpec: h must be >= 2");
    if (g < 1) throw std::invalid_argument("ThresholdSpec: g must be >= 1");
    if (h != 2 && g != 1) {
        throw std::invalid_argument(
            "ThresholdSpec: unsupported combination h=" + std::to_string(h) + ", g=" +
            std::to_string(g) + " (need h=2 or g=1)");
    }
    if (!std::isfinite(A)) throw std::invalid_argument("ThresholdSpec: A must be finite");
}

Window window_bounds(std::int64_t n, double alpha, int h) {
    if (n < 1) throw std::invalid_argument("window_bounds: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("window_bounds: alpha must lie strictly in (0,1)");
    }
    if (h < 2) throw std::invalid_argument("window_bounds: h must be >= 2");
    const double nd = static_cast<double>(n);
    return Window{snapped_ceil(alpha * nd), snapped_floor((h - alpha) * nd)};
}

IntegerSet sample_set(std::int64_t n, double p, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_set: n must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_set: p must lie in [0,1]");
    }
    Rng rng(seed);
    std::vector<std::int64_t> members;
    for (std::int64_t v = 0; v <= n; ++v) {
        if (rng.bernoulli(p)) members.push_back(v);
    }
    return IntegerSet(n, std::move(members));
}

}  // namespace sumsetlab
