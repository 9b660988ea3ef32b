#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sumsetlab {

// Inclusive integer interval.
struct Window {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    std::int64_t length() const { return hi - lo + 1; }
};

// Finite subset of {0,...,n}, stored as a strictly increasing sequence.
class IntegerSet {
public:
    // Validates membership range and strict ordering.
    IntegerSet(std::int64_t n, std::vector<std::int64_t> members);

    std::int64_t n() const { return n_; }
    const std::vector<std::int64_t>& members() const { return members_; }
    std::int64_t size() const { return static_cast<std::int64_t>(members_.size()); }
    bool empty() const { return members_.empty(); }
    bool contains(std::int64_t value) const;

    // 0/1 membership array over {0,...,n}.
    std::vector<std::int64_t> indicator() const;

    // Text format: header line "n=<value>", then one member per line, ascending.
    static IntegerSet parse(std::istream& in);
    void write(std::ostream& out) const;

private:
    std::int64_t n_;
    std::vector<std::int64_t> members_;
};

// Parameters of the threshold probability for random truncated bases.
// Supported regimes: h = 2 with any g >= 1, or g = 1 with any h >= 2.
struct ThresholdSpec {
    std::int64_t n = 0;
    double alpha = 0.5;
    int h = 2;
    int g = 1;
    double A = 0.0;  // additive offset A_n in the threshold probability

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Target sumset interval [ceil(alpha*n), floor((h-alpha)*n)].
Window window_bounds(std::int64_t n, double alpha, int h);

// Includes each of 0..n independently with probability p. Pure function of
// (n, p, seed); consumes one uniform draw per candidate integer.
IntegerSet sample_set(std::int64_t n, double p, std::uint64_t seed);

}  // namespace sumsetlab
