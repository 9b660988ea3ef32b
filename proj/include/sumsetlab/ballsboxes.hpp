#pragma once

#include <cstdint>
#include <vector>

namespace sumsetlab {

struct AllocationResult {
    std::int64_t boxes = 0;
    std::int64_t balls = 0;
    std::vector<std::int64_t> occupancy;  // size boxes, sums to balls
};

struct OverfullUnderfull {
    std::int64_t overfull = 0;   // boxes holding >= g+1 balls
    std::int64_t underfull = 0;  // boxes holding <= g-1 balls
};

// Drop balls independently and uniformly into boxes. The ball stream is a
// pure function of the seed, and waiting_time consumes the identical stream:
// allocate(waiting_time(N,g,s) balls, N, s) leaves no box below g.
AllocationResult allocate(std::int64_t balls, std::int64_t boxes, std::uint64_t seed);

OverfullUnderfull overfull_underfull(const AllocationResult& result, int g);

// Number of throws until every box holds at least g balls.
std::int64_t waiting_time(std::int64_t boxes, int g, std::uint64_t seed);

// Waiting times for levels 1..g_max read off one shared ball stream, so the
// returned vector is nondecreasing and entry g matches waiting_time(N,g,seed).
std::vector<std::int64_t> waiting_times_coupled(std::int64_t boxes, int g_max,
                                                std::uint64_t seed);

}  // namespace sumsetlab
