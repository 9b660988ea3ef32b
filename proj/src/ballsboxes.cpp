#include "sumsetlab/ballsboxes.hpp"

#include <stdexcept>

#include "sumsetlab/rng.hpp"

namespace sumsetlab {

namespace {

void require_boxes(std::int64_t boxes) {
    if (boxes < 1) throw std::invalid_argument("box count must be >= 1");
}

void require_level(int g) {
    if (g < 1) throw std::invalid_argument("g must be >= 1");
}

}  // namespace

AllocationResult allocate(std::int64_t balls, std::int64_t boxes, std::uint64_t seed) {
    require_boxes(boxes);
    if (balls < 0) throw std::invalid_argument("ball count must be >= 0");
    AllocationResult result;
    result.boxes = boxes;
    result.balls = balls;
    result.occupancy.assign(static_cast<std::size_t>(boxes), 0);
    Rng rng(seed);
    for (std::int64_t i = 0; i < balls; ++i) {
        ++result.occupancy[rng.bounded(static_cast<std::uint64_t>(boxes))];
    }
    return result;
}

OverfullUnderfull overfull_underfull(const AllocationResult& result, int g) {
    require_level(g);
    OverfullUnderfull out;
    for (const std::int64_t c : result.occupancy) {
        if (c >= g + 1) ++out.overfull;
        if (c <= g - 1) ++out.underfull;
    }
    return out;
}

std::int64_t waiting_time(std::int64_t boxes, int g, std::uint64_t seed) {
    require_boxes(boxes);
    require_level(g);
    std::vector<std::int32_t> occupancy(static_cast<std::size_t>(boxes), 0);
    std::int64_t deficient = boxes;  // boxes still below g
    Rng rng(seed);
    std::int64_t throws = 0;
    while (deficient > 0) {
        const std::uint64_t box = rng.bounded(static_cast<std::uint64_t>(boxes));
        ++throws;
        if (++occupancy[box] == g && --deficient == 0) break;
    }
    return throws;
}

std::vector<std::int64_t> waiting_times_coupled(std::int64_t boxes, int g_max,
                                                std::uint64_t seed) {
    require_boxes(boxes);
    require_level(g_max);
    std::vector<std::int32_t> occupancy(static_cast<std::size_t>(boxes), 0);
    std::vector<std::int64_t> deficient(static_cast<std::size_t>(g_max) + 1, boxes);
    std::vector<std::int64_t> times(static_cast<std::size_t>(g_max), 0);
    Rng rng(seed);
    std::int64_t throws = 0;
    std::int64_t pending = g_max;  // levels whose waiting time is still open
    while (pending > 0) {
        const std::uint64_t box = rng.bounded(static_cast<std::uint64_t>(boxes));
        ++throws;
        const std::int32_t level = ++occupancy[box];
        if (level <= g_max && --deficient[level] == 0) {
            times[static_cast<std::size_t>(level) - 1] = throws;
            --pending;
        }
    }
    return times;
}

}  // namespace sumsetlab
