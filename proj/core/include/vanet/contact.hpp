#pragma once

// Unit-disk contact detection. Two vehicles are in contact when their
// Euclidean distance is <= radio_range (boundary inclusive).

#include <cstdint>
#include <span>
#include <vector>

#include "vanet/model.hpp"

namespace vanet {

struct Encounter {
    double time = 0.0;
    VehicleId a_id{};  // always a_id < b_id
    VehicleId b_id{};
    Vec2 a_position{};
    Vec2 b_position{};

    friend bool operator==(const Encounter&, const Encounter&) = default;
};

struct EngineConfig {
    double radio_range = 100.0;
    double tick_dt = 1.0;
    double duration = 600.0;
    std::uint64_t rng_seed = 1;
};

void validate(const EngineConfig& cfg);

inline bool in_range(Vec2 a, Vec2 b, double radio_range)
{
    return squared_distance(a, b) <= radio_range * radio_range;
}

/// Grid-accelerated detection (cell size = radio_range). Returns each
/// unordered pair once, sorted by (a_id, b_id).
std::vector<Encounter> detect_contacts(std::span<const Vehicle> vehicles, double radio_range,
                                       double time = 0.0);

/// O(n^2) reference detection with the same ordering.
std::vector<Encounter> detect_contacts_naive(std::span<const Vehicle> vehicles, double radio_range,
                                             double time = 0.0);

}  // namespace vanet
