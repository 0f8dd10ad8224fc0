#pragma once

// Random-waypoint mobility inside a rectangular arena [0,W] x [0,H].

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vanet/model.hpp"

namespace vanet {

struct MobilityConfig {
    double arena_width = 800.0;
    double arena_height = 800.0;
    int node_count = 15;
    double speed_min = 5.0;   // m/s
    double speed_max = 15.0;  // m/s
    double pause_time = 0.0;  // s
    std::uint64_t rng_seed = 1;
};

/// Throws ValidationError naming the first offending field.
void validate(const MobilityConfig& cfg);

bool inside_arena(Vec2 p, const MobilityConfig& cfg);

/// Owns the random stream so that placement followed by any sequence of steps
/// is reproducible from rng_seed alone.
class RandomWaypoint {
public:
    explicit RandomWaypoint(MobilityConfig cfg);

    const MobilityConfig& config() const { return cfg_; }

    /// node_count vehicles with ids 0..n-1, uniform positions, first waypoint drawn.
    std::vector<Vehicle> initial_placement();

    /// Moves every vehicle toward its waypoint for dt seconds; on arrival the
    /// vehicle pauses for pause_time and then draws a fresh waypoint and speed.
    void step(std::span<Vehicle> vehicles, double dt);

private:
    Vec2 draw_point();
    double draw_speed();
    void draw_leg(Vehicle& v);

    MobilityConfig cfg_;
    std::mt19937_64 rng_;
};

/// Convenience wrapper for one-shot placement.
std::vector<Vehicle> initial_placement(const MobilityConfig& cfg);

}  // namespace vanet
