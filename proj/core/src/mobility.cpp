#include "vanet/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace vanet {

void validate(const MobilityConfig& cfg)
{
    if (!(cfg.arena_width > 0.0)) throw ValidationError("mobility.arena_width must be > 0");
    if (!(cfg.arena_height > 0.0)) throw ValidationError("mobility.arena_height must be > 0");
    if (cfg.node_count <= 0) throw ValidationError("mobility.node_count must be > 0");
    if (!(cfg.speed_min >= 0.0)) throw ValidationError("mobility.speed_min must be >= 0");
    if (!(cfg.speed_max >= cfg.speed_min)) {
        throw ValidationError("mobility.speed_max must be >= mobility.speed_min");
    }
    if (!(cfg.pause_time >= 0.0)) throw ValidationError("mobility.pause_time must be >= 0");
}

bool inside_arena(Vec2 p, const MobilityConfig& cfg)
{
    return p.x >= 0.0 && p.x <= cfg.arena_width && p.y >= 0.0 && p.y <= cfg.arena_height;
}

RandomWaypoint::RandomWaypoint(MobilityConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed)
{
    validate(cfg_);
}

Vec2 RandomWaypoint::draw_point()
{
    std::uniform_real_distribution<double> ux(0.0, cfg_.arena_width);
    std::uniform_real_distribution<double> uy(0.0, cfg_.arena_height);
    const double x = ux(rng_);
    const double y = uy(rng_);
    return {x, y};
}

double RandomWaypoint::draw_speed()
{
    if (cfg_.speed_min == cfg_.speed_max) return cfg_.speed_min;
    std::uniform_real_distribution<double> u(cfg_.speed_min, cfg_.speed_max);
    return u(rng_);
}

void RandomWaypoint::draw_leg(Vehicle& v)
{
    v.motion.waypoint = draw_point();
    v.motion.speed = draw_speed();
    v.motion.pause_remaining = 0.0;
}

std::vector<Vehicle> RandomWaypoint::initial_placement()
{
    std::vector<Vehicle> out(static_cast<std::size_t>(cfg_.node_count));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].id = VehicleId{static_cast<std::uint32_t>(i)};
        out[i].position = draw_point();
    }
    // Waypoints are drawn after all positions so that placement alone does not
    // depend on the speed range.
    for (auto& v : out) draw_leg(v);
    return out;
}

void RandomWaypoint::step(std::span<Vehicle> vehicles, double dt)
{
    for (auto& v : vehicles) {
        auto& m = v.motion;
        if (m.pause_remaining > 0.0) {
            v.velocity = {};
            m.pause_remaining -= dt;
            if (m.pause_remaining <= 0.0) draw_leg(v);
            continue;
        }
        const Vec2 to_go = m.waypoint - v.position;
        const double remaining = norm(to_go);
        const double reach = m.speed * dt;
        if (reach <= 0.0) {
            v.velocity = {};
            continue;
        }
        if (remaining <= reach) {
            v.position = m.waypoint;
            v.velocity = remaining > 0.0 ? to_go * (1.0 / dt) : Vec2{};
            if (cfg_.pause_time > 0.0) {
                m.pause_remaining = cfg_.pause_time;
            } else {
                draw_leg(v);
            }
            continue;
        }
        const Vec2 heading = to_go * (1.0 / remaining);
        v.velocity = heading * m.speed;
        v.position = v.position + heading * reach;
        // Rounding can push a coordinate a hair past the boundary.
        v.position.x = std::clamp(v.position.x, 0.0, cfg_.arena_width);
        v.position.y = std::clamp(v.position.y, 0.0, cfg_.arena_height);
    }
}

std::vector<Vehicle> initial_placement(const MobilityConfig& cfg)
{
    return RandomWaypoint(cfg).initial_placement();
}

}  // namespace vanet
