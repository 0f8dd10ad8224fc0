#pragma once

// Epidemic store-carry-forward dissemination. Carriers hand a copy to every
// contact that has never seen the packet, until the packet's deadline.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vanet/contact.hpp"
#include "vanet/model.hpp"

namespace vanet {

/// Point that relay distances d_ij are measured from.
enum class DistanceReference {
    Origin,      // packet.origin_position, fixed at creation
    LiveSource,  // the source vehicle's position at relay time
};

/// Per-hop admission for the Packet Purse baseline: each new hop costs
/// price, and the packet stops spreading once the purse cannot pay.
struct HopPurse {
    double budget = 0.0;
    double price = 0.0;
    double spent = 0.0;
    std::set<VehicleId> refused;  // unseen vehicles turned away for lack of funds

    bool can_pay() const;
};

struct PacketState {
    Packet packet;
    ForwardingTree tree;
    std::optional<HopPurse> purse;
    bool closed = false;  // settled; no further transfers

    PacketState(Packet p, VehicleId root) : packet(std::move(p)), tree(packet.id, root) {}
};

class Router {
public:
    explicit Router(DistanceReference reference = DistanceReference::Origin)
        : reference_(reference)
    {
    }

    /// Source starts carrying the packet at `time`. Throws SimulationError on a
    /// duplicate packet id or unknown source.
    PacketState& spray_origin(const Packet& packet, std::span<Vehicle> vehicles, double time,
                              std::optional<HopPurse> purse = std::nullopt);

    /// Transfers every open, in-deadline packet held by exactly one side of the
    /// encounter to the other side. Returns the number of transfers.
    int on_encounter(const Encounter& encounter, std::span<Vehicle> vehicles);

    const std::map<PacketId, PacketState>& packets() const { return packets_; }
    PacketState& packet(PacketId id);
    const PacketState& packet(PacketId id) const;

private:
    bool transfer(PacketState& state, Vehicle& carrier, Vehicle& receiver, const Encounter& e,
                  std::span<const Vehicle> vehicles);
    Vec2 reference_point(const PacketState& state, std::span<const Vehicle> vehicles) const;

    DistanceReference reference_;
    std::map<PacketId, PacketState> packets_;
};

/// t_ij: time the vehicle has held the packet, counted only up to the deadline.
double stored_time(const CarryState& carry, double time_now, const Packet& packet);

/// Number of nodes strictly below `vehicle` in the tree. Throws
/// std::out_of_range if the vehicle is not a member.
int descendants(const ForwardingTree& tree, VehicleId vehicle);

/// Root-to-node path (inclusive). Empty if the node is not in the tree.
std::vector<VehicleId> path_to(const ForwardingTree& tree, VehicleId vehicle);

const Vehicle& find_vehicle(std::span<const Vehicle> vehicles, VehicleId id);
Vehicle& find_vehicle(std::span<Vehicle> vehicles, VehicleId id);

}  // namespace vanet
