#include "vanet/routing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace vanet {

bool HopPurse::can_pay() const
{
    // Relative slack so that budget = k * price pays exactly k hops.
    return spent + price <= budget + 1e-9 * std::max(1.0, budget);
}

const Vehicle& find_vehicle(std::span<const Vehicle> vehicles, VehicleId id)
{
    const auto idx = static_cast<std::size_t>(raw(id));
    if (idx < vehicles.size() && vehicles[idx].id == id) return vehicles[idx];
    auto it = std::find_if(vehicles.begin(), vehicles.end(),
                           [id](const Vehicle& v) { return v.id == id; });
    if (it == vehicles.end()) {
        throw std::out_of_range("unknown vehicle id " + std::to_string(raw(id)));
    }
    return *it;
}

Vehicle& find_vehicle(std::span<Vehicle> vehicles, VehicleId id)
{
    return const_cast<Vehicle&>(find_vehicle(std::span<const Vehicle>(vehicles), id));
}

PacketState& Router::packet(PacketId id)
{
    auto it = packets_.find(id);
    if (it == packets_.end()) throw std::out_of_range("unknown packet id " + std::to_string(raw(id)));
    return it->second;
}

const PacketState& Router::packet(PacketId id) const
{
    return const_cast<Router*>(this)->packet(id);
}

PacketState& Router::spray_origin(const Packet& packet, std::span<Vehicle> vehicles, double time,
                                  std::optional<HopPurse> purse)
{
    if (packets_.contains(packet.id)) {
        throw SimulationError("packet " + std::to_string(raw(packet.id)) + " already sprayed");
    }
    Vehicle* source = nullptr;
    try {
        source = &find_vehicle(vehicles, packet.source_id);
    } catch (const std::out_of_range&) {
        throw SimulationError("packet source " + std::to_string(raw(packet.source_id)) +
                              " is not a vehicle");
    }
    if (source->has_seen(packet.id)) {
        throw SimulationError("packet " + std::to_string(raw(packet.id)) + " already sprayed");
    }

    auto [it, inserted] = packets_.try_emplace(packet.id, packet, packet.source_id);
    it->second.purse = std::move(purse);

    CarryState carry;
    carry.packet_id = packet.id;
    carry.received_at = time;
    carry.receive_position = source->position;
    carry.receive_distance = distance(reference_point(it->second, vehicles), source->position);
    source->carried.emplace(packet.id, carry);
    return it->second;
}

Vec2 Router::reference_point(const PacketState& state, std::span<const Vehicle> vehicles) const
{
    if (reference_ == DistanceReference::LiveSource) {
        return find_vehicle(vehicles, state.packet.source_id).position;
    }
    return state.packet.origin_position;
}

bool Router::transfer(PacketState& state, Vehicle& carrier, Vehicle& receiver, const Encounter& e,
                      std::span<const Vehicle> vehicles)
{
    const PacketId pid = state.packet.id;
    if (state.purse) {
        if (!state.purse->can_pay()) {
            state.purse->refused.insert(receiver.id);
            return false;
        }
        state.purse->spent += state.purse->price;
    }

    const Vec2 ref = reference_point(state, vehicles);
    TreeLink link;
    link.from_id = carrier.id;
    link.to_id = receiver.id;
    link.timestamp = e.time;
    link.from_position = carrier.position;
    link.to_position = receiver.position;
    link.distance_from_origin = distance(ref, carrier.position);
    state.tree.add_link(link);

    CarryState carry;
    carry.packet_id = pid;
    carry.received_at = e.time;
    carry.received_from = carrier.id;
    carry.receive_position = receiver.position;
    carry.receive_distance = distance(ref, receiver.position);
    receiver.carried.emplace(pid, carry);
    ++carrier.carried.at(pid).forward_count;
    return true;
}

int Router::on_encounter(const Encounter& encounter, std::span<Vehicle> vehicles)
{
    Vehicle& a = find_vehicle(vehicles, encounter.a_id);
    Vehicle& b = find_vehicle(vehicles, encounter.b_id);
    int transfers = 0;
    for (auto& [pid, state] : packets_) {
        if (state.closed || !state.packet.within_deadline(encounter.time)) continue;
        const bool a_has = a.has_seen(pid);
        const bool b_has = b.has_seen(pid);
        if (a_has == b_has) continue;
        Vehicle& carrier = a_has ? a : b;
        Vehicle& receiver = a_has ? b : a;
        if (transfer(state, carrier, receiver, encounter, vehicles)) ++transfers;
    }
    return transfers;
}

double stored_time(const CarryState& carry, double time_now, const Packet& packet)
{
    const double until = std::min(time_now, packet.expires_at());
    return std::max(0.0, until - carry.received_at);
}

int descendants(const ForwardingTree& tree, VehicleId vehicle)
{
    if (!tree.contains(vehicle)) {
        throw std::out_of_range("vehicle " + std::to_string(raw(vehicle)) +
                                " is not in the forwarding tree");
    }
    std::map<VehicleId, std::vector<VehicleId>> children;
    for (const auto& link : tree.links()) children[link.from_id].push_back(link.to_id);

    int count = 0;
    std::vector<VehicleId> stack{vehicle};
    while (!stack.empty()) {
        const VehicleId node = stack.back();
        stack.pop_back();
        if (auto it = children.find(node); it != children.end()) {
            count += static_cast<int>(it->second.size());
            stack.insert(stack.end(), it->second.begin(), it->second.end());
        }
    }
    return count;
}

std::vector<VehicleId> path_to(const ForwardingTree& tree, VehicleId vehicle)
{
    std::vector<VehicleId> path;
    if (!tree.contains(vehicle)) return path;
    std::optional<VehicleId> node = vehicle;
    while (node) {
        path.push_back(*node);
        node = tree.parent_of(*node);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace vanet
