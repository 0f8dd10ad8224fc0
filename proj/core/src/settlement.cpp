#include "vanet/settlement.hpp"

#include <cmath>
#include <string>

#include "vanet/routing.hpp"

namespace vanet {

namespace {

std::string id_str(VehicleId id) { return std::to_string(raw(id)); }

}  // namespace

std::vector<ContributionRecord> collect_records(const Packet& packet, const ForwardingTree& tree,
                                                std::span<const Vehicle> vehicles, double time_now)
{
    std::map<VehicleId, std::vector<double>> relays;
    for (const auto& link : tree.links()) relays[link.from_id].push_back(link.distance_from_origin);

    std::vector<ContributionRecord> out;
    out.reserve(tree.links().size());
    for (const auto& link : tree.links()) {
        const Vehicle& v = find_vehicle(vehicles, link.to_id);
        const CarryState& carry = v.carried.at(packet.id);
        ContributionRecord rec;
        rec.vehicle_id = v.id;
        rec.packet_id = packet.id;
        rec.stored_time = stored_time(carry, time_now, packet);
        rec.forward_count = carry.forward_count;
        rec.receive_distance = carry.receive_distance;
        if (auto it = relays.find(v.id); it != relays.end()) rec.relay_distances = it->second;
        out.push_back(std::move(rec));
    }
    return out;
}

SettlementReport settle_proportional(const Packet& packet, const ForwardingTree& tree,
                                     std::span<const ContributionRecord> records, Scheme scheme)
{
    if (!is_proportional(scheme)) throw ValidationError("scheme is not proportional");

    SettlementReport report;
    report.packet_id = packet.id;
    report.scheme = scheme;
    report.payer = packet.source_id;
    report.budget = packet.reward_budget;

    double total = 0.0;
    for (const auto& rec : records) {
        if (rec.packet_id != packet.id) {
            throw ValidationError("record for vehicle " + id_str(rec.vehicle_id) +
                                  " belongs to another packet");
        }
        if (!tree.contains(rec.vehicle_id)) {
            throw ValidationError("vehicle " + id_str(rec.vehicle_id) +
                                  " reported a contribution but is not in the forwarding tree");
        }
        if (rec.vehicle_id == tree.root()) {
            throw ValidationError("the source cannot claim a share of its own reward");
        }
        if (!(rec.contribution >= 0.0) || !std::isfinite(rec.contribution)) {
            throw ValidationError("vehicle " + id_str(rec.vehicle_id) +
                                  " reported an invalid contribution");
        }
        if (report.shares.contains(rec.vehicle_id)) {
            throw ValidationError("duplicate record for vehicle " + id_str(rec.vehicle_id));
        }
        report.shares[rec.vehicle_id] = 0.0;
        total += rec.contribution;
    }
    report.total_contribution = total;

    if (total > 0.0) {
        for (const auto& rec : records) {
            report.shares[rec.vehicle_id] = packet.reward_budget * (rec.contribution / total);
        }
        report.paid_hops = records.size();
    } else {
        report.refunded = packet.reward_budget;
    }
    return report;
}

SettlementReport settle_packet_purse(const Packet& packet, const ForwardingTree& tree,
                                     double per_hop_price, std::size_t unmet_hops)
{
    if (!(per_hop_price >= 0.0)) throw ValidationError("per-hop price must be >= 0");

    SettlementReport report;
    report.packet_id = packet.id;
    report.scheme = Scheme::PacketPurse;
    report.payer = packet.source_id;
    report.budget = packet.reward_budget;

    double purse = packet.reward_budget;
    const double slack = 1e-9 * std::max(1.0, packet.reward_budget);
    for (const auto& link : tree.links()) {
        if (per_hop_price > purse + slack) {
            ++report.unpaid_hops;
            continue;
        }
        purse -= per_hop_price;
        report.shares[link.to_id] += per_hop_price;
        ++report.paid_hops;
    }
    report.unpaid_hops += unmet_hops;
    const double demand =
        static_cast<double>(tree.links().size() + unmet_hops) * per_hop_price;
    report.overspend = std::max(0.0, demand - packet.reward_budget);
    if (report.overspend <= slack) report.overspend = 0.0;
    report.refunded = std::max(0.0, packet.reward_budget - report.total_paid());
    return report;
}

SettlementReport settle_packet_trade(const Packet& packet, const ForwardingTree& tree,
                                     VehicleId destination, double per_hop_price)
{
    if (!(per_hop_price >= 0.0)) throw ValidationError("per-hop price must be >= 0");

    SettlementReport report;
    report.packet_id = packet.id;
    report.scheme = Scheme::PacketTrade;
    report.payer = destination;

    const auto path = path_to(tree, destination);
    if (path.empty()) {
        report.delivered = false;
        return report;
    }
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        report.shares[path[i]] = per_hop_price;
        ++report.paid_hops;
    }
    return report;
}

void CreditLedger::apply(const SettlementReport& report, std::span<Vehicle> vehicles)
{
    const std::string token = report.token();
    if (tokens_.contains(token)) {
        throw SimulationError("settlement " + token + " was already applied");
    }
    try {
        (void)find_vehicle(vehicles, report.payer);
        for (const auto& [id, share] : report.shares) (void)find_vehicle(vehicles, id);
    } catch (const std::out_of_range& e) {
        throw ValidationError(std::string("settlement references ") + e.what());
    }

    double paid = 0.0;
    for (const auto& [id, share] : report.shares) {
        find_vehicle(vehicles, id).credit_balance += share;
        paid += share;
    }
    find_vehicle(vehicles, report.payer).credit_balance -= paid;
    tokens_.insert(token);
}

}  // namespace vanet
