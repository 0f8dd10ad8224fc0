#pragma once

// Fixed-tick discrete-event driver. Each tick: move vehicles, spray packets
// that are due, detect contacts, hand each contact to the router in
// (a_id, b_id) order, then settle packets whose trigger fired.

#include <functional>
#include <span>
#include <vector>

#include "vanet/contact.hpp"
#include "vanet/model.hpp"
#include "vanet/routing.hpp"
#include "vanet/scenario.hpp"
#include "vanet/settlement.hpp"

namespace vanet {

struct PacketOutcome {
    Packet packet;
    ForwardingTree tree;
    std::vector<ContributionRecord> records;
    SettlementReport report;
    double settled_at = 0.0;
    std::size_t refused_hops = 0;  // Packet Purse only
};

struct SimulationTrace {
    Scenario scenario;
    std::vector<PacketOutcome> packets;
    std::vector<Vehicle> vehicles;  // final state, balances included
    std::size_t ticks = 0;
    std::size_t encounters = 0;
};

/// Called once per tick after contact detection, before routing.
using TickObserver =
    std::function<void(double time, std::span<const Vehicle>, std::span<const Encounter>)>;

/// Runs the scenario to completion. Throws ScenarioError if it is invalid.
SimulationTrace run(const Scenario& scenario, const TickObserver& observer = {});

/// Total credit held by all vehicles.
double total_credit(std::span<const Vehicle> vehicles);

}  // namespace vanet
