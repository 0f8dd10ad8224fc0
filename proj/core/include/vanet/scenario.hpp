#pragma once

// Scenario files: a JSON document describing one simulation experiment.
// Every field has a built-in default; a file only needs the fields it changes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vanet/contact.hpp"
#include "vanet/incentives.hpp"
#include "vanet/mobility.hpp"
#include "vanet/model.hpp"
#include "vanet/routing.hpp"

namespace vanet {

enum class SettlementTrigger {
    Deadline,  // settle when the packet's deadline expires
    Delivery,  // settle as soon as the designated destination receives it
};

struct PacketSpec {
    double reward_budget = 100.0;
    double deadline = 300.0;
    double interest_radius = 400.0;
    PayloadClass payload_class = PayloadClass::AddedValue;
    std::optional<VehicleId> source;  // empty: drawn at random
    std::optional<VehicleId> destination;
    double created_at = 0.0;
    int count = 1;
    double interval = 0.0;  // spacing between successive packets
};

struct MetricsSpec {
    double time_bin = 10.0;
    double forward_bin = 1.0;
    double distance_bin = 50.0;
};

struct Scenario {
    std::string name = "default";
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::SecondProposal;
    MobilityConfig mobility{};
    EngineConfig engine{};
    PacketSpec packet{};
    IncentiveParams incentives{};
    std::optional<FirstProposalReading> first_reading;  // required for FirstProposal
    WeightSet weights{0.25, 0.50, 0.25};
    DistanceReference distance_reference = DistanceReference::Origin;
    SettlementTrigger trigger = SettlementTrigger::Deadline;
    std::optional<double> per_hop_price;  // empty: reward_budget / node_count
    double initial_credit = 0.0;
    double safety_deadline_cap = 30.0;
    MetricsSpec metrics{};

    double effective_hop_price() const;
};

/// Carries every violation found, each prefixed by its field path.
class ScenarioError : public ValidationError {
public:
    explicit ScenarioError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// All constraint violations; empty when the scenario is runnable.
std::vector<std::string> validate(const Scenario& scenario);

/// Parses and validates. Throws ScenarioError listing every problem found.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical form: every field present, stable key order.
nlohmann::ordered_json to_json(const Scenario& scenario);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

}  // namespace vanet
