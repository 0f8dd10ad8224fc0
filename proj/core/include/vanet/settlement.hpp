#pragma once

// Reward settlement: proportional sharing of a fixed budget plus the
// Packet Purse and Packet Trade baselines, and the credit ledger that applies
// a finished report to vehicle balances.

#include <set>
#include <span>
#include <string>
#include <vector>

#include "vanet/model.hpp"

namespace vanet {

/// Raw bookkeeping (t, f, relay distances) for every non-root member of the
/// tree, in the order the members joined. Contributions are left at zero.
std::vector<ContributionRecord> collect_records(const Packet& packet, const ForwardingTree& tree,
                                                std::span<const Vehicle> vehicles,
                                                double time_now);

/// R_i = R * C_i / C. With C = 0 nothing is paid and R is refunded.
/// Throws ValidationError for records outside the tree, for the source, for
/// duplicates, or for negative contributions.
SettlementReport settle_proportional(const Packet& packet, const ForwardingTree& tree,
                                     std::span<const ContributionRecord> records,
                                     Scheme scheme = Scheme::SecondProposal);

/// Pays per_hop_price to each link's receiver in construction order until the
/// purse is empty. unmet_hops counts hops that were refused outright because
/// the purse ran dry during dissemination; they add to the demand.
SettlementReport settle_packet_purse(const Packet& packet, const ForwardingTree& tree,
                                     double per_hop_price, std::size_t unmet_hops = 0);

/// The destination pays per_hop_price to each intermediary on the
/// root-to-destination path. Undelivered packets pay nothing.
SettlementReport settle_packet_trade(const Packet& packet, const ForwardingTree& tree,
                                     VehicleId destination, double per_hop_price);

/// Applies settlement reports to vehicle balances, at most once per report.
class CreditLedger {
public:
    /// Debits the payer, credits the shares. Throws ValidationError on an
    /// unknown vehicle and SimulationError on a replayed report; in both cases
    /// no balance is touched.
    void apply(const SettlementReport& report, std::span<Vehicle> vehicles);

    bool applied(const SettlementReport& report) const { return tokens_.contains(report.token()); }

private:
    std::set<std::string> tokens_;
};

}  // namespace vanet
