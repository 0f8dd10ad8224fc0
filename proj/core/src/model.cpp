#include "vanet/model.hpp"

#include <array>
#include <numeric>
#include <sstream>
#include <utility>

namespace vanet {

namespace {

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

constexpr std::array<std::pair<Scheme, std::string_view>, 5> kSchemeNames{{
    {Scheme::BasicLinear, "basic_linear"},
    {Scheme::FirstProposal, "first_proposal"},
    {Scheme::SecondProposal, "second_proposal"},
    {Scheme::PacketPurse, "packet_purse"},
    {Scheme::PacketTrade, "packet_trade"},
}};

}  // namespace

WeightSet::WeightSet(double time_weight, double forward_weight, double distance_weight)
    : alpha1_(time_weight), alpha2_(forward_weight), alpha3_(distance_weight)
{
    if (!unit_interval(alpha1_) || !unit_interval(alpha2_) || !unit_interval(alpha3_)) {
        throw ValidationError("weights must each lie in [0,1]");
    }
    const double sum = alpha1_ + alpha2_ + alpha3_;
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "weights must sum to 1, got " << sum;
        throw ValidationError(msg.str());
    }
}

WeightSet WeightSet::two_term(double alpha) { return {alpha, 1.0 - alpha, 0.0}; }

void validate(const Packet& packet, double safety_deadline_cap)
{
    if (!(packet.deadline > 0.0)) throw ValidationError("packet deadline must be > 0");
    if (!(packet.interest_radius > 0.0)) throw ValidationError("packet interest radius must be > 0");
    if (!(packet.reward_budget >= 0.0)) throw ValidationError("packet reward budget must be >= 0");
    if (packet.payload_class == PayloadClass::Safety && packet.deadline > safety_deadline_cap) {
        throw ValidationError("safety packet deadline exceeds the safety deadline cap");
    }
}

ForwardingTree::ForwardingTree(PacketId packet, VehicleId root) : packet_(packet), root_(root)
{
    members_.insert(root);
}

std::optional<VehicleId> ForwardingTree::parent_of(VehicleId id) const
{
    if (auto it = inbound_.find(id); it != inbound_.end()) return links_[it->second].from_id;
    return std::nullopt;
}

std::vector<VehicleId> ForwardingTree::children_of(VehicleId id) const
{
    std::vector<VehicleId> out;
    for (const auto& link : links_) {
        if (link.from_id == id) out.push_back(link.to_id);
    }
    return out;
}

void ForwardingTree::add_link(const TreeLink& link)
{
    if (!contains(link.from_id)) {
        throw SimulationError("tree link sender " + std::to_string(raw(link.from_id)) +
                              " is not a tree member");
    }
    if (contains(link.to_id)) {
        throw SimulationError("vehicle " + std::to_string(raw(link.to_id)) +
                              " already appears in the forwarding tree");
    }
    if (auto it = inbound_.find(link.from_id);
        it != inbound_.end() && links_[it->second].timestamp > link.timestamp) {
        throw SimulationError("tree link timestamp precedes its parent link");
    }
    if (link.distance_from_origin < 0.0) throw SimulationError("negative relay distance");
    inbound_[link.to_id] = links_.size();
    links_.push_back(link);
    members_.insert(link.to_id);
}

std::string_view to_string(Scheme s)
{
    for (const auto& [scheme, name] : kSchemeNames) {
        if (scheme == s) return name;
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (const auto& [scheme, n] : kSchemeNames) {
        if (n == name) return scheme;
    }
    return std::nullopt;
}

double SettlementReport::total_paid() const
{
    return std::accumulate(shares.begin(), shares.end(), 0.0,
                           [](double acc, const auto& kv) { return acc + kv.second; });
}

std::string SettlementReport::token() const
{
    return std::string(to_string(scheme)) + ":" + std::to_string(raw(packet_id));
}

}  // namespace vanet
