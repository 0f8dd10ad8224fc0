#pragma once

// Domain types shared by every stage of the simulator: vehicles, packets,
// forwarding trees, contribution records and settlement reports.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vanet {

enum class VehicleId : std::uint32_t {};
enum class PacketId : std::uint32_t {};

constexpr std::uint32_t raw(VehicleId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t raw(PacketId id) { return static_cast<std::uint32_t>(id); }

/// Raised when a configuration or domain value violates its constraints.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the simulation reaches an inconsistent state at runtime.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
constexpr double squared_distance(Vec2 a, Vec2 b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Balancing factors of the three-term contribution metric. Always sums to 1.
class WeightSet {
public:
    static constexpr double kSumTolerance = 1e-12;

    /// Throws ValidationError unless each weight is in [0,1] and they sum to 1.
    WeightSet(double time_weight, double forward_weight, double distance_weight);

    /// (alpha, 1 - alpha, 0): the two-term metrics.
    static WeightSet two_term(double alpha);

    double alpha1() const { return alpha1_; }
    double alpha2() const { return alpha2_; }
    double alpha3() const { return alpha3_; }

    friend bool operator==(const WeightSet&, const WeightSet&) = default;

private:
    double alpha1_;
    double alpha2_;
    double alpha3_;
};

enum class PayloadClass { Safety, AddedValue };

struct Packet {
    PacketId id{};
    VehicleId source_id{};
    Vec2 origin_position{};
    double created_at = 0.0;
    double reward_budget = 0.0;    // R
    double deadline = 0.0;         // T_j, seconds after created_at
    double interest_radius = 0.0;  // D_j, meters around origin_position
    WeightSet weights{0.25, 0.50, 0.25};
    PayloadClass payload_class = PayloadClass::AddedValue;

    double expires_at() const { return created_at + deadline; }
    bool within_deadline(double time) const { return time - created_at <= deadline; }
};

/// Throws ValidationError if the packet breaks its field constraints.
/// Safety packets must have deadline <= safety_deadline_cap.
void validate(const Packet& packet, double safety_deadline_cap);

struct CarryState {
    PacketId packet_id{};
    double received_at = 0.0;
    std::optional<VehicleId> received_from;  // empty for the source
    int forward_count = 0;                   // f_ij, deadline-bounded
    Vec2 receive_position{};
    double receive_distance = 0.0;  // distance to the reference point on receipt
};

/// Waypoint bookkeeping used by the random-waypoint mobility model.
struct MotionState {
    Vec2 waypoint{};
    double speed = 0.0;
    double pause_remaining = 0.0;
};

struct Vehicle {
    VehicleId id{};
    Vec2 position{};
    Vec2 velocity{};
    double credit_balance = 0.0;
    MotionState motion{};
    std::map<PacketId, CarryState> carried;

    bool has_seen(PacketId packet) const { return carried.contains(packet); }
};

struct TreeLink {
    VehicleId from_id{};
    VehicleId to_id{};
    double timestamp = 0.0;
    Vec2 from_position{};
    Vec2 to_position{};
    double distance_from_origin = 0.0;  // d_ij at relay time
};

/// Relay history of one packet. Every vehicle appears at most once and every
/// non-root member has exactly one parent.
class ForwardingTree {
public:
    ForwardingTree(PacketId packet, VehicleId root);

    PacketId packet_id() const { return packet_; }
    VehicleId root() const { return root_; }
    const std::vector<TreeLink>& links() const { return links_; }

    bool contains(VehicleId id) const { return members_.contains(id); }
    std::size_t size() const { return members_.size(); }
    std::optional<VehicleId> parent_of(VehicleId id) const;
    std::vector<VehicleId> children_of(VehicleId id) const;

    /// Appends a relay. Throws SimulationError if the sender is not a member,
    /// the receiver already is, or time runs backwards along the path.
    void add_link(const TreeLink& link);

private:
    PacketId packet_;
    VehicleId root_;
    std::vector<TreeLink> links_;
    std::set<VehicleId> members_;
    std::map<VehicleId, std::size_t> inbound_;  // member -> index into links_
};

struct ContributionRecord {
    VehicleId vehicle_id{};
    PacketId packet_id{};
    double stored_time = 0.0;  // t_ij
    int forward_count = 0;     // f_ij
    std::vector<double> relay_distances;
    double receive_distance = 0.0;
    double effective_distance = 0.0;
    double contribution = 0.0;  // C_ij
};

enum class Scheme { BasicLinear, FirstProposal, SecondProposal, PacketPurse, PacketTrade };

constexpr bool is_proportional(Scheme s)
{
    return s == Scheme::BasicLinear || s == Scheme::FirstProposal || s == Scheme::SecondProposal;
}

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

struct SettlementReport {
    PacketId packet_id{};
    Scheme scheme = Scheme::SecondProposal;
    VehicleId payer{};  // source, or destination under Packet Trade
    double budget = 0.0;
    double total_contribution = 0.0;  // C
    std::map<VehicleId, double> shares;
    double overspend = 0.0;  // demand beyond budget; 0 for proportional schemes
    double refunded = 0.0;   // budget returned to the payer
    std::size_t paid_hops = 0;
    std::size_t unpaid_hops = 0;
    bool delivered = true;

    double total_paid() const;
    /// Identifies the settlement for replay protection.
    std::string token() const;
};

}  // namespace vanet
