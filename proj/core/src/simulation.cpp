#include "vanet/simulation.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "vanet/incentives.hpp"
#include "vanet/mobility.hpp"

namespace vanet {

namespace {

// Distinct stream for source selection so that it never perturbs mobility.
constexpr std::uint64_t kSourceStreamSalt = 0x9e3779b97f4a7c15ULL;

struct PendingPacket {
    PacketId id;
    VehicleId source;
    double due;
};

std::vector<PendingPacket> schedule_packets(const Scenario& s)
{
    std::mt19937_64 rng(s.seed ^ kSourceStreamSalt);
    const auto n = static_cast<std::uint32_t>(s.mobility.node_count);
    std::vector<PendingPacket> out;
    for (int i = 0; i < s.packet.count; ++i) {
        VehicleId source{0};
        if (s.packet.source) {
            source = *s.packet.source;
        } else if (s.packet.destination && n > 1) {
            // Draw among the other n-1 vehicles, skipping the destination.
            std::uniform_int_distribution<std::uint32_t> pick(0, n - 2);
            std::uint32_t v = pick(rng);
            if (v >= raw(*s.packet.destination)) ++v;
            source = VehicleId{v};
        } else {
            std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
            source = VehicleId{pick(rng)};
        }
        out.push_back({PacketId{static_cast<std::uint32_t>(i)}, source,
                       s.packet.created_at + i * s.packet.interval});
    }
    return out;
}

class Engine {
public:
    explicit Engine(const Scenario& s)
        : scenario_(s), mobility_([&] {
              MobilityConfig cfg = s.mobility;
              cfg.rng_seed = s.seed;
              return cfg;
          }()),
          router_(s.distance_reference)
    {
        params_ = s.incentives;
        params_.first_reading = s.first_reading.value_or(FirstProposalReading::Ratio);
        vehicles_ = mobility_.initial_placement();
        for (auto& v : vehicles_) v.credit_balance = s.initial_credit;
        pending_ = schedule_packets(s);
    }

    SimulationTrace run(const TickObserver& observer)
    {
        const auto& eng = scenario_.engine;
        const auto last_tick = static_cast<std::size_t>(std::floor(eng.duration / eng.tick_dt + 1e-9));
        SimulationTrace trace;
        double time = 0.0;
        for (std::size_t k = 0; k <= last_tick; ++k) {
            time = static_cast<double>(k) * eng.tick_dt;
            if (k > 0) mobility_.step(vehicles_, eng.tick_dt);
            spray_due(time);
            const auto contacts = detect_contacts(vehicles_, eng.radio_range, time);
            if (observer) observer(time, vehicles_, contacts);
            for (const auto& e : contacts) router_.on_encounter(e, vehicles_);
            trace.encounters += contacts.size();
            settle_triggered(time, false);
            ++trace.ticks;
        }
        settle_triggered(time, true);

        trace.scenario = scenario_;
        trace.packets = std::move(outcomes_);
        trace.vehicles = std::move(vehicles_);
        return trace;
    }

private:
    void spray_due(double time)
    {
        const double eps = 1e-9 * std::max(1.0, time);
        while (next_pending_ < pending_.size() && pending_[next_pending_].due <= time + eps) {
            const auto& due = pending_[next_pending_++];
            const Vehicle& src = find_vehicle(std::span<const Vehicle>(vehicles_), due.source);
            Packet p;
            p.id = due.id;
            p.source_id = due.source;
            p.origin_position = src.position;
            p.created_at = time;
            p.reward_budget = scenario_.packet.reward_budget;
            p.deadline = scenario_.packet.deadline;
            p.interest_radius = scenario_.packet.interest_radius;
            p.weights = scenario_.weights;
            p.payload_class = scenario_.packet.payload_class;
            validate(p, scenario_.safety_deadline_cap);

            std::optional<HopPurse> purse;
            if (scenario_.scheme == Scheme::PacketPurse) {
                purse = HopPurse{p.reward_budget, scenario_.effective_hop_price(), 0.0, {}};
            }
            router_.spray_origin(p, vehicles_, time, std::move(purse));
        }
    }

    bool delivered(const PacketState& st) const
    {
        const auto& dest = scenario_.packet.destination;
        return dest && st.tree.contains(*dest);
    }

    void settle_triggered(double time, bool final_pass)
    {
        for (const auto& [pid, st] : router_.packets()) {
            if (st.closed) continue;
            const bool by_delivery =
                scenario_.trigger == SettlementTrigger::Delivery && delivered(st);
            const bool expired = time >= st.packet.expires_at() - 1e-9;
            if (by_delivery || expired || final_pass) settle(router_.packet(pid), time);
        }
    }

    void settle(PacketState& st, double time)
    {
        PacketOutcome out{st.packet, st.tree, {}, {}, time, 0};
        out.records = collect_records(st.packet, st.tree, vehicles_, time);
        const double price = scenario_.effective_hop_price();
        switch (scenario_.scheme) {
        case Scheme::BasicLinear:
        case Scheme::FirstProposal:
        case Scheme::SecondProposal:
            for (auto& rec : out.records) score(rec, st.packet, scenario_.scheme, params_);
            out.report = settle_proportional(st.packet, st.tree, out.records, scenario_.scheme);
            break;
        case Scheme::PacketPurse:
            for (auto& rec : out.records) {
                rec.effective_distance = effective_distance(
                    rec.relay_distances, rec.receive_distance, params_.distance_aggregate);
            }
            out.refused_hops = st.purse ? st.purse->refused.size() : 0;
            out.report = settle_packet_purse(st.packet, st.tree, price, out.refused_hops);
            break;
        case Scheme::PacketTrade:
            for (auto& rec : out.records) {
                rec.effective_distance = effective_distance(
                    rec.relay_distances, rec.receive_distance, params_.distance_aggregate);
            }
            out.report = settle_packet_trade(st.packet, st.tree, *scenario_.packet.destination, price);
            break;
        }
        ledger_.apply(out.report, vehicles_);
        st.closed = true;
        outcomes_.push_back(std::move(out));
    }

    const Scenario& scenario_;
    RandomWaypoint mobility_;
    Router router_;
    IncentiveParams params_;
    CreditLedger ledger_;
    std::vector<Vehicle> vehicles_;
    std::vector<PendingPacket> pending_;
    std::size_t next_pending_ = 0;
    std::vector<PacketOutcome> outcomes_;
};

}  // namespace

SimulationTrace run(const Scenario& scenario, const TickObserver& observer)
{
    if (auto errs = validate(scenario); !errs.empty()) throw ScenarioError(std::move(errs));
    return Engine(scenario).run(observer);
}

double total_credit(std::span<const Vehicle> vehicles)
{
    return std::accumulate(vehicles.begin(), vehicles.end(), 0.0,
                           [](double acc, const Vehicle& v) { return acc + v.credit_balance; });
}

}  // namespace vanet
