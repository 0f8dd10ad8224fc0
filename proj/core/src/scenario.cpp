#include "vanet/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace vanet {

namespace {

using json = nlohmann::json;

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, const char*>, N>;

constexpr NameTable<PayloadClass, 2> kPayloadNames{{
    {PayloadClass::AddedValue, "added_value"},
    {PayloadClass::Safety, "safety"},
}};
constexpr NameTable<FirstProposalReading, 2> kReadingNames{{
    {FirstProposalReading::Ratio, "ratio"},
    {FirstProposalReading::Product, "product"},
}};
constexpr NameTable<DistanceAggregate, 4> kAggregateNames{{
    {DistanceAggregate::Mean, "mean"},
    {DistanceAggregate::Min, "min"},
    {DistanceAggregate::Max, "max"},
    {DistanceAggregate::Last, "last"},
}};
constexpr NameTable<DistanceReference, 2> kReferenceNames{{
    {DistanceReference::Origin, "origin"},
    {DistanceReference::LiveSource, "live_source"},
}};
constexpr NameTable<SettlementTrigger, 2> kTriggerNames{{
    {SettlementTrigger::Deadline, "deadline"},
    {SettlementTrigger::Delivery, "delivery"},
}};

template <class E, std::size_t N>
const char* name_of(const NameTable<E, N>& table, E value)
{
    for (const auto& [v, n] : table) {
        if (v == value) return n;
    }
    return "?";
}

template <class E, std::size_t N>
std::string choices(const NameTable<E, N>& table)
{
    std::string out;
    for (const auto& [v, n] : table) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

std::string fmt_number(double v)
{
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

// Reads one JSON object, recording type errors and unknown keys instead of
// stopping at the first problem.
class Section {
public:
    Section(const json& doc, std::string path, std::vector<std::string>& errors)
        : path_(std::move(path)), errors_(errors)
    {
        if (doc.is_object()) {
            doc_ = &doc;
        } else if (!doc.is_null()) {
            errors_.push_back(path_ + ": must be an object");
        }
    }

    std::string field(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* get(const std::string& key)
    {
        seen_.push_back(key);
        if (doc_ == nullptr) return nullptr;
        auto it = doc_->find(key);
        return it == doc_->end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out)
    {
        if (const json* v = get(key)) {
            if (v->is_number()) {
                out = v->get<double>();
            } else {
                errors_.push_back(field(key) + ": expected a number");
            }
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out)
    {
        if (const json* v = get(key)) {
            if (v->is_number_integer()) {
                out = v->get<Int>();
            } else {
                errors_.push_back(field(key) + ": expected an integer");
            }
        }
    }

    void string(const std::string& key, std::string& out)
    {
        if (const json* v = get(key)) {
            if (v->is_string()) {
                out = v->get<std::string>();
            } else {
                errors_.push_back(field(key) + ": expected a string");
            }
        }
    }

    template <class E, std::size_t N>
    void choice(const std::string& key, const NameTable<E, N>& table, E& out)
    {
        std::optional<E> tmp;
        choice(key, table, tmp);
        if (tmp) out = *tmp;
    }

    template <class E, std::size_t N>
    void choice(const std::string& key, const NameTable<E, N>& table, std::optional<E>& out)
    {
        const json* v = get(key);
        if (v == nullptr || v->is_null()) return;
        if (v->is_string()) {
            const auto s = v->get<std::string>();
            for (const auto& [e, n] : table) {
                if (s == n) {
                    out = e;
                    return;
                }
            }
        }
        errors_.push_back(field(key) + ": expected one of " + choices(table));
    }

    // Optional vehicle id: null leaves it empty, `random_word` (if given) too.
    void vehicle(const std::string& key, std::optional<VehicleId>& out, const char* random_word)
    {
        const json* v = get(key);
        if (v == nullptr || v->is_null()) return;
        if (random_word != nullptr && v->is_string() && v->get<std::string>() == random_word) {
            out.reset();
            return;
        }
        if (v->is_number_integer() && v->get<std::int64_t>() >= 0 &&
            v->get<std::int64_t>() <= std::numeric_limits<std::uint32_t>::max()) {
            out = VehicleId{static_cast<std::uint32_t>(v->get<std::int64_t>())};
            return;
        }
        errors_.push_back(field(key) + ": expected a vehicle id" +
                          (random_word ? std::string(" or \"") + random_word + "\"" : ""));
    }

    void finish()
    {
        if (doc_ == nullptr) return;
        for (const auto& [key, value] : doc_->items()) {
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
                errors_.push_back(field(key) + ": unknown field");
            }
        }
    }

private:
    const json* doc_ = nullptr;
    std::string path_;
    std::vector<std::string>& errors_;
    std::vector<std::string> seen_;
};

const json& child(const json& doc, const char* key)
{
    static const json null_json;
    if (!doc.is_object()) return null_json;
    auto it = doc.find(key);
    return it == doc.end() ? null_json : *it;
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

}  // namespace

double Scenario::effective_hop_price() const
{
    if (per_hop_price) return *per_hop_price;
    return packet.reward_budget / static_cast<double>(mobility.node_count);
}

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : ValidationError("invalid scenario: " + join(violations)), violations_(std::move(violations))
{
}

std::vector<std::string> validate(const Scenario& s)
{
    std::vector<std::string> errs;
    const auto need = [&errs](bool ok, std::string msg) {
        if (!ok) errs.push_back(std::move(msg));
    };

    const auto& m = s.mobility;
    need(m.arena_width > 0.0, "mobility.arena_width: must be > 0");
    need(m.arena_height > 0.0, "mobility.arena_height: must be > 0");
    need(m.node_count > 0, "mobility.node_count: must be > 0");
    need(m.speed_min >= 0.0, "mobility.speed_min: must be >= 0");
    need(m.speed_max >= m.speed_min, "mobility.speed_max: must be >= mobility.speed_min");
    need(m.pause_time >= 0.0, "mobility.pause_time: must be >= 0");

    const auto& e = s.engine;
    need(e.radio_range > 0.0, "engine.radio_range: must be > 0");
    need(e.tick_dt > 0.0, "engine.tick_dt: must be > 0");
    need(e.duration > 0.0, "engine.duration: must be > 0");
    if (e.tick_dt > 0.0 && e.duration > 0.0) {
        need(e.tick_dt <= e.duration, "engine.tick_dt: must not exceed engine.duration");
    }

    const auto& p = s.packet;
    need(p.reward_budget >= 0.0, "packet.reward_budget: must be >= 0");
    need(p.deadline > 0.0, "packet.deadline: must be > 0");
    need(p.interest_radius > 0.0, "packet.interest_radius: must be > 0");
    need(p.created_at >= 0.0, "packet.created_at: must be >= 0");
    need(p.count >= 1, "packet.count: must be >= 1");
    need(p.interval >= 0.0, "packet.interval: must be >= 0");
    need(s.safety_deadline_cap > 0.0, "limits.safety_deadline_cap: must be > 0");
    if (p.payload_class == PayloadClass::Safety) {
        need(p.deadline <= s.safety_deadline_cap,
             "packet.deadline: safety packets must not exceed limits.safety_deadline_cap (" +
                 fmt_number(s.safety_deadline_cap) + " s)");
    }
    if (p.count >= 1) {
        const double last = p.created_at + (p.count - 1) * p.interval;
        need(last <= e.duration, "packet.interval: last packet would be created after engine.duration");
    }
    if (p.source) {
        need(static_cast<long long>(raw(*p.source)) < m.node_count,
             "packet.source: vehicle id out of range");
    }
    if (p.destination) {
        need(static_cast<long long>(raw(*p.destination)) < m.node_count,
             "packet.destination: vehicle id out of range");
        if (p.source) {
            need(*p.source != *p.destination, "packet.destination: must differ from packet.source");
        }
    }

    const auto& inc = s.incentives;
    need(inc.time_scale > 0.0, "incentives.time_scale: must be > 0");
    need(inc.distance_scale > 0.0, "incentives.distance_scale: must be > 0");
    switch (s.scheme) {
    case Scheme::BasicLinear:
        need(inc.alpha >= 0.0 && inc.alpha <= 1.0, "incentives.alpha: must lie in [0,1]");
        break;
    case Scheme::FirstProposal:
        need(inc.alpha > 0.0 && inc.alpha < 1.0, "incentives.alpha: must lie in (0,1)");
        need(s.first_reading.has_value(),
             "incentives.first_proposal_reading: required for scheme first_proposal "
             "(one of ratio, product)");
        break;
    case Scheme::PacketTrade:
        need(p.destination.has_value(), "packet.destination: required for scheme packet_trade");
        break;
    case Scheme::SecondProposal:
    case Scheme::PacketPurse:
        break;
    }
    if (s.trigger == SettlementTrigger::Delivery) {
        need(p.destination.has_value(), "packet.destination: required for settlement.trigger delivery");
    }
    if (s.per_hop_price) {
        need(*s.per_hop_price >= 0.0, "settlement.per_hop_price: must be >= 0");
    }
    need(std::isfinite(s.initial_credit), "settlement.initial_credit: must be finite");
    need(s.metrics.time_bin > 0.0, "metrics.time_bin: must be > 0");
    need(s.metrics.forward_bin > 0.0, "metrics.forward_bin: must be > 0");
    need(s.metrics.distance_bin > 0.0, "metrics.distance_bin: must be > 0");
    return errs;
}

Scenario scenario_from_json(const json& doc)
{
    std::vector<std::string> errs;
    Scenario s;
    if (!doc.is_object()) throw ScenarioError({"scenario: top level must be an object"});

    Section top(doc, "", errs);
    top.string("name", s.name);
    top.integer("seed", s.seed);
    {
        std::string scheme_name(to_string(s.scheme));
        top.string("scheme", scheme_name);
        if (auto parsed = parse_scheme(scheme_name)) {
            s.scheme = *parsed;
        } else {
            errs.push_back("scheme: unknown scheme \"" + scheme_name +
                           "\" (basic_linear, first_proposal, second_proposal, packet_purse, "
                           "packet_trade)");
        }
    }

    (void)top.get("mobility");
    Section mob(child(doc, "mobility"), "mobility", errs);
    mob.number("arena_width", s.mobility.arena_width);
    mob.number("arena_height", s.mobility.arena_height);
    mob.integer("node_count", s.mobility.node_count);
    mob.number("speed_min", s.mobility.speed_min);
    mob.number("speed_max", s.mobility.speed_max);
    mob.number("pause_time", s.mobility.pause_time);
    mob.finish();

    (void)top.get("engine");
    Section eng(child(doc, "engine"), "engine", errs);
    eng.number("radio_range", s.engine.radio_range);
    eng.number("tick_dt", s.engine.tick_dt);
    eng.number("duration", s.engine.duration);
    eng.finish();

    (void)top.get("packet");
    Section pkt(child(doc, "packet"), "packet", errs);
    pkt.number("reward_budget", s.packet.reward_budget);
    pkt.number("deadline", s.packet.deadline);
    pkt.number("interest_radius", s.packet.interest_radius);
    pkt.choice("payload_class", kPayloadNames, s.packet.payload_class);
    pkt.vehicle("source", s.packet.source, "random");
    pkt.vehicle("destination", s.packet.destination, nullptr);
    pkt.number("created_at", s.packet.created_at);
    pkt.integer("count", s.packet.count);
    pkt.number("interval", s.packet.interval);
    pkt.finish();

    (void)top.get("incentives");
    Section inc(child(doc, "incentives"), "incentives", errs);
    inc.number("alpha", s.incentives.alpha);
    if (const json* w = inc.get("weights")) {
        if (w->is_array() && w->size() == 3 && std::all_of(w->begin(), w->end(), [](const json& x) {
                return x.is_number();
            })) {
            const double a1 = (*w)[0].get<double>();
            const double a2 = (*w)[1].get<double>();
            const double a3 = (*w)[2].get<double>();
            try {
                s.weights = WeightSet(a1, a2, a3);
            } catch (const ValidationError& e) {
                errs.push_back(std::string("incentives.weights: ") + e.what());
            }
        } else {
            errs.push_back("incentives.weights: expected an array of three numbers");
        }
    }
    inc.number("time_scale", s.incentives.time_scale);
    inc.number("distance_scale", s.incentives.distance_scale);
    inc.choice("first_proposal_reading", kReadingNames, s.first_reading);
    inc.choice("distance_aggregate", kAggregateNames, s.incentives.distance_aggregate);
    inc.choice("distance_reference", kReferenceNames, s.distance_reference);
    inc.finish();

    (void)top.get("settlement");
    Section set(child(doc, "settlement"), "settlement", errs);
    set.choice("trigger", kTriggerNames, s.trigger);
    if (const json* price = set.get("per_hop_price"); price != nullptr && !price->is_null()) {
        if (price->is_number()) {
            s.per_hop_price = price->get<double>();
        } else {
            errs.push_back("settlement.per_hop_price: expected a number or null");
        }
    }
    set.number("initial_credit", s.initial_credit);
    set.finish();

    (void)top.get("limits");
    Section lim(child(doc, "limits"), "limits", errs);
    lim.number("safety_deadline_cap", s.safety_deadline_cap);
    lim.finish();

    (void)top.get("metrics");
    Section met(child(doc, "metrics"), "metrics", errs);
    met.number("time_bin", s.metrics.time_bin);
    met.number("forward_bin", s.metrics.forward_bin);
    met.number("distance_bin", s.metrics.distance_bin);
    met.finish();

    top.finish();

    if (s.first_reading) s.incentives.first_reading = *s.first_reading;
    auto semantic = validate(s);
    errs.insert(errs.end(), semantic.begin(), semantic.end());
    if (!errs.empty()) throw ScenarioError(std::move(errs));
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ScenarioError({path.string() + ": cannot open scenario file"});
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ScenarioError({path.string() + ": " + e.what()});
    }
    return scenario_from_json(doc);
}

nlohmann::ordered_json to_json(const Scenario& s)
{
    using oj = nlohmann::ordered_json;
    const auto opt_vehicle = [](const std::optional<VehicleId>& v, const char* empty_word) -> oj {
        if (v) return raw(*v);
        return empty_word ? oj(empty_word) : oj(nullptr);
    };

    oj out;
    out["name"] = s.name;
    out["seed"] = s.seed;
    out["scheme"] = std::string(to_string(s.scheme));
    out["mobility"] = {
        {"arena_width", s.mobility.arena_width},   {"arena_height", s.mobility.arena_height},
        {"node_count", s.mobility.node_count},     {"speed_min", s.mobility.speed_min},
        {"speed_max", s.mobility.speed_max},       {"pause_time", s.mobility.pause_time},
    };
    out["engine"] = {
        {"radio_range", s.engine.radio_range},
        {"tick_dt", s.engine.tick_dt},
        {"duration", s.engine.duration},
    };
    out["packet"] = {
        {"reward_budget", s.packet.reward_budget},
        {"deadline", s.packet.deadline},
        {"interest_radius", s.packet.interest_radius},
        {"payload_class", name_of(kPayloadNames, s.packet.payload_class)},
        {"source", opt_vehicle(s.packet.source, "random")},
        {"destination", opt_vehicle(s.packet.destination, nullptr)},
        {"created_at", s.packet.created_at},
        {"count", s.packet.count},
        {"interval", s.packet.interval},
    };
    out["incentives"] = {
        {"alpha", s.incentives.alpha},
        {"weights", {s.weights.alpha1(), s.weights.alpha2(), s.weights.alpha3()}},
        {"time_scale", s.incentives.time_scale},
        {"distance_scale", s.incentives.distance_scale},
        {"first_proposal_reading",
         s.first_reading ? oj(name_of(kReadingNames, *s.first_reading)) : oj(nullptr)},
        {"distance_aggregate", name_of(kAggregateNames, s.incentives.distance_aggregate)},
        {"distance_reference", name_of(kReferenceNames, s.distance_reference)},
    };
    out["settlement"] = {
        {"trigger", name_of(kTriggerNames, s.trigger)},
        {"per_hop_price", s.per_hop_price ? oj(*s.per_hop_price) : oj(nullptr)},
        {"initial_credit", s.initial_credit},
    };
    out["limits"] = {{"safety_deadline_cap", s.safety_deadline_cap}};
    out["metrics"] = {
        {"time_bin", s.metrics.time_bin},
        {"forward_bin", s.metrics.forward_bin},
        {"distance_bin", s.metrics.distance_bin},
    };
    return out;
}

std::string scenario_hash(const Scenario& scenario)
{
    const std::string canonical = to_json(scenario).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace vanet
