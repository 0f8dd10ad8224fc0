#include "vanet/incentives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vanet {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) throw ValidationError(what);
}

}  // namespace

double contribution_basic(double t, int f, double alpha)
{
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    require(t >= 0.0, "stored time must be >= 0");
    require(f >= 0, "forward count must be >= 0");
    return alpha * t + (1.0 - alpha) * static_cast<double>(f);
}

double contribution_first(double t, double deadline, int f, double alpha,
                          FirstProposalReading reading)
{
    require(deadline > 0.0, "deadline must be > 0");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    require(t >= 0.0, "stored time must be >= 0");
    require(f >= 0, "forward count must be >= 0");
    const double time_part = reading == FirstProposalReading::Ratio ? t / deadline : t * deadline;
    return alpha * time_part + (1.0 - alpha) * static_cast<double>(f);
}

double time_term(double t, double deadline, double time_scale)
{
    require(deadline > 0.0, "deadline must be > 0");
    require(t >= 0.0, "stored time must be >= 0");
    require(time_scale > 0.0, "time scale must be > 0");
    return deadline * -std::expm1(-std::min(t, deadline) / time_scale);
}

double forward_term(int f)
{
    require(f >= 0, "forward count must be >= 0");
    return static_cast<double>(f);
}

double distance_term(double d, double interest_radius, double scale)
{
    require(d >= 0.0, "distance must be >= 0");
    require(interest_radius > 0.0, "interest radius must be > 0");
    require(scale > 0.0, "distance scale must be > 0");
    if (d > interest_radius) return 0.0;
    return interest_radius * std::exp(-d / scale);
}

double contribution_second(double t, double deadline, int f, double effective_distance,
                           double interest_radius, const WeightSet& weights, double time_scale,
                           double distance_scale)
{
    return weights.alpha1() * time_term(t, deadline, time_scale) +
           weights.alpha2() * forward_term(f) +
           weights.alpha3() * distance_term(effective_distance, interest_radius, distance_scale);
}

double effective_distance(std::span<const double> relay_distances, double receive_distance,
                          DistanceAggregate aggregate)
{
    if (relay_distances.empty()) return receive_distance;
    switch (aggregate) {
    case DistanceAggregate::Mean:
        return std::accumulate(relay_distances.begin(), relay_distances.end(), 0.0) /
               static_cast<double>(relay_distances.size());
    case DistanceAggregate::Min:
        return *std::min_element(relay_distances.begin(), relay_distances.end());
    case DistanceAggregate::Max:
        return *std::max_element(relay_distances.begin(), relay_distances.end());
    case DistanceAggregate::Last:
        return relay_distances.back();
    }
    return receive_distance;
}

void score(ContributionRecord& record, const Packet& packet, Scheme scheme,
           const IncentiveParams& params)
{
    record.effective_distance =
        effective_distance(record.relay_distances, record.receive_distance,
                           params.distance_aggregate);
    switch (scheme) {
    case Scheme::BasicLinear:
        record.contribution = contribution_basic(record.stored_time, record.forward_count, params.alpha);
        return;
    case Scheme::FirstProposal:
        record.contribution = contribution_first(record.stored_time, packet.deadline,
                                                 record.forward_count, params.alpha,
                                                 params.first_reading);
        return;
    case Scheme::SecondProposal:
        record.contribution = contribution_second(
            record.stored_time, packet.deadline, record.forward_count, record.effective_distance,
            packet.interest_radius, packet.weights, params.time_scale, params.distance_scale);
        return;
    case Scheme::PacketPurse:
    case Scheme::PacketTrade:
        break;
    }
    throw ValidationError("contribution scoring is only defined for proportional schemes");
}

}  // namespace vanet
