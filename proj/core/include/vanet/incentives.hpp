#pragma once

// Contribution metrics. All functions are pure; inputs outside their domain
// raise ValidationError.
//
// Second-proposal metric:
//   C = a1 * T (1 - exp(-min(t,T)/time_scale))
//     + a2 * f
//     + a3 * D exp(-d/distance_scale)      (0 when d > D)
// The distance term is the closed form of -D(1 - e^-x) + D.

#include <span>

#include "vanet/model.hpp"

namespace vanet {

/// How the first-proposal metric combines storage time with the deadline.
enum class FirstProposalReading {
    Ratio,    // alpha * t / T
    Product,  // alpha * t * T
};

/// Aggregate of a node's per-forward distances used as d in the metric.
enum class DistanceAggregate { Mean, Min, Max, Last };

struct IncentiveParams {
    double alpha = 0.5;  // two-term metrics; the three-term weights travel with the packet
    double time_scale = 60.0;       // s
    double distance_scale = 100.0;  // m
    FirstProposalReading first_reading = FirstProposalReading::Ratio;
    DistanceAggregate distance_aggregate = DistanceAggregate::Mean;
};

/// alpha * t + (1 - alpha) * f
double contribution_basic(double t, int f, double alpha);

double contribution_first(double t, double deadline, int f, double alpha,
                          FirstProposalReading reading = FirstProposalReading::Ratio);

/// T (1 - exp(-min(t,T)/time_scale)); constant once t >= T.
double time_term(double t, double deadline, double time_scale = 1.0);

/// f, unbounded.
double forward_term(int f);

/// D exp(-d/scale) for d <= D, 0 beyond the interest radius.
double distance_term(double d, double interest_radius, double scale);

double contribution_second(double t, double deadline, int f, double effective_distance,
                           double interest_radius, const WeightSet& weights,
                           double time_scale = 1.0, double distance_scale = 1.0);

/// d used by the metric: the chosen aggregate of relay_distances, or
/// receive_distance when the node never forwarded.
double effective_distance(std::span<const double> relay_distances, double receive_distance,
                          DistanceAggregate aggregate);

/// Contribution of one record under a proportional scheme. Fills in
/// effective_distance and contribution. Throws for baseline schemes.
void score(ContributionRecord& record, const Packet& packet, Scheme scheme,
           const IncentiveParams& params);

}  // namespace vanet
