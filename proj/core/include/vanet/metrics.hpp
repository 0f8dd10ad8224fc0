#pragma once

// Per-run summaries: one row per rewarded tree node, reward binned by each
// contribution factor, and the reward/descendants rank correlation.
//
// CSV columns (header row, comma separated, LF line endings):
//   packet_id, vehicle_id, stored_time, forward_count, effective_distance,
//   contribution, reward, descendants
// JSON: {"schema_version", "scenario", "rows", "aggregates"}.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vanet/model.hpp"
#include "vanet/simulation.hpp"

namespace vanet {

inline constexpr int kSummarySchemaVersion = 1;

struct SummaryRow {
    PacketId packet_id{};
    VehicleId vehicle_id{};
    double stored_time = 0.0;
    int forward_count = 0;
    double effective_distance = 0.0;
    double contribution = 0.0;
    double reward = 0.0;
    int descendants = 0;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

enum class BinKey { Time, Forwards, Distance };

struct RewardBin {
    double lower = 0.0;  // inclusive lower edge
    double mean_reward = 0.0;
    std::size_t count = 0;

    friend bool operator==(const RewardBin&, const RewardBin&) = default;
};

struct PacketSummary {
    PacketId packet_id{};
    VehicleId source{};
    VehicleId payer{};
    double created_at = 0.0;
    double settled_at = 0.0;
    std::size_t tree_nodes = 0;  // root included
    double budget = 0.0;
    double total_contribution = 0.0;
    double total_paid = 0.0;
    double overspend = 0.0;
    double refunded = 0.0;
    std::size_t paid_hops = 0;
    std::size_t unpaid_hops = 0;
    bool delivered = true;

    friend bool operator==(const PacketSummary&, const PacketSummary&) = default;
};

struct Aggregates {
    std::vector<RewardBin> by_time;
    std::vector<RewardBin> by_forwards;
    std::vector<RewardBin> by_distance;
    std::optional<double> descendants_spearman;
    std::vector<PacketSummary> packets;

    friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct RunSummary {
    std::string scenario_hash;
    nlohmann::ordered_json scenario;  // canonical effective scenario
    Scheme scheme = Scheme::SecondProposal;
    std::uint64_t seed = 0;
    std::vector<SummaryRow> rows;
    Aggregates aggregates;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct DescendantsCorrelation {
    std::vector<std::pair<int, double>> points;  // (descendants, reward)
    std::optional<double> spearman;              // absent: n < 2 or zero variance
};

/// Mean reward per bin of `key`, bins of width bin_width starting at 0.
/// Empty bins are omitted; bins are sorted by lower edge.
std::vector<RewardBin> bin_rewards(std::span<const SummaryRow> rows, BinKey key, double bin_width);

DescendantsCorrelation reward_vs_descendants(std::span<const SummaryRow> rows);

/// Mean reward never drops from one occupied bin to the next.
bool non_decreasing(std::span<const RewardBin> bins);
/// Mean reward never rises from one occupied bin to the next, ignoring the
/// first bin.
bool non_increasing_after_first(std::span<const RewardBin> bins);

/// Spearman rank correlation with average ranks for ties.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

RunSummary summarize(const SimulationTrace& trace);

enum class ExportFormat { Csv, Json };

/// Raised on any I/O failure; the message names the path.
class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_csv(std::span<const SummaryRow> rows);
nlohmann::ordered_json to_json(const RunSummary& summary);
RunSummary summary_from_json(const nlohmann::ordered_json& doc);

void export_summary(const RunSummary& summary, ExportFormat format,
                    const std::filesystem::path& path);
RunSummary import_summary_json(const std::filesystem::path& path);
std::vector<SummaryRow> import_rows_csv(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace vanet
