#include "vanet/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "vanet/routing.hpp"
#include "vanet/scenario.hpp"

namespace vanet {

namespace {

constexpr const char* kCsvHeader =
    "packet_id,vehicle_id,stored_time,forward_count,effective_distance,contribution,reward,"
    "descendants\n";

double key_of(const SummaryRow& row, BinKey key)
{
    switch (key) {
    case BinKey::Time: return row.stored_time;
    case BinKey::Forwards: return static_cast<double>(row.forward_count);
    case BinKey::Distance: return row.effective_distance;
    }
    return 0.0;
}

std::vector<double> average_ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

nlohmann::ordered_json bins_json(const std::vector<RewardBin>& bins)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& b : bins) {
        arr.push_back({{"lower", b.lower}, {"mean_reward", b.mean_reward}, {"count", b.count}});
    }
    return arr;
}

std::vector<RewardBin> bins_from_json(const nlohmann::ordered_json& arr)
{
    std::vector<RewardBin> out;
    for (const auto& b : arr) {
        out.push_back({b.at("lower").get<double>(), b.at("mean_reward").get<double>(),
                       b.at("count").get<std::size_t>()});
    }
    return out;
}

}  // namespace

std::string format_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::vector<RewardBin> bin_rewards(std::span<const SummaryRow> rows, BinKey key, double bin_width)
{
    if (!(bin_width > 0.0)) throw ValidationError("bin width must be > 0");
    std::map<long long, std::pair<double, std::size_t>> acc;
    for (const auto& row : rows) {
        const auto idx = static_cast<long long>(std::floor(key_of(row, key) / bin_width));
        auto& [sum, n] = acc[idx];
        sum += row.reward;
        ++n;
    }
    std::vector<RewardBin> out;
    out.reserve(acc.size());
    for (const auto& [idx, sn] : acc) {
        out.push_back({static_cast<double>(idx) * bin_width, sn.first / static_cast<double>(sn.second),
                       sn.second});
    }
    return out;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

DescendantsCorrelation reward_vs_descendants(std::span<const SummaryRow> rows)
{
    DescendantsCorrelation out;
    std::vector<double> d;
    std::vector<double> r;
    for (const auto& row : rows) {
        out.points.emplace_back(row.descendants, row.reward);
        d.push_back(static_cast<double>(row.descendants));
        r.push_back(row.reward);
    }
    out.spearman = spearman(d, r);
    return out;
}

bool non_decreasing(std::span<const RewardBin> bins)
{
    for (std::size_t i = 1; i < bins.size(); ++i) {
        if (bins[i].mean_reward < bins[i - 1].mean_reward) return false;
    }
    return true;
}

bool non_increasing_after_first(std::span<const RewardBin> bins)
{
    for (std::size_t i = 2; i < bins.size(); ++i) {
        if (bins[i].mean_reward > bins[i - 1].mean_reward) return false;
    }
    return true;
}

RunSummary summarize(const SimulationTrace& trace)
{
    RunSummary s;
    s.scenario = to_json(trace.scenario);
    s.scenario_hash = scenario_hash(trace.scenario);
    s.scheme = trace.scenario.scheme;
    s.seed = trace.scenario.seed;

    for (const auto& pkt : trace.packets) {
        for (const auto& rec : pkt.records) {
            SummaryRow row;
            row.packet_id = rec.packet_id;
            row.vehicle_id = rec.vehicle_id;
            row.stored_time = rec.stored_time;
            row.forward_count = rec.forward_count;
            row.effective_distance = rec.effective_distance;
            row.contribution = rec.contribution;
            if (auto it = pkt.report.shares.find(rec.vehicle_id); it != pkt.report.shares.end()) {
                row.reward = it->second;
            }
            row.descendants = descendants(pkt.tree, rec.vehicle_id);
            s.rows.push_back(row);
        }
        PacketSummary ps;
        ps.packet_id = pkt.packet.id;
        ps.source = pkt.packet.source_id;
        ps.payer = pkt.report.payer;
        ps.created_at = pkt.packet.created_at;
        ps.settled_at = pkt.settled_at;
        ps.tree_nodes = pkt.tree.size();
        ps.budget = pkt.report.budget;
        ps.total_contribution = pkt.report.total_contribution;
        ps.total_paid = pkt.report.total_paid();
        ps.overspend = pkt.report.overspend;
        ps.refunded = pkt.report.refunded;
        ps.paid_hops = pkt.report.paid_hops;
        ps.unpaid_hops = pkt.report.unpaid_hops;
        ps.delivered = pkt.report.delivered;
        s.aggregates.packets.push_back(ps);
    }

    const auto& m = trace.scenario.metrics;
    s.aggregates.by_time = bin_rewards(s.rows, BinKey::Time, m.time_bin);
    s.aggregates.by_forwards = bin_rewards(s.rows, BinKey::Forwards, m.forward_bin);
    s.aggregates.by_distance = bin_rewards(s.rows, BinKey::Distance, m.distance_bin);
    s.aggregates.descendants_spearman = reward_vs_descendants(s.rows).spearman;
    return s;
}

std::string to_csv(std::span<const SummaryRow> rows)
{
    std::string out = kCsvHeader;
    for (const auto& r : rows) {
        out += std::to_string(raw(r.packet_id));
        out += ',';
        out += std::to_string(raw(r.vehicle_id));
        out += ',';
        out += format_double(r.stored_time);
        out += ',';
        out += std::to_string(r.forward_count);
        out += ',';
        out += format_double(r.effective_distance);
        out += ',';
        out += format_double(r.contribution);
        out += ',';
        out += format_double(r.reward);
        out += ',';
        out += std::to_string(r.descendants);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(const RunSummary& s)
{
    using oj = nlohmann::ordered_json;
    oj rows = oj::array();
    for (const auto& r : s.rows) {
        rows.push_back({
            {"packet_id", raw(r.packet_id)},
            {"vehicle_id", raw(r.vehicle_id)},
            {"stored_time", r.stored_time},
            {"forward_count", r.forward_count},
            {"effective_distance", r.effective_distance},
            {"contribution", r.contribution},
            {"reward", r.reward},
            {"descendants", r.descendants},
        });
    }
    oj packets = oj::array();
    for (const auto& p : s.aggregates.packets) {
        packets.push_back({
            {"packet_id", raw(p.packet_id)},
            {"source", raw(p.source)},
            {"payer", raw(p.payer)},
            {"created_at", p.created_at},
            {"settled_at", p.settled_at},
            {"tree_nodes", p.tree_nodes},
            {"budget", p.budget},
            {"total_contribution", p.total_contribution},
            {"total_paid", p.total_paid},
            {"overspend", p.overspend},
            {"refunded", p.refunded},
            {"paid_hops", p.paid_hops},
            {"unpaid_hops", p.unpaid_hops},
            {"delivered", p.delivered},
        });
    }
    oj out;
    out["schema_version"] = kSummarySchemaVersion;
    out["scenario"] = {
        {"hash", s.scenario_hash},
        {"scheme", std::string(to_string(s.scheme))},
        {"seed", s.seed},
        {"config", s.scenario},
    };
    out["rows"] = std::move(rows);
    const auto& a = s.aggregates;
    out["aggregates"] = {
        {"reward_by_time", bins_json(a.by_time)},
        {"reward_by_forwards", bins_json(a.by_forwards)},
        {"reward_by_distance", bins_json(a.by_distance)},
        {"descendants_spearman", a.descendants_spearman ? oj(*a.descendants_spearman) : oj(nullptr)},
        {"packets", std::move(packets)},
    };
    return out;
}

RunSummary summary_from_json(const nlohmann::ordered_json& doc)
{
    if (doc.at("schema_version").get<int>() != kSummarySchemaVersion) {
        throw ValidationError("unsupported summary schema_version");
    }
    RunSummary s;
    const auto& sc = doc.at("scenario");
    s.scenario_hash = sc.at("hash").get<std::string>();
    const auto scheme = parse_scheme(sc.at("scheme").get<std::string>());
    if (!scheme) throw ValidationError("summary names an unknown scheme");
    s.scheme = *scheme;
    s.seed = sc.at("seed").get<std::uint64_t>();
    s.scenario = sc.at("config");

    for (const auto& r : doc.at("rows")) {
        SummaryRow row;
        row.packet_id = PacketId{r.at("packet_id").get<std::uint32_t>()};
        row.vehicle_id = VehicleId{r.at("vehicle_id").get<std::uint32_t>()};
        row.stored_time = r.at("stored_time").get<double>();
        row.forward_count = r.at("forward_count").get<int>();
        row.effective_distance = r.at("effective_distance").get<double>();
        row.contribution = r.at("contribution").get<double>();
        row.reward = r.at("reward").get<double>();
        row.descendants = r.at("descendants").get<int>();
        s.rows.push_back(row);
    }
    const auto& a = doc.at("aggregates");
    s.aggregates.by_time = bins_from_json(a.at("reward_by_time"));
    s.aggregates.by_forwards = bins_from_json(a.at("reward_by_forwards"));
    s.aggregates.by_distance = bins_from_json(a.at("reward_by_distance"));
    if (!a.at("descendants_spearman").is_null()) {
        s.aggregates.descendants_spearman = a.at("descendants_spearman").get<double>();
    }
    for (const auto& p : a.at("packets")) {
        PacketSummary ps;
        ps.packet_id = PacketId{p.at("packet_id").get<std::uint32_t>()};
        ps.source = VehicleId{p.at("source").get<std::uint32_t>()};
        ps.payer = VehicleId{p.at("payer").get<std::uint32_t>()};
        ps.created_at = p.at("created_at").get<double>();
        ps.settled_at = p.at("settled_at").get<double>();
        ps.tree_nodes = p.at("tree_nodes").get<std::size_t>();
        ps.budget = p.at("budget").get<double>();
        ps.total_contribution = p.at("total_contribution").get<double>();
        ps.total_paid = p.at("total_paid").get<double>();
        ps.overspend = p.at("overspend").get<double>();
        ps.refunded = p.at("refunded").get<double>();
        ps.paid_hops = p.at("paid_hops").get<std::size_t>();
        ps.unpaid_hops = p.at("unpaid_hops").get<std::size_t>();
        ps.delivered = p.at("delivered").get<bool>();
        s.aggregates.packets.push_back(ps);
    }
    return s;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw ExportError(path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ExportError(path.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw ExportError(path.string() + ": write failed");
}

void export_summary(const RunSummary& summary, ExportFormat format, const std::filesystem::path& path)
{
    if (format == ExportFormat::Csv) {
        write_file(path, to_csv(summary.rows));
    } else {
        write_file(path, to_json(summary).dump(2) + "\n");
    }
}

RunSummary import_summary_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExportError(path.string() + ": cannot open for reading");
    try {
        return summary_from_json(nlohmann::ordered_json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ExportError(path.string() + ": " + e.what());
    }
}

std::vector<SummaryRow> import_rows_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExportError(path.string() + ": cannot open for reading");
    std::string line;
    if (!std::getline(in, line) || line + "\n" != kCsvHeader) {
        throw ExportError(path.string() + ": missing or unexpected CSV header");
    }
    std::vector<SummaryRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 8) {
            throw ExportError(path.string() + ":" + std::to_string(lineno) + ": expected 8 columns");
        }
        try {
            SummaryRow r;
            r.packet_id = PacketId{static_cast<std::uint32_t>(std::stoul(f[0]))};
            r.vehicle_id = VehicleId{static_cast<std::uint32_t>(std::stoul(f[1]))};
            r.stored_time = std::stod(f[2]);
            r.forward_count = std::stoi(f[3]);
            r.effective_distance = std::stod(f[4]);
            r.contribution = std::stod(f[5]);
            r.reward = std::stod(f[6]);
            r.descendants = std::stoi(f[7]);
            rows.push_back(r);
        } catch (const std::exception&) {
            throw ExportError(path.string() + ":" + std::to_string(lineno) + ": malformed value");
        }
    }
    return rows;
}

}  // namespace vanet
