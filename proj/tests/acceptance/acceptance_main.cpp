// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "vanet/incentives.hpp"
#include "vanet/metrics.hpp"
#include "vanet/settlement.hpp"
#include "vanet/simulation.hpp"

using namespace vanet;
namespace fs = std::filesystem;

namespace {

const fs::path kPaper = fs::path(VANET_SCENARIO_DIR) / "paper.scenario";

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int number;
    const char* title;
    double time_limit_s;  // 0: none
    std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome formula_correctness()
{
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double T = 1.0 + 599.0 * u(rng);
        const double D = 1.0 + 1999.0 * u(rng);
        const double t = 2.0 * T * u(rng);
        const double d = D * u(rng);
        // Scales stay where every term is a normal double (d/ds <= 200).
        const double ts = 1.0 + 299.0 * u(rng);
        const double ds = 10.0 + 990.0 * u(rng);
        const int f = static_cast<int>(50 * u(rng));
        const double a1 = u(rng);
        const double a3 = (1.0 - a1) * u(rng);
        const double a2 = 1.0 - a1 - a3;

        worst = std::max(worst, oracle::rel_error(time_term(t, T, ts), oracle::time_term(t, T, ts)));
        worst = std::max(worst, oracle::rel_error(distance_term(d, D, ds), oracle::distance_term(d, D, ds)));
        const double c = contribution_second(t, T, f, d, D, WeightSet(a1, a2, a3), ts, ds);
        worst = std::max(worst,
                         oracle::rel_error(c, oracle::contribution_second(t, T, f, d, D, a1, a2, a3, ts, ds)));
    }
    return {worst <= 1e-12, fmt("1000 points, worst relative error %.3g (limit 1e-12)", worst)};
}

Outcome budget_conservation()
{
    std::mt19937_64 rng(2002);
    std::uniform_int_distribution<std::uint32_t> nodes(2, 50);
    std::uniform_real_distribution<double> contrib(0.0, 100.0);
    std::uniform_real_distribution<double> budget(0.01, 10'000.0);
    double worst = 0.0;
    int overspends = 0;
    int zero_c = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::uint32_t n = nodes(rng);
        Packet p;
        p.id = PacketId{static_cast<std::uint32_t>(i)};
        p.source_id = VehicleId{0};
        p.reward_budget = budget(rng);
        ForwardingTree tree(p.id, p.source_id);
        std::vector<ContributionRecord> recs;
        std::uniform_int_distribution<std::uint32_t> parent_pick(0, 0);
        for (std::uint32_t v = 1; v < n; ++v) {
            parent_pick = std::uniform_int_distribution<std::uint32_t>(0, v - 1);
            tree.add_link({VehicleId{parent_pick(rng)}, VehicleId{v}, static_cast<double>(v), {}, {}, 0});
            ContributionRecord r;
            r.vehicle_id = VehicleId{v};
            r.packet_id = p.id;
            r.contribution = contrib(rng);
            recs.push_back(r);
        }
        const auto rep = settle_proportional(p, tree, recs);
        if (rep.overspend != 0.0 || rep.total_paid() > p.reward_budget * (1 + 1e-9)) ++overspends;
        if (rep.total_contribution == 0.0) {
            ++zero_c;
            continue;
        }
        worst = std::max(worst, std::abs(rep.total_paid() - p.reward_budget) / p.reward_budget);
    }
    return {worst <= 1e-9 && overspends == 0,
            fmt("1000 settlements, worst |sum R_i - R|/R %.3g (limit 1e-9), overspend instances %d, "
                "C=0 instances %d",
                worst, overspends, zero_c)};
}

Outcome saturation_and_cutoff()
{
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr int kCases = 10'000;
    int time_bad = 0;
    int dist_bad = 0;
    int fwd_bad = 0;
    double worst_step = 0.0;
    for (int i = 0; i < kCases; ++i) {
        const double T = 0.1 + 1000.0 * u(rng);
        const double ts = 0.1 + 300.0 * u(rng);
        const double t = T * (1.0 + 10.0 * u(rng));
        if (time_term(t, T, ts) != time_term(T, T, ts)) ++time_bad;

        const double D = 0.1 + 2000.0 * u(rng);
        const double ds = 0.1 + 500.0 * u(rng);
        const double d = std::nextafter(D, 1e300) + D * 5.0 * u(rng);
        if (distance_term(d, D, ds) != 0.0) ++dist_bad;

        const double a1 = u(rng) * 0.99;
        const double a3 = (1.0 - a1) * u(rng) * 0.99;
        const WeightSet w(a1, 1.0 - a1 - a3, a3);
        const int f = static_cast<int>(1000 * u(rng));
        const double tt = 2.0 * T * u(rng);
        const double dd = 2.0 * D * u(rng);
        const double c0 = contribution_second(tt, T, f, dd, D, w, ts, ds);
        const double c1 = contribution_second(tt, T, f + 1, dd, D, w, ts, ds);
        const double err = std::abs((c1 - c0) - w.alpha2());
        worst_step = std::max(worst_step, err / std::max(1.0, std::abs(c1)));
        if (!(c1 > c0) || err > 1e-12 * std::max(1.0, std::abs(c1))) ++fwd_bad;
    }
    return {time_bad == 0 && dist_bad == 0 && fwd_bad == 0,
            fmt("%d cases each: time-term changes past T %d, distance-term nonzero past D %d, "
                "forward step off alpha2 %d (worst %.3g relative)",
                kCases, time_bad, dist_bad, fwd_bad, worst_step)};
}

Outcome contact_equivalence()
{
    std::size_t ticks = 0;
    std::size_t mismatches = 0;
    std::size_t pairs = 0;
    int max_nodes = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Scenario s;
        s.seed = seed;
        s.mobility.node_count = 10 + static_cast<int>((seed * 37) % 191);  // 10..200
        if (seed == 50) s.mobility.node_count = 200;
        max_nodes = std::max(max_nodes, s.mobility.node_count);
        s.mobility.arena_width = s.mobility.arena_height = 800;
        s.engine.radio_range = 50.0 + static_cast<double>(seed % 4) * 25.0;
        s.engine.duration = 300;
        s.packet.deadline = 100;
        run(s, [&](double, std::span<const Vehicle> vs, std::span<const Encounter> es) {
            ++ticks;
            std::set<std::pair<std::uint32_t, std::uint32_t>> got;
            for (const auto& e : es) got.emplace(raw(e.a_id), raw(e.b_id));
            const auto want = oracle::contact_pairs({vs.begin(), vs.end()}, s.engine.radio_range);
            pairs += want.size();
            if (got != want || got.size() != es.size()) ++mismatches;
        });
    }
    return {mismatches == 0, fmt("50 runs (up to %d nodes), %zu ticks, %zu contacts, %zu mismatching ticks",
                                 max_nodes, ticks, pairs, mismatches)};
}

Outcome paper_trends()
{
    const auto base = load_scenario(kPaper);
    int a_eligible = 0;
    int a_ok = 0;
    int b_eligible = 0;
    int b_ok = 0;
    int c_eligible = 0;
    int c_ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto s = base;
        s.seed = seed;
        const auto summary = summarize(run(s));
        const auto& agg = summary.aggregates;
        if (agg.by_forwards.size() >= 3) {
            ++a_eligible;
            if (non_decreasing(agg.by_forwards)) ++a_ok;
        }
        if (agg.by_distance.size() >= 3) {
            ++b_eligible;
            if (non_increasing_after_first(agg.by_distance)) ++b_ok;
        }
        std::size_t nodes = 0;
        for (const auto& p : agg.packets) nodes = std::max(nodes, p.tree_nodes);
        if (nodes >= 4) {
            ++c_eligible;
            if (agg.descendants_spearman && *agg.descendants_spearman > 0.0) ++c_ok;
        }
    }
    const auto pct = [](int k, int n) { return n == 0 ? 0.0 : 100.0 * k / n; };
    const bool a = a_eligible > 0 && pct(a_ok, a_eligible) >= 90.0;
    const bool b = b_eligible > 0 && pct(b_ok, b_eligible) >= 80.0;
    const bool c = c_eligible > 0 && pct(c_ok, c_eligible) >= 90.0;
    return {a && b && c,
            fmt("100 runs: (a) forwards non-decreasing %d/%d = %.1f%% (need 90%%) %s; "
                "(b) distance non-increasing beyond first %d/%d = %.1f%% (need 80%%) %s; "
                "(c) spearman(reward, descendants) > 0 %d/%d = %.1f%% (need 90%%) %s",
                a_ok, a_eligible, pct(a_ok, a_eligible), a ? "ok" : "FAIL", b_ok, b_eligible,
                pct(b_ok, b_eligible), b ? "ok" : "FAIL", c_ok, c_eligible, pct(c_ok, c_eligible),
                c ? "ok" : "FAIL")};
}

Outcome baseline_pathologies()
{
    std::vector<std::string> problems;

    // Packet Purse: 20 vehicles packed into range of each other, purse pays 4 hops.
    Scenario purse;
    purse.seed = 6;
    purse.scheme = Scheme::PacketPurse;
    purse.mobility.node_count = 20;
    purse.mobility.arena_width = purse.mobility.arena_height = 300;
    purse.engine.duration = 120;
    purse.packet.deadline = 60;
    purse.packet.source = VehicleId{0};
    purse.per_hop_price = purse.packet.reward_budget / 4;
    const auto limited = run(purse);
    auto unconstrained_cfg = purse;
    unconstrained_cfg.per_hop_price = 0.0;
    const auto unconstrained = run(unconstrained_cfg);
    const auto& lp = limited.packets.at(0);
    const auto& up = unconstrained.packets.at(0);
    const std::size_t unconstrained_links = up.tree.links().size();
    if (!(lp.report.overspend > 0.0)) problems.push_back("purse shortfall is 0");
    if (lp.tree.links().size() > 4) problems.push_back("purse tree grew past budget/price");
    if (!(lp.tree.links().size() < unconstrained_links)) problems.push_back("purse did not stop propagation");

    // Packet Trade: the source is never debited, whatever it sprays.
    double worst_debit = 0.0;
    for (int count : {1, 10, 50, 100}) {
        Scenario trade;
        trade.seed = 6;
        trade.scheme = Scheme::PacketTrade;
        trade.mobility.node_count = 20;
        trade.mobility.arena_width = trade.mobility.arena_height = 400;
        trade.engine.duration = 600;
        trade.packet.deadline = 60;
        trade.packet.source = VehicleId{0};
        trade.packet.destination = VehicleId{7};
        trade.packet.count = count;
        trade.packet.interval = count > 1 ? 500.0 / (count - 1) : 0.0;
        trade.initial_credit = 1000;
        const auto trace = run(trade);
        double debit = 0.0;
        for (const auto& pkt : trace.packets) {
            if (pkt.report.payer == VehicleId{0}) debit += pkt.report.total_paid();
        }
        worst_debit = std::max(worst_debit, debit);
    }
    if (worst_debit != 0.0) problems.push_back("trade debited the source");

    std::string detail = fmt("purse: links %zu vs %zu unconstrained, shortfall %.4g, refused %zu; "
                             "trade: source debit %.4g over 1/10/50/100 packets",
                             lp.tree.links().size(), unconstrained_links, lp.report.overspend,
                             lp.refused_hops, worst_debit);
    for (const auto& p : problems) detail += "; " + p;
    return {problems.empty(), detail};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const auto dir = fs::temp_directory_path() / "vanet-acceptance" / "determinism";
    fs::remove_all(dir);
    std::ostringstream out;
    std::ostringstream err;
    const int r1 = cli::cmd_run({kPaper, dir / "a", 17, {}}, out, err);
    const int r2 = cli::cmd_run({kPaper, dir / "b", 17, {}}, out, err);
    if (r1 != cli::kExitOk || r2 != cli::kExitOk) return {false, "cmd_run failed: " + err.str()};
    bool same = true;
    std::size_t bytes = 0;
    for (const char* name : {"summary.json", "summary.csv"}) {
        const auto a = slurp(dir / "a" / name);
        const auto b = slurp(dir / "b" / name);
        bytes += a.size();
        same = same && !a.empty() && a == b;
    }
    return {same, fmt("two runs with seed 17, %zu bytes compared, %s", bytes,
                      same ? "byte-identical" : "files differ")};
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "formula correctness", 1.0, formula_correctness},
        {2, "budget conservation", 5.0, budget_conservation},
        {3, "saturation and cutoff invariants", 0.0, saturation_and_cutoff},
        {4, "contact engine equivalence", 30.0, contact_equivalence},
        {5, "paper scenario trends", 120.0, paper_trends},
        {6, "baseline pathologies", 0.0, baseline_pathologies},
        {7, "determinism", 0.0, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
            o.ok = false;
            o.detail += fmt("; over time limit %.0f s", c.time_limit_s);
        }
        if (!o.ok) ++failed;
        std::printf("[%s] criterion %d: %s (%.2f s) %s\n", o.ok ? "PASS" : "FAIL", c.number, c.title,
                    secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
