#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vanet/simulation.hpp"

namespace vanet::cli {

namespace {

struct RunResult {
    Scheme scheme{};
    std::uint64_t seed = 0;
    std::optional<RunSummary> summary;
    std::string error;
};

void print_violations(const ScenarioError& e, std::ostream& err)
{
    err << "invalid scenario:\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
}

std::optional<Scenario> load(const std::filesystem::path& path, std::ostream& err)
{
    try {
        return load_scenario(path);
    } catch (const ScenarioError& e) {
        print_violations(e, err);
    }
    return std::nullopt;
}

std::string one_line(const RunSummary& s)
{
    std::size_t reached = 0;
    double contribution = 0.0;
    double paid = 0.0;
    double overspend = 0.0;
    for (const auto& p : s.aggregates.packets) {
        reached += p.tree_nodes > 0 ? p.tree_nodes - 1 : 0;
        contribution += p.total_contribution;
        paid += p.total_paid;
        overspend += p.overspend;
    }
    std::ostringstream os;
    os << "scheme=" << to_string(s.scheme) << " seed=" << s.seed << " reached=" << reached
       << " C=" << format_double(contribution) << " sum_R=" << format_double(paid)
       << " overspend=" << format_double(overspend);
    return os.str();
}

void write_summary(const RunSummary& summary, const std::vector<ExportFormat>& formats,
                   const std::filesystem::path& dir)
{
    for (auto f : formats) export_summary(summary, f, dir / summary_file_name(f));
}

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

Moments moments(const std::vector<double>& v)
{
    Moments m;
    m.n = v.size();
    if (v.empty()) return m;
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return m;
}

nlohmann::ordered_json moments_json(const std::vector<double>& v)
{
    const auto m = moments(v);
    return {{"n", m.n}, {"mean", m.mean}, {"stddev", m.stddev}};
}

nlohmann::ordered_json bin_moments(const std::vector<const RunSummary*>& runs,
                                   const std::vector<RewardBin> Aggregates::*member)
{
    std::map<double, std::vector<double>> per_bin;
    for (const auto* r : runs) {
        for (const auto& b : r->aggregates.*member) per_bin[b.lower].push_back(b.mean_reward);
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [lower, values] : per_bin) {
        auto entry = moments_json(values);
        entry["lower"] = lower;
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::string sweep_runs_csv(const std::vector<RunResult>& results)
{
    std::string out =
        "scheme,seed,status,scenario_hash,reached,total_contribution,total_paid,overspend,"
        "unpaid_hops,descendants_spearman,forward_bins,forward_trend,distance_bins,distance_trend\n";
    for (const auto& r : results) {
        out += std::string(to_string(r.scheme)) + "," + std::to_string(r.seed) + ",";
        if (!r.summary) {
            out += "failed,,,,,,,,,,,\n";
            continue;
        }
        const auto& s = *r.summary;
        std::size_t reached = 0;
        std::size_t unpaid = 0;
        double c = 0.0;
        double paid = 0.0;
        double over = 0.0;
        for (const auto& p : s.aggregates.packets) {
            reached += p.tree_nodes - 1;
            unpaid += p.unpaid_hops;
            c += p.total_contribution;
            paid += p.total_paid;
            over += p.overspend;
        }
        const auto& a = s.aggregates;
        out += "ok," + s.scenario_hash + "," + std::to_string(reached) + "," + format_double(c) + "," +
               format_double(paid) + "," + format_double(over) + "," + std::to_string(unpaid) + "," +
               (a.descendants_spearman ? format_double(*a.descendants_spearman) : std::string()) +
               "," + std::to_string(a.by_forwards.size()) + "," +
               (non_decreasing(a.by_forwards) ? "1" : "0") + "," +
               std::to_string(a.by_distance.size()) + "," +
               (non_increasing_after_first(a.by_distance) ? "1" : "0") + "\n";
    }
    return out;
}

nlohmann::ordered_json sweep_aggregate(const std::vector<RunResult>& results,
                                       const std::vector<Scheme>& schemes)
{
    auto per_scheme = nlohmann::ordered_json::array();
    for (auto scheme : schemes) {
        std::vector<const RunSummary*> runs;
        std::size_t failed = 0;
        for (const auto& r : results) {
            if (r.scheme != scheme) continue;
            if (r.summary) {
                runs.push_back(&*r.summary);
            } else {
                ++failed;
            }
        }
        std::vector<double> reached, contribution, paid, overspend, rho;
        for (const auto* s : runs) {
            double n = 0, c = 0, p = 0, o = 0;
            for (const auto& pk : s->aggregates.packets) {
                n += static_cast<double>(pk.tree_nodes - 1);
                c += pk.total_contribution;
                p += pk.total_paid;
                o += pk.overspend;
            }
            reached.push_back(n);
            contribution.push_back(c);
            paid.push_back(p);
            overspend.push_back(o);
            if (s->aggregates.descendants_spearman) rho.push_back(*s->aggregates.descendants_spearman);
        }
        per_scheme.push_back({
            {"scheme", std::string(to_string(scheme))},
            {"runs", runs.size()},
            {"failed", failed},
            {"reached", moments_json(reached)},
            {"total_contribution", moments_json(contribution)},
            {"total_paid", moments_json(paid)},
            {"overspend", moments_json(overspend)},
            {"descendants_spearman", moments_json(rho)},
            {"reward_by_time", bin_moments(runs, &Aggregates::by_time)},
            {"reward_by_forwards", bin_moments(runs, &Aggregates::by_forwards)},
            {"reward_by_distance", bin_moments(runs, &Aggregates::by_distance)},
        });
    }
    nlohmann::ordered_json out;
    out["schema_version"] = kSummarySchemaVersion;
    out["schemes"] = std::move(per_scheme);
    return out;
}

}  // namespace

std::string summary_file_name(ExportFormat format)
{
    return format == ExportFormat::Csv ? "summary.csv" : "summary.json";
}

std::filesystem::path default_out_dir()
{
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
    return "vanetsim-out";
}

Scenario apply_overrides(Scenario scenario, std::optional<std::uint64_t> seed,
                         std::optional<Scheme> scheme)
{
    if (seed) scenario.seed = *seed;
    if (scheme) scenario.scheme = *scheme;
    return scenario;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text)
{
    std::vector<std::uint64_t> out;
    std::string item;
    std::stringstream ss{std::string(text)};
    const auto to_u64 = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("bad seed \"" + s + "\"");
        }
        return static_cast<std::uint64_t>(std::stoull(s));
    };
    while (std::getline(ss, item, ',')) {
        if (const auto dash = item.find('-'); dash != std::string::npos) {
            const auto lo = to_u64(item.substr(0, dash));
            const auto hi = to_u64(item.substr(dash + 1));
            if (hi < lo) throw std::invalid_argument("bad seed range \"" + item + "\"");
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        } else {
            out.push_back(to_u64(item));
        }
    }
    if (out.empty()) throw std::invalid_argument("empty seed list");
    return out;
}

std::vector<Scheme> parse_scheme_list(std::string_view text)
{
    std::vector<Scheme> out;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ',')) {
        auto s = parse_scheme(item);
        if (!s) throw std::invalid_argument("unknown scheme \"" + item + "\"");
        if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
    }
    if (out.empty()) throw std::invalid_argument("empty scheme list");
    return out;
}

ExportFormat parse_format(std::string_view text)
{
    if (text == "csv") return ExportFormat::Csv;
    if (text == "json") return ExportFormat::Json;
    throw std::invalid_argument("unknown format \"" + std::string(text) + "\" (csv, json)");
}

int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err)
{
    auto s = load(scenario, err);
    if (!s) return kExitValidation;
    out << scenario.string() << ": ok (" << scenario_hash(*s) << ")\n";
    return kExitOk;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err)
{
    auto base = load(opts.scenario, err);
    if (!base) return kExitValidation;
    const Scenario scenario = apply_overrides(*base, opts.seed, opts.scheme);
    if (auto errs = validate(scenario); !errs.empty()) {
        print_violations(ScenarioError(std::move(errs)), err);
        return kExitValidation;
    }
    try {
        const auto summary = summarize(run(scenario));
        write_summary(summary, opts.formats, opts.out_dir);
        out << one_line(summary) << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err)
{
    auto base = load(opts.scenario, err);
    if (!base) return kExitValidation;
    const std::vector<Scheme> schemes =
        opts.schemes.empty() ? std::vector<Scheme>{base->scheme} : opts.schemes;
    const std::vector<std::uint64_t> seeds =
        opts.seeds.empty() ? std::vector<std::uint64_t>{base->seed} : opts.seeds;

    // Scheme-specific requirements (e.g. a destination for packet_trade) are
    // checked up front so that a bad sweep fails before any run starts.
    for (auto scheme : schemes) {
        if (auto errs = validate(apply_overrides(*base, seeds.front(), scheme)); !errs.empty()) {
            err << "scheme " << to_string(scheme) << ": ";
            print_violations(ScenarioError(std::move(errs)), err);
            return kExitValidation;
        }
    }

    std::vector<RunResult> results;
    for (auto scheme : schemes) {
        for (auto seed : seeds) results.push_back({scheme, seed, std::nullopt, {}});
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
            auto& r = results[i];
            try {
                const Scenario s = apply_overrides(*base, r.seed, r.scheme);
                RunSummary summary = summarize(run(s));
                write_summary(summary, opts.formats,
                              opts.out_dir / std::string(to_string(r.scheme)) /
                                  ("seed-" + std::to_string(r.seed)));
                r.summary = std::move(summary);
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
    };
    unsigned jobs = opts.jobs != 0 ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(results.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    std::size_t failures = 0;
    for (const auto& r : results) {
        if (r.summary) {
            out << one_line(*r.summary) << "\n";
        } else {
            ++failures;
            err << "run scheme=" << to_string(r.scheme) << " seed=" << r.seed << " failed: " << r.error
                << "\n";
        }
    }
    try {
        write_file(opts.out_dir / "sweep_runs.csv", sweep_runs_csv(results));
        write_file(opts.out_dir / "sweep_aggregate.json", sweep_aggregate(results, schemes).dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    out << "sweep: " << results.size() - failures << "/" << results.size() << " runs ok\n";
    return failures == 0 ? kExitOk : kExitRuntime;
}

}  // namespace vanet::cli
