#pragma once

// vanetsim subcommands. Each returns the process exit status:
//   0 success, 1 scenario validation failure, 2 runtime or I/O failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vanet/metrics.hpp"
#include "vanet/scenario.hpp"

namespace vanet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "VANETSIM_OUT_DIR";

struct RunOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<Scheme> scheme;
    std::vector<ExportFormat> formats{ExportFormat::Json, ExportFormat::Csv};
};

struct SweepOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    std::vector<std::uint64_t> seeds;
    std::vector<Scheme> schemes;  // empty: the scenario's own scheme
    std::vector<ExportFormat> formats{ExportFormat::Json, ExportFormat::Csv};
    unsigned jobs = 0;  // 0: hardware concurrency
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

/// "1,2,5-8" -> {1,2,5,6,7,8}. Throws std::invalid_argument.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// "second_proposal,packet_purse". Throws std::invalid_argument.
std::vector<Scheme> parse_scheme_list(std::string_view text);
ExportFormat parse_format(std::string_view text);

/// --out if given, else $VANETSIM_OUT_DIR, else ./vanetsim-out.
std::filesystem::path default_out_dir();

/// File name written for one format, e.g. "summary.json".
std::string summary_file_name(ExportFormat format);

/// Applies CLI overrides on top of a loaded scenario.
Scenario apply_overrides(Scenario scenario, std::optional<std::uint64_t> seed,
                         std::optional<Scheme> scheme);

}  // namespace vanet::cli
