#pragma once
// Command-line surface: batch runs, map rendering and metrics reports.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "banditnav/config.hpp"
#include "banditnav/metrics.hpp"
#include "banditnav/snapshot.hpp"

namespace banditnav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;  // bad flags or configuration
inline constexpr int kExitIo = 3;     // unreadable input, unwritable output

/// An error carrying the process exit code it maps to.
class CliError : public Error {
public:
    CliError(int exit_code, const std::string& what) : Error(what), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

struct RunManifest {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path out_dir;
    std::vector<Strategy> strategies;
    int jobs = 1;
};

/// "a..b" (inclusive), "a", or a comma list of either.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// Comma-separated strategy names; throws CliError(kExitUsage) naming the field.
std::vector<Strategy> parse_strategy_list(std::string_view text);

/// Per-episode artifact written to <out>/episodes/<strategy>-<seed>.json.
struct EpisodeRecord {
    std::string strategy;
    std::uint64_t seed = 0;
    EpisodeResult result;
    double shortest_path_len = 0.0;
    GridSpec grid;
    std::vector<Pose> trajectory;
    std::string snapshot;  // relative to the run directory
    std::string sensor_error;
};

std::string encode_episode_record(const EpisodeRecord& record);
EpisodeRecord decode_episode_record(std::string_view json_text);

/// Runs every (seed, strategy) episode and writes records, snapshots and
/// metrics.csv. Failed episodes are results, not errors.
void cmd_run(const RunManifest& manifest, std::ostream& log);

enum class Layer { occupancy, relevance_mean, relevance_var, trajectory };
std::string_view to_string(Layer layer);
std::optional<Layer> parse_layer(std::string_view name);

/// 8-bit raster, 1 (gray) or 3 (RGB) channels, top row first.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * channels]; }
};

/// Binary PGM (1 channel) or PPM (3 channels).
std::vector<std::uint8_t> encode_pnm(const Image& image);

/// Scalar layers as grayscale; grid row 0 is the bottom image row.
Image render_layer(const MapSnapshot& snapshot, Layer layer);
/// Occupancy background with the trajectory polyline drawn over it.
Image render_trajectory(const MapSnapshot& snapshot, const std::vector<Pose>& trajectory);

/// `in` is a snapshot (.gsmap) or an episode record (.json).
void cmd_render(const std::filesystem::path& in, Layer layer, const std::filesystem::path& out);

using MetricsTable = std::map<std::string, Metrics>;

/// Reads every episode record under `dir` (or `dir`/episodes).
MetricsTable collect_metrics(const std::filesystem::path& dir);
std::string format_metrics_csv(const MetricsTable& table);
std::string format_metrics_table(const MetricsTable& table);

/// Prints the table and writes <dir>/report.csv.
void cmd_report(const std::filesystem::path& dir, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace banditnav::cli
