#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <json.hpp>
#include <mutex>
#include <ostream>
#include <thread>

#include "banditnav/cli.hpp"

namespace banditnav::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t parse_u64(std::string_view text, std::string_view whole) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw CliError(kExitUsage, "--seeds: cannot parse '" + std::string(whole) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return parts;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> seeds;
    for (std::string_view part : split(text, ',')) {
        if (const std::size_t dots = part.find(".."); dots != std::string_view::npos) {
            const std::uint64_t a = parse_u64(part.substr(0, dots), text);
            const std::uint64_t b = parse_u64(part.substr(dots + 2), text);
            if (b < a) throw CliError(kExitUsage, "--seeds: empty range '" + std::string(part) + "'");
            for (std::uint64_t s = a;; ++s) {
                seeds.push_back(s);
                if (s == b) break;
            }
        } else {
            seeds.push_back(parse_u64(part, text));
        }
    }
    return seeds;
}

std::vector<Strategy> parse_strategy_list(std::string_view text) {
    std::vector<Strategy> out;
    for (std::string_view name : split(text, ',')) {
        const auto s = parse_strategy(name);
        if (!s) {
            throw CliError(kExitUsage, "--strategies: unknown strategy '" + std::string(name) +
                                           "' (expected ifbe1, ifbe2, closest or random)");
        }
        out.push_back(*s);
    }
    return out;
}

std::string encode_episode_record(const EpisodeRecord& r) {
    json traj = json::array();
    for (const Pose& p : r.trajectory) traj.push_back({p.position.x, p.position.y, p.heading});
    json result = {{"success", r.result.success},
                   {"steps_used", r.result.steps_used},
                   {"path_length", r.result.path_length},
                   {"spl_term", r.result.spl_term},
                   {"failure_reason", r.result.failure_reason
                                          ? json(to_string(*r.result.failure_reason))
                                          : json(nullptr)}};
    json j = {{"strategy", r.strategy},
              {"seed", r.seed},
              {"result", result},
              {"shortest_path_len", r.shortest_path_len},
              {"grid",
               {{"width", r.grid.width}, {"height", r.grid.height}, {"resolution", r.grid.resolution},
                {"origin", {r.grid.origin.x, r.grid.origin.y}}}},
              {"trajectory", traj},
              {"snapshot", r.snapshot}};
    if (!r.sensor_error.empty()) j["sensor_error"] = r.sensor_error;
    return j.dump(1);
}

EpisodeRecord decode_episode_record(std::string_view text) {
    try {
        const json j = json::parse(text);
        EpisodeRecord r;
        r.strategy = j.at("strategy").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const json& res = j.at("result");
        r.result.success = res.at("success").get<bool>();
        r.result.steps_used = res.at("steps_used").get<int>();
        r.result.path_length = res.at("path_length").get<double>();
        r.result.spl_term = res.at("spl_term").get<double>();
        if (const json& f = res.at("failure_reason"); !f.is_null()) {
            r.result.failure_reason = parse_failure_reason(f.get<std::string>());
            if (!r.result.failure_reason) throw Error("unknown failure_reason");
        }
        r.shortest_path_len = j.at("shortest_path_len").get<double>();
        const json& g = j.at("grid");
        r.grid.width = g.at("width").get<int>();
        r.grid.height = g.at("height").get<int>();
        r.grid.resolution = g.at("resolution").get<double>();
        r.grid.origin = {g.at("origin").at(0).get<double>(), g.at("origin").at(1).get<double>()};
        for (const json& p : j.at("trajectory")) {
            r.trajectory.push_back({{p.at(0).get<double>(), p.at(1).get<double>()}, p.at(2).get<double>()});
        }
        r.snapshot = j.at("snapshot").get<std::string>();
        if (j.contains("sensor_error")) r.sensor_error = j["sensor_error"].get<std::string>();
        return r;
    } catch (const std::exception& e) {
        throw Error(std::string("malformed episode record: ") + e.what());
    }
}

void cmd_run(const RunManifest& m, std::ostream& log) {
    if (m.seeds.empty()) throw CliError(kExitUsage, "--seeds: seed list is empty");
    if (m.strategies.empty()) throw CliError(kExitUsage, "--strategies: strategy list is empty");
    if (m.jobs < 1) throw CliError(kExitUsage, "--jobs: must be >= 1");
    RunConfig config;
    try {
        config = load_run_config(m.config_path);
    } catch (const ConfigError& e) {
        throw CliError(kExitUsage, e.what());
    } catch (const Error& e) {
        throw CliError(kExitIo, e.what());
    }

    std::error_code ec;
    fs::create_directories(m.out_dir / "episodes", ec);
    if (!ec) fs::create_directories(m.out_dir / "maps", ec);
    if (ec) throw CliError(kExitIo, "cannot create '" + m.out_dir.string() + "': " + ec.message());

    struct Task {
        Strategy strategy;
        std::uint64_t seed;
        EpisodeResult result;
        double shortest = 0.0;
    };
    std::vector<Task> tasks;
    for (Strategy s : m.strategies) {
        for (std::uint64_t seed : m.seeds) tasks.push_back({s, seed, {}, 0.0});
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            Task& t = tasks[i];
            try {
                const Environment env = generate_environment(config.environment, t.seed);
                const EpisodeConfig ec = episode_config_for(config, t.strategy, t.seed);
                const EpisodeOutcome outcome = run_episode(env, ec);
                const std::string stem = std::string(to_string(t.strategy)) + "-" + std::to_string(t.seed);
                EpisodeRecord rec{std::string(to_string(t.strategy)), t.seed, outcome.result,
                                  env.shortest_path_len, env.occ_truth.spec(), outcome.trajectory,
                                  "maps/" + stem + ".gsmap", outcome.sensor_error};
                try {
                    save_snapshot((m.out_dir / rec.snapshot).string(), outcome.occupancy, outcome.semantic);
                } catch (const Error& e) {
                    throw CliError(kExitIo, e.what());
                }
                const fs::path record_path = m.out_dir / "episodes" / (stem + ".json");
                std::ofstream out(record_path, std::ios::binary);
                out << encode_episode_record(rec) << '\n';
                if (!out) throw CliError(kExitIo, "cannot write '" + record_path.string() + "'");
                t.result = outcome.result;
                t.shortest = env.shortest_path_len;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const int threads = std::min<int>(m.jobs, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    MetricsTable table;
    for (Strategy s : m.strategies) {
        std::map<std::uint64_t, const Task*> by_seed;
        for (const Task& t : tasks) {
            if (t.strategy == s) by_seed[t.seed] = &t;
        }
        std::vector<EpisodeResult> results;
        std::vector<double> shortest;
        for (const auto& [seed, t] : by_seed) {
            results.push_back(t->result);
            shortest.push_back(t->shortest);
        }
        table[std::string(to_string(s))] = compute_metrics(results, shortest);
    }
    const fs::path csv = m.out_dir / "metrics.csv";
    std::ofstream out(csv, std::ios::binary);
    out << format_metrics_csv(table);
    if (!out) throw CliError(kExitIo, "cannot write '" + csv.string() + "'");
    log << format_metrics_table(table);
}

}  // namespace banditnav::cli
