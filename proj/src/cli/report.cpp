#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "banditnav/cli.hpp"

namespace banditnav::cli {

namespace fs = std::filesystem;

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

MetricsTable collect_metrics(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw CliError(kExitIo, "results directory '" + dir.string() + "' does not exist");
    }
    const fs::path episodes = fs::is_directory(dir / "episodes", ec) ? dir / "episodes" : dir;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(episodes, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw CliError(kExitIo, "cannot list '" + episodes.string() + "': " + ec.message());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw CliError(kExitIo, "no episode records in '" + episodes.string() + "'");

    // Records are summed in seed order so the figures match the ones cmd_run wrote.
    std::map<std::string, std::map<std::uint64_t, EpisodeRecord>> groups;
    for (const fs::path& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        if (!in) throw CliError(kExitIo, "cannot read '" + f.string() + "'");
        EpisodeRecord rec;
        try {
            rec = decode_episode_record(buf.str());
        } catch (const Error& e) {
            throw CliError(kExitIo, "'" + f.string() + "': " + e.what());
        }
        const std::uint64_t seed = rec.seed;
        groups[rec.strategy][seed] = std::move(rec);
    }
    MetricsTable table;
    for (const auto& [name, by_seed] : groups) {
        std::vector<EpisodeResult> results;
        std::vector<double> shortest;
        for (const auto& [seed, rec] : by_seed) {
            results.push_back(rec.result);
            shortest.push_back(rec.shortest_path_len);
        }
        table[name] = compute_metrics(results, shortest);
    }
    return table;
}

std::string format_metrics_csv(const MetricsTable& table) {
    std::string out = "strategy,episodes,sr,spl,mean_steps,mean_path_m\n";
    for (const auto& [name, m] : table) {
        out += name + "," + std::to_string(m.episodes) + "," + shortest(m.sr) + "," + shortest(m.spl) +
               "," + shortest(m.mean_steps) + "," + shortest(m.mean_path_m) + "\n";
    }
    return out;
}

std::string format_metrics_table(const MetricsTable& table) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "strategy" << std::right << std::setw(10) << "episodes"
       << std::setw(9) << "SR" << std::setw(9) << "SPL" << std::setw(12) << "steps" << std::setw(12)
       << "path_m" << '\n';
    os << std::fixed;
    for (const auto& [name, m] : table) {
        os << std::left << std::setw(10) << name << std::right << std::setw(10) << m.episodes
           << std::setprecision(2) << std::setw(9) << m.sr << std::setw(9) << m.spl
           << std::setprecision(1) << std::setw(12) << m.mean_steps << std::setprecision(2)
           << std::setw(12) << m.mean_path_m << '\n';
    }
    return os.str();
}

void cmd_report(const fs::path& dir, std::ostream& out) {
    const MetricsTable table = collect_metrics(dir);
    out << format_metrics_table(table);
    const fs::path csv = dir / "report.csv";
    std::ofstream f(csv, std::ios::binary);
    f << format_metrics_csv(table);
    if (!f) throw CliError(kExitIo, "cannot write '" + csv.string() + "'");
}

}  // namespace banditnav::cli
