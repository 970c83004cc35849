#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "banditnav/cli.hpp"
#include "banditnav/snapshot.hpp"

using namespace banditnav;
using namespace banditnav::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("banditnav_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "banditnav");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

const char* kSmallConfig = R"({"environment": {"width": 40, "height": 40, "rooms_x": 2, "rooms_y": 2},
                               "episode": {"max_steps": 120}})";

std::size_t count_files(const fs::path& dir) {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("seed and strategy lists") {
    CHECK(parse_seed_list("3") == std::vector<std::uint64_t>{3});
    CHECK(parse_seed_list("0..3") == std::vector<std::uint64_t>{0, 1, 2, 3});
    CHECK(parse_seed_list("1,5..6") == std::vector<std::uint64_t>{1, 5, 6});
    CHECK_THROWS_AS(parse_seed_list("4..2"), CliError);
    CHECK_THROWS_AS(parse_seed_list(""), CliError);
    CHECK(parse_strategy_list("ifbe1,random").size() == 2);
    try {
        parse_strategy_list("ifbe2,greedy");
        FAIL("expected a usage error");
    } catch (const CliError& e) {
        CHECK(e.exit_code() == kExitUsage);
        CHECK(std::string(e.what()).find("--strategies") != std::string::npos);
    }
}

TEST_CASE("run writes one record per episode") {
    TempDir dir("cli_run");
    write(dir.path / "c.json", kSmallConfig);
    const auto out = dir.path / "one";
    REQUIRE(invoke({"run", "--config", (dir.path / "c.json").string(), "--out", out.string(), "--seeds", "7",
                 "--strategies", "ifbe1"}) == kExitOk);
    CHECK(count_files(out / "episodes") == 1);
    CHECK(count_files(out / "maps") == 1);
    CHECK(count_lines(slurp(out / "metrics.csv")) == 2);

    const auto rec = decode_episode_record(slurp(out / "episodes" / "ifbe1-7.json"));
    CHECK(rec.strategy == "ifbe1");
    CHECK(rec.seed == 7);
    CHECK(rec.trajectory.size() >= 2);
    CHECK(encode_episode_record(decode_episode_record(encode_episode_record(rec))) == encode_episode_record(rec));

    const auto many = dir.path / "many";
    REQUIRE(invoke({"run", "--config", (dir.path / "c.json").string(), "--out", many.string(), "--seeds", "0..19",
                 "--strategies", "ifbe1,ifbe2,closest,random", "--jobs", "3"}) == kExitOk);
    CHECK(count_files(many / "episodes") == 80);
    const std::string csv = slurp(many / "metrics.csv");
    CHECK(count_lines(csv) == 5);
    CHECK(csv.rfind("strategy,episodes,sr,spl,mean_steps,mean_path_m\n", 0) == 0);

    // same manifest, single job: identical metrics
    const auto again = dir.path / "again";
    REQUIRE(invoke({"run", "--config", (dir.path / "c.json").string(), "--out", again.string(), "--seeds", "0..19",
                 "--strategies", "ifbe1,ifbe2,closest,random"}) == kExitOk);
    CHECK(slurp(again / "metrics.csv") == csv);

    SUBCASE("report") {
        std::string text;
        REQUIRE(invoke({"report", "--in", many.string()}, &text) == kExitOk);
        CHECK(text.find("ifbe2") != std::string::npos);
        const std::string first = slurp(many / "report.csv");
        CHECK(first == csv);
        REQUIRE(invoke({"report", "--in", many.string()}) == kExitOk);
        CHECK(slurp(many / "report.csv") == first);

        // rows agree with compute_metrics on the decoded records
        const auto table = collect_metrics(many);
        CHECK(table.size() == 4);
        std::vector<EpisodeResult> results;
        std::vector<double> shortest;
        for (const auto& e : fs::directory_iterator(many / "episodes")) {
            const auto r = decode_episode_record(slurp(e.path()));
            if (r.strategy != "closest") continue;
            results.push_back(r.result);
            shortest.push_back(r.shortest_path_len);
        }
        const auto m = compute_metrics(results, shortest);
        CHECK(std::abs(table.at("closest").sr - m.sr) <= 1e-12);
        CHECK(std::abs(table.at("closest").spl - m.spl) <= 1e-12);
    }
    SUBCASE("render") {
        const auto rec_path = out / "episodes" / "ifbe1-7.json";
        for (const char* layer : {"occupancy", "relevance_mean", "relevance_var"}) {
            const auto img = dir.path / (std::string(layer) + ".pgm");
            REQUIRE(invoke({"render", "--in", (out / "maps" / "ifbe1-7.gsmap").string(), "--layer", layer, "--out",
                         img.string()}) == kExitOk);
            CHECK(slurp(img).rfind("P5\n40 40\n255\n", 0) == 0);
            CHECK(slurp(img).size() == std::string("P5\n40 40\n255\n").size() + 1600);
        }
        const auto ppm = dir.path / "traj.ppm";
        REQUIRE(invoke({"render", "--in", rec_path.string(), "--layer", "trajectory", "--out", ppm.string()}) == kExitOk);
        CHECK(slurp(ppm).rfind("P6\n40 40\n255\n", 0) == 0);
        CHECK(invoke({"render", "--in", (out / "maps" / "ifbe1-7.gsmap").string(), "--layer", "trajectory", "--out",
                   ppm.string()}) == kExitUsage);
        CHECK(invoke({"render", "--in", rec_path.string(), "--layer", "depth", "--out", ppm.string()}) == kExitUsage);
    }
}

TEST_CASE("fresh maps render flat") {
    const OccupancyMap occ(GridSpec{5, 3, 1.0, {0.0, 0.0}});
    const MapSnapshot snap{occ, SemanticMap(occ.spec())};
    const auto o = render_layer(snap, Layer::occupancy);
    CHECK(o.width == 5);
    CHECK(o.height == 3);
    CHECK(std::all_of(o.pixels.begin(), o.pixels.end(), [](std::uint8_t p) { return p == 128; }));
    const auto v = render_layer(snap, Layer::relevance_var);
    CHECK(std::adjacent_find(v.pixels.begin(), v.pixels.end(), std::not_equal_to<>()) == v.pixels.end());
    CHECK(encode_pnm(o).size() == std::string("P5\n5 3\n255\n").size() + 15);

    OccupancyMap marked = occ;
    marked.add_evidence({0, 0}, 5.0);
    marked.add_evidence({4, 2}, -5.0);
    auto m = render_layer({marked, SemanticMap(occ.spec())}, Layer::occupancy);
    CHECK(*m.at(0, 2) == 0);    // grid row 0 is the bottom image row
    CHECK(*m.at(4, 0) == 255);
    const auto t = render_trajectory(snap, {{{0.5, 0.5}, 0.0}, {{4.5, 0.5}, 0.0}});
    CHECK(t.channels == 3);
}

TEST_CASE("cli errors map to exit codes") {
    TempDir dir("cli_err");
    write(dir.path / "c.json", kSmallConfig);
    write(dir.path / "bad.json", R"({"planner": {"strategy": "nope"}})");
    std::string err;
    CHECK(invoke({"run", "--config", (dir.path / "c.json").string(), "--out", (dir.path / "o").string(), "--seeds",
               "1", "--strategies", "ifbe3"},
              nullptr, &err) == kExitUsage);
    CHECK(err.find("--strategies") != std::string::npos);
    CHECK(invoke({"run", "--config", (dir.path / "bad.json").string(), "--out", (dir.path / "o").string(), "--seeds",
               "1"},
              nullptr, &err) == kExitUsage);
    CHECK(err.find("planner.strategy") != std::string::npos);
    CHECK(invoke({"run", "--config", (dir.path / "missing.json").string(), "--out", (dir.path / "o").string(),
               "--seeds", "1"}) == kExitIo);
    CHECK(invoke({"run", "--config", (dir.path / "c.json").string()}) == kExitUsage);
    CHECK(invoke({"bogus"}) == kExitUsage);

    const auto missing = dir.path / "nothing_here";
    CHECK(invoke({"report", "--in", missing.string()}, nullptr, &err) == kExitIo);
    CHECK(err.find(missing.string()) != std::string::npos);
    fs::create_directories(dir.path / "empty");
    CHECK(invoke({"report", "--in", (dir.path / "empty").string()}) == kExitIo);

    write(dir.path / "junk.gsmap", "not a snapshot");
    CHECK(invoke({"render", "--in", (dir.path / "junk.gsmap").string(), "--layer", "occupancy", "--out",
               (dir.path / "x.pgm").string()}) == kExitIo);
}
