#include <doctest.h>

#include <numbers>

#include "banditnav/environment.hpp"
#include "banditnav/episode.hpp"
#include "banditnav/metrics.hpp"
#include "banditnav/path.hpp"
#include "banditnav/snapshot.hpp"
#include "banditnav/trace.hpp"
#include "support.hpp"

using namespace banditnav;
using namespace testsupport;

namespace {

Environment hand_env(const std::vector<std::string>& rows, std::vector<Cell> targets, Pose start) {
    const auto truth = map_from_rows(rows);
    Environment env{truth, geodesic_relevance(truth, targets, 8.0), targets, "chair", start, 1.0, {}, 0};
    std::sort(env.target_cells.begin(), env.target_cells.end());
    return env;
}

GenConfig small_gen() {
    GenConfig g;
    g.width = 40;
    g.height = 40;
    g.rooms_x = 2;
    g.rooms_y = 2;
    return g;
}

EpisodeConfig quick_config(Strategy s, std::uint64_t seed) {
    EpisodeConfig c;
    c.max_steps = 300;
    c.planner.strategy = s;
    c.planner.rng_seed = seed;
    c.rng_seed = seed;
    return c;
}

}  // namespace

TEST_CASE("environment generation") {
    const GenConfig g;
    const auto a = generate_environment(g, 5);
    const auto b = generate_environment(g, 5);
    CHECK(encode_snapshot(a.occ_truth, SemanticMap(a.occ_truth.spec())) ==
          encode_snapshot(b.occ_truth, SemanticMap(b.occ_truth.spec())));
    CHECK(a.semantic_truth.values == b.semantic_truth.values);
    CHECK(a.target_cells == b.target_cells);
    CHECK(a.start == b.start);
    CHECK(a.shortest_path_len == b.shortest_path_len);

    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto env = generate_environment(small_gen(), seed);
        const GridSpec& s = env.occ_truth.spec();
        const Cell start = *world_to_grid(env.start.position, s);
        CHECK(env.occ_truth.state(start) == CellState::free);
        CHECK_FALSE(env.target_cells.empty());
        CHECK(env.shortest_path_len > 0.0);
        const auto dist = path_distances(env.occ_truth, start, UnknownPolicy::blocked);
        double nearest = INFINITY;
        for (Cell t : env.target_cells) {
            REQUIRE(dist[s.index(t)].has_value());
            nearest = std::min(nearest, dist[s.index(t)]->meters(s.resolution));
            CHECK(env.semantic_truth.at(t) == 1.0);
        }
        CHECK(env.shortest_path_len == doctest::Approx(nearest));
        for (double v : env.semantic_truth.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }

    GenConfig flat = small_gen();
    flat.relevance_decay = INFINITY;
    for (double v : generate_environment(flat, 3).semantic_truth.values) CHECK(v == 1.0);

    GenConfig bad = small_gen();
    bad.rooms_x = 1;
    bad.rooms_y = 1;
    CHECK_THROWS_AS(generate_environment(bad, 0), Error);
    bad = small_gen();
    bad.relevance_decay = 0.0;
    CHECK_THROWS_AS(generate_environment(bad, 0), Error);
}

TEST_CASE("geodesic relevance") {
    const auto truth = map_from_rows({
        ".....",
        "####.",
        ".....",
    });
    const auto f = geodesic_relevance(truth, {{0, 2}}, 2.0);
    CHECK(f.at({0, 2}) == 1.0);
    CHECK(f.at({2, 2}) == doctest::Approx(std::exp(-1.0)));
    // around the wall: 4 right, down past the gap diagonally, 3 back left
    CHECK(f.at({0, 0}) == doctest::Approx(std::exp(-(3.0 + 2.0 * std::numbers::sqrt2 + 3.0) / 2.0)));
}

TEST_CASE("step examples") {
    const auto truth = map_from_rows({
        ".....",
        ".....",
        "....#",
    });
    EpisodeConfig cfg;
    cfg.step_size = 1.0;
    EpisodeState s;
    s.pose = {{2.5, 0.5}, 0.0};

    auto moved = step(s, Action::forward, truth, cfg);
    CHECK(moved.pose.position.x == doctest::Approx(3.5));
    CHECK(moved.path_length == doctest::Approx(1.0));
    CHECK_FALSE(moved.collided);
    CHECK(moved.steps == 1);

    auto bumped = step(moved, Action::forward, truth, cfg);
    CHECK(bumped.pose == moved.pose);
    CHECK(bumped.collided);
    CHECK(bumped.path_length == moved.path_length);
    CHECK(bumped.steps == 2);

    auto turned = s;
    for (int i = 0; i < 12; ++i) turned = step(turned, Action::turn_left, truth, cfg);
    CHECK(std::abs(normalize_angle(turned.pose.heading - s.pose.heading)) <= 1e-9);
    CHECK(step(s, Action::turn_right, truth, cfg).pose.heading == doctest::Approx(-deg_to_rad(30.0)));

    // leaving the grid counts as blocked
    EpisodeState edge;
    edge.pose = {{0.5, 2.5}, std::numbers::pi / 2};
    CHECK(step(edge, Action::forward, truth, cfg).collided);

    const auto stopped = step(s, Action::stop, truth, cfg);
    CHECK(stopped.terminated);
    CHECK_THROWS_AS(step(stopped, Action::turn_left, truth, cfg), Error);
}

TEST_CASE("episode examples") {
    SUBCASE("target in view at the start") {
        const auto env = hand_env({"........", "........", "........"}, {{1, 1}}, {{0.5, 1.5}, 0.0});
        const auto out = run_episode(env, quick_config(Strategy::ifbe2, 1));
        CHECK(out.result.success);
        CHECK(out.result.steps_used == 1);
        CHECK(out.actions == std::vector<Action>{Action::stop});
        CHECK(out.result.spl_term == 1.0);
        CHECK_FALSE(out.result.failure_reason.has_value());
    }
    SUBCASE("a single step times out") {
        const auto env = generate_environment(GenConfig{}, 1);
        auto cfg = quick_config(Strategy::ifbe2, 1);
        cfg.max_steps = 1;
        const auto out = run_episode(env, cfg);
        CHECK_FALSE(out.result.success);
        CHECK(out.result.steps_used == 1);
        CHECK(out.result.failure_reason == FailureReason::timeout);
        CHECK(out.result.spl_term == 0.0);
    }
    SUBCASE("sealed room ends with no frontier") {
        const auto env = hand_env(
            {
                "##########",
                "#...#....#",
                "#...#....#",
                "#...#....#",
                "##########",
            },
            {{7, 2}}, {{2.5, 2.5}, 0.0});
        const auto out = run_episode(env, quick_config(Strategy::ifbe2, 1));
        CHECK(out.result.failure_reason == FailureReason::no_frontier);
    }
    SUBCASE("a false detection leads to a bad stop") {
        const auto env = hand_env(
            {
                "##########",
                "#...#....#",
                "#........#",
                "#...#....#",
                "##########",
            },
            {{8, 1}}, {{1.5, 2.5}, std::numbers::pi});
        auto cfg = quick_config(Strategy::ifbe2, 1);
        cfg.detector.false_positive_rate = 1.0;
        const auto out = run_episode(env, cfg);
        CHECK(out.result.failure_reason == FailureReason::bad_stop);
        CHECK(out.actions.back() == Action::stop);
    }
    SUBCASE("an exhausted replay trace is a sensor failure") {
        const auto env = generate_environment(GenConfig{}, 2);
        ReplaySource src({{0, {{0.1, 0.2}}}, {1, {{0.1, 0.2}}}});
        const auto out = run_episode(env, quick_config(Strategy::ifbe2, 1), &src);
        CHECK(out.result.failure_reason == FailureReason::sensor_failure);
        CHECK(out.result.steps_used == 2);
        CHECK_FALSE(out.sensor_error.empty());
    }
    SUBCASE("a missing trace file is a sensor failure") {
        const auto env = generate_environment(GenConfig{}, 2);
        auto cfg = quick_config(Strategy::ifbe2, 1);
        cfg.sensor.kind = SensorKind::replay;
        cfg.sensor.trace_path = "/nonexistent/trace.jsonl";
        CHECK(run_episode(env, cfg).result.failure_reason == FailureReason::sensor_failure);
    }
}

TEST_CASE("stop adjudication") {
    const auto env = hand_env(
        {
            "......",
            "..#...",
            "......",
        },
        {{3, 1}}, {{0.5, 0.5}, 0.0});
    CHECK(stop_is_valid(env, {{3.5, 0.5}, 0.0}, 1.0));
    CHECK(stop_is_valid(env, {{3.5, 2.5}, 0.0}, 1.0));
    CHECK_FALSE(stop_is_valid(env, {{1.5, 1.5}, 0.0}, 1.0));  // wall in the way
    CHECK_FALSE(stop_is_valid(env, {{0.5, 0.5}, 0.0}, 1.0));  // too far
}

TEST_CASE("metrics") {
    CHECK(spl_term(true, 4.0, 8.0) == 0.5);
    CHECK(spl_term(true, 4.0, 2.0) == 1.0);
    CHECK(spl_term(false, 4.0, 4.0) == 0.0);
    std::vector<EpisodeResult> r(4);
    r[0] = {true, 10, 8.0, 0.5, {}};
    r[1] = {true, 10, 4.0, 1.0, {}};
    r[2] = {false, 20, 2.0, 0.0, FailureReason::timeout};
    r[3] = {false, 40, 6.0, 0.0, FailureReason::no_frontier};
    const std::vector<double> l{4.0, 4.0, 1.0, 1.0};
    const auto m = compute_metrics(r, l);
    CHECK(m.episodes == 4);
    CHECK(m.sr == 50.0);
    CHECK(m.spl == 37.5);
    CHECK(m.mean_steps == 20.0);
    CHECK(m.mean_path_m == 5.0);
    CHECK_THROWS_AS(compute_metrics({}, {}), Error);
    CHECK_THROWS_AS(compute_metrics(r, std::vector<double>{1.0}), Error);
}

TEST_CASE("episode invariants") {
    std::vector<EpisodeResult> results;
    std::vector<double> shortest;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto env = generate_environment(small_gen(), seed);
        for (auto s : {Strategy::ifbe1, Strategy::ifbe2, Strategy::closest, Strategy::random}) {
            const auto cfg = quick_config(s, seed);
            const auto out = run_episode(env, cfg);
            const auto& r = out.result;
            results.push_back(r);
            shortest.push_back(env.shortest_path_len);

            CHECK(r.steps_used <= cfg.max_steps);
            CHECK(out.trajectory.size() == out.actions.size() + 1);
            CHECK(r.spl_term >= 0.0);
            CHECK(r.spl_term <= 1.0);
            CHECK(r.success != r.failure_reason.has_value());
            CHECK(r.path_length >= distance(out.trajectory.front().position, out.trajectory.back().position) - 1e-9);
            if (r.success) {
                CHECK(out.actions.back() == Action::stop);
                CHECK(stop_is_valid(env, out.trajectory.back(), cfg.clearance));
                CHECK(r.path_length >= env.shortest_path_len * 0.5);
            }
            // every pose is on free ground
            for (const Pose& p : out.trajectory) {
                CHECK(env.occ_truth.state(*world_to_grid(p.position, env.occ_truth.spec())) == CellState::free);
            }
            // the belief never marks free ground as occupied
            const GridSpec& spec = env.occ_truth.spec();
            for (std::size_t i = 0; i < spec.cell_count(); ++i) {
                if (out.occupancy.state(i) == CellState::occupied) {
                    CHECK(env.occ_truth.state(i) == CellState::occupied);
                }
            }
            for (double v : out.semantic.variances()) CHECK(v <= kPriorRelevanceVariance);

            const auto again = run_episode(env, cfg);
            CHECK(again.result == r);
            CHECK(encode_snapshot(again.occupancy, again.semantic) == encode_snapshot(out.occupancy, out.semantic));
        }
    }
    const auto m = compute_metrics(results, shortest);
    CHECK(m.spl <= m.sr);
}
