#include "banditnav/environment.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "banditnav/path.hpp"

namespace banditnav {

void GenConfig::validate() const {
    if (width < 8 || height < 8) throw Error("GenConfig: grid must be at least 8x8");
    if (!(resolution > 0.0)) throw Error("GenConfig: resolution must be positive");
    if (rooms_x < 1 || rooms_y < 1 || rooms_x * rooms_y < 2) {
        throw Error("GenConfig: need at least two room slots");
    }
    if (min_room < 3) throw Error("GenConfig: min_room must be >= 3");
    if (width / rooms_x < min_room + 2 || height / rooms_y < min_room + 2) {
        throw Error("GenConfig: room slots too small for min_room");
    }
    if (corridor_width < 1 || corridor_width > min_room) {
        throw Error("GenConfig: corridor_width must lie in [1, min_room]");
    }
    if (target_size < 1 || target_size > min_room - 2) throw Error("GenConfig: bad target_size");
    if (furniture_per_room < 0) throw Error("GenConfig: furniture_per_room must be >= 0");
    if (!(relevance_decay > 0.0)) throw Error("GenConfig: relevance_decay must be positive");
    if (!(extra_door_probability >= 0.0 && extra_door_probability <= 1.0)) {
        throw Error("GenConfig: extra_door_probability must lie in [0, 1]");
    }
}

SemanticField geodesic_relevance(const OccupancyMap& truth, const std::vector<Cell>& targets,
                                 double decay) {
    const GridSpec& spec = truth.spec();
    SemanticField field{spec, std::vector<double>(spec.cell_count(), 0.0)};
    if (std::isinf(decay)) {
        std::fill(field.values.begin(), field.values.end(), 1.0);
        return field;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(spec.cell_count(), inf);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (Cell t : targets) {
        dist[spec.index(t)] = 0.0;
        heap.push({0.0, spec.index(t)});
    }
    while (!heap.empty()) {
        const auto [d, i] = heap.top();
        heap.pop();
        if (d > dist[i]) continue;
        // Walls receive a distance but do not propagate it.
        if (truth.state(i) == CellState::occupied) continue;
        const Cell c = spec.cell_at(i);
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const Cell n{c.col + dc, c.row + dr};
                if (!spec.contains(n)) continue;
                const double nd = d + ((dr != 0 && dc != 0) ? std::numbers::sqrt2 : 1.0);
                const std::size_t j = spec.index(n);
                if (nd < dist[j]) {
                    dist[j] = nd;
                    heap.push({nd, j});
                }
            }
        }
    }
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (std::isfinite(dist[i])) field.values[i] = std::exp(-dist[i] / decay);
    }
    return field;
}

namespace {

struct Builder {
    const GenConfig& cfg;
    std::mt19937_64 rng;
    GridSpec spec;
    std::vector<bool> occupied;

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

    void carve(int c0, int r0, int c1, int r1) {
        if (c0 > c1) std::swap(c0, c1);
        if (r0 > r1) std::swap(r0, r1);
        c0 = std::max(c0, 1);
        r0 = std::max(r0, 1);
        c1 = std::min(c1, spec.width - 2);
        r1 = std::min(r1, spec.height - 2);
        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) occupied[spec.index({c, r})] = false;
        }
    }

    void corridor(const Room& a, const Room& b) {
        const int half = cfg.corridor_width / 2;
        const int extra = cfg.corridor_width - 1 - half;
        const Cell ca{(a.col0 + a.col1) / 2, (a.row0 + a.row1) / 2};
        const Cell cb{(b.col0 + b.col1) / 2, (b.row0 + b.row1) / 2};
        carve(ca.col, ca.row - half, cb.col, ca.row + extra);
        carve(cb.col - half, ca.row, cb.col + extra, cb.row);
    }
};

std::optional<Environment> try_generate(const GenConfig& cfg, std::uint64_t seed) {
    Builder b{cfg, std::mt19937_64(seed), {cfg.width, cfg.height, cfg.resolution, {0.0, 0.0}}, {}};
    b.occupied.assign(b.spec.cell_count(), true);

    const int slot_w = cfg.width / cfg.rooms_x;
    const int slot_h = cfg.height / cfg.rooms_y;
    std::vector<Room> rooms;
    for (int sy = 0; sy < cfg.rooms_y; ++sy) {
        for (int sx = 0; sx < cfg.rooms_x; ++sx) {
            const int max_w = slot_w - 2;
            const int max_h = slot_h - 2;
            const int w = b.uniform(cfg.min_room, max_w);
            const int h = b.uniform(cfg.min_room, max_h);
            const int c0 = sx * slot_w + 1 + b.uniform(0, max_w - w);
            const int r0 = sy * slot_h + 1 + b.uniform(0, max_h - h);
            Room room{c0, r0, c0 + w - 1, r0 + h - 1};
            room.col1 = std::min(room.col1, cfg.width - 2);
            room.row1 = std::min(room.row1, cfg.height - 2);
            rooms.push_back(room);
            b.carve(room.col0, room.row0, room.col1, room.row1);
        }
    }

    // Random spanning tree over the slot lattice plus a few extra doors.
    const int n = static_cast<int>(rooms.size());
    auto slot = [&](int x, int y) { return y * cfg.rooms_x + x; };
    std::vector<std::pair<int, int>> edges;
    for (int y = 0; y < cfg.rooms_y; ++y) {
        for (int x = 0; x < cfg.rooms_x; ++x) {
            if (x + 1 < cfg.rooms_x) edges.emplace_back(slot(x, y), slot(x + 1, y));
            if (y + 1 < cfg.rooms_y) edges.emplace_back(slot(x, y), slot(x, y + 1));
        }
    }
    std::shuffle(edges.begin(), edges.end(), b.rng);
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto root = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
        return i;
    };
    for (const auto& [u, v] : edges) {
        const int ru = root(u), rv = root(v);
        if (ru != rv) {
            parent[static_cast<std::size_t>(ru)] = rv;
            b.corridor(rooms[static_cast<std::size_t>(u)], rooms[static_cast<std::size_t>(v)]);
        } else if (b.unit() < cfg.extra_door_probability) {
            b.corridor(rooms[static_cast<std::size_t>(u)], rooms[static_cast<std::size_t>(v)]);
        }
    }

    const int start_room = b.uniform(0, n - 1);
    int target_room = b.uniform(0, n - 2);
    if (target_room >= start_room) ++target_room;

    // Target footprint, kept one cell clear of the room walls.
    const Room& tr = rooms[static_cast<std::size_t>(target_room)];
    const int ts = cfg.target_size;
    const Cell t0{b.uniform(tr.col0 + 1, tr.col1 - ts), b.uniform(tr.row0 + 1, tr.row1 - ts)};
    std::vector<Cell> targets;
    for (int r = 0; r < ts; ++r) {
        for (int c = 0; c < ts; ++c) targets.push_back({t0.col + c, t0.row + r});
    }
    auto near_target = [&](Cell c) {
        for (Cell t : targets) {
            if (std::abs(t.col - c.col) <= 1 && std::abs(t.row - c.row) <= 1) return true;
        }
        return false;
    };

    for (const Room& room : rooms) {
        for (int k = 0; k < cfg.furniture_per_room; ++k) {
            const int w = room.col1 - room.col0 + 1, h = room.row1 - room.row0 + 1;
            if (w < 6 || h < 6) break;
            const Cell f{b.uniform(room.col0 + 2, room.col1 - 3), b.uniform(room.row0 + 2, room.row1 - 3)};
            bool clash = false;
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) clash = clash || near_target({f.col + c, f.row + r});
            }
            if (clash) continue;
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) b.occupied[b.spec.index({f.col + c, f.row + r})] = true;
            }
        }
    }

    const Room& sr = rooms[static_cast<std::size_t>(start_room)];
    std::vector<Cell> candidates;
    for (int r = sr.row0 + 1; r <= sr.row1 - 1; ++r) {
        for (int c = sr.col0 + 1; c <= sr.col1 - 1; ++c) {
            bool clear = true;
            for (int dr = -1; dr <= 1 && clear; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (b.occupied[b.spec.index({c + dc, r + dr})]) {
                        clear = false;
                        break;
                    }
                }
            }
            if (clear) candidates.push_back({c, r});
        }
    }
    if (candidates.empty()) return std::nullopt;
    const Cell start_cell = candidates[static_cast<std::size_t>(b.uniform(0, static_cast<int>(candidates.size()) - 1))];
    const double heading = normalize_angle(b.uniform(0, 11) * std::numbers::pi / 6.0);

    OccupancyMap truth = OccupancyMap::from_mask(b.spec, b.occupied);
    const auto dist = path_distances(truth, start_cell, UnknownPolicy::blocked);
    double shortest = std::numeric_limits<double>::infinity();
    for (Cell t : targets) {
        if (const auto& d = dist[b.spec.index(t)]) shortest = std::min(shortest, d->meters(cfg.resolution));
    }
    if (!std::isfinite(shortest) || !(shortest > 0.0)) return std::nullopt;

    std::sort(targets.begin(), targets.end());
    Environment env{std::move(truth), {}, targets, cfg.category,
                    Pose{b.spec.center(start_cell), heading}, shortest, std::move(rooms), seed};
    env.semantic_truth = geodesic_relevance(env.occ_truth, env.target_cells, cfg.relevance_decay);
    return env;
}

}  // namespace

Environment generate_environment(const GenConfig& config, std::uint64_t seed) {
    config.validate();
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        const std::uint64_t s = attempt == 0 ? seed : mix_seed(seed, attempt);
        if (auto env = try_generate(config, s)) {
            env->seed = seed;
            return std::move(*env);
        }
    }
    throw GenerationError("generate_environment: no valid environment after 100 attempts");
}

}  // namespace banditnav
