#include "banditnav/visibility.hpp"

#include <algorithm>
#include <cmath>

namespace banditnav {

RayTrace raycast(const Pose& from, double bearing, const OccupancyMap& occ, const FovSpec& fov) {
    const GridSpec& spec = occ.spec();
    if (!world_to_grid(from.position, spec)) throw Error("raycast: start pose outside grid");
    RayTrace trace;
    traverse_segment(
        spec, from.position, from.heading + bearing, fov.max_range,
        [&](Cell c) {
            if (occ.is_occupied(c)) {
                trace.terminal = true;
                return true;
            }
            return false;
        },
        trace.cells);
    return trace;
}

VisibleSet focal_cone(const Pose& from, const OccupancyMap& occ, const FovSpec& fov) {
    fov.validate();
    const GridSpec& spec = occ.spec();
    struct Hit {
        std::size_t index;
        VisibleCell cell;
    };
    std::vector<Hit> hits;
    hits.reserve(static_cast<std::size_t>(fov.ray_count) * 24);
    for (int i = 0; i < fov.ray_count; ++i) {
        const double bearing = fov.ray_bearing(i);
        const RayTrace trace = raycast(from, bearing, occ, fov);
        for (std::size_t k = 0; k < trace.cells.size(); ++k) {
            const TraversedCell& t = trace.cells[k];
            const bool terminal = trace.terminal && k + 1 == trace.cells.size();
            hits.push_back({spec.index(t.cell), {t.cell, bearing, t.entry, terminal, i}});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.index != b.index) return a.index < b.index;
        const double fa = std::abs(a.cell.bearing), fb = std::abs(b.cell.bearing);
        if (fa != fb) return fa < fb;
        return a.cell.ray < b.cell.ray;
    });
    VisibleSet out{spec, {}};
    out.cells.reserve(hits.size() / 2);
    for (std::size_t k = 0; k < hits.size(); ++k) {
        if (k > 0 && hits[k].index == hits[k - 1].index) {
            out.cells.back().terminal = out.cells.back().terminal || hits[k].cell.terminal;
            continue;
        }
        out.cells.push_back(hits[k].cell);
    }
    return out;
}

bool line_of_sight(const OccupancyMap& occ, Vec2 from, Cell target) {
    const GridSpec& spec = occ.spec();
    const auto start = world_to_grid(from, spec);
    if (!start || !spec.contains(target)) return false;
    if (*start == target) return true;
    const Vec2 goal = spec.center(target);
    const double length = distance(from, goal);
    const double angle = std::atan2(goal.y - from.y, goal.x - from.x);
    std::vector<TraversedCell> cells;
    bool blocked = false;
    traverse_segment(
        spec, from, angle, length,
        [&](Cell c) {
            if (c == target) return true;
            if (occ.is_occupied(c)) {
                blocked = true;
                return true;
            }
            return false;
        },
        cells);
    return !blocked;
}

std::vector<Cell> swept_cells(const GridSpec& spec, Vec2 a, Vec2 b) {
    std::vector<Cell> out;
    if (const auto start = world_to_grid(a, spec)) out.push_back(*start);
    const double length = distance(a, b);
    if (length == 0.0) return out;
    std::vector<TraversedCell> cells;
    traverse_segment(spec, a, std::atan2(b.y - a.y, b.x - a.x), length, [](Cell) { return false; },
                     cells);
    for (const auto& t : cells) out.push_back(t.cell);
    return out;
}

}  // namespace banditnav
