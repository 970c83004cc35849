#pragma once

#include <cmath>
#include <limits>

namespace banditnav {

template <typename StopFn>
void traverse_segment(const GridSpec& spec, Vec2 from, double angle, double length, StopFn&& stop,
                      std::vector<TraversedCell>& out) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double gx = (from.x - spec.origin.x) / spec.resolution;
    const double gy = (from.y - spec.origin.y) / spec.resolution;
    Cell c{static_cast<int>(std::floor(gx)), static_cast<int>(std::floor(gy))};

    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    constexpr double axis_eps = 1e-15;
    const int sx = dx > axis_eps ? 1 : (dx < -axis_eps ? -1 : 0);
    const int sy = dy > axis_eps ? 1 : (dy < -axis_eps ? -1 : 0);

    // Distances in meters to the next vertical / horizontal grid line.
    double t_max_x = inf, t_delta_x = inf;
    if (sx > 0) {
        t_max_x = (std::floor(gx) + 1.0 - gx) / dx * spec.resolution;
        t_delta_x = spec.resolution / dx;
    } else if (sx < 0) {
        t_max_x = (gx - std::floor(gx)) / -dx * spec.resolution;
        t_delta_x = spec.resolution / -dx;
    }
    double t_max_y = inf, t_delta_y = inf;
    if (sy > 0) {
        t_max_y = (std::floor(gy) + 1.0 - gy) / dy * spec.resolution;
        t_delta_y = spec.resolution / dy;
    } else if (sy < 0) {
        t_max_y = (gy - std::floor(gy)) / -dy * spec.resolution;
        t_delta_y = spec.resolution / -dy;
    }

    // Visits `next`; returns false when traversal must end.
    auto visit = [&](Cell next, double t) {
        if (!spec.contains(next)) return false;
        out.push_back({next, t});
        return !stop(next);
    };

    while (true) {
        const double t = std::min(t_max_x, t_max_y);
        if (!(t <= length)) break;
        const bool corner = std::isfinite(t_max_x) && std::isfinite(t_max_y) &&
                            std::abs(t_max_x - t_max_y) <= 1e-12 * std::max(1.0, t);
        if (corner) {
            if (!visit({c.col + sx, c.row}, t)) return;
            if (!visit({c.col, c.row + sy}, t)) return;
            c = {c.col + sx, c.row + sy};
            if (!visit(c, t)) return;
            t_max_x += t_delta_x;
            t_max_y += t_delta_y;
        } else if (t_max_x < t_max_y) {
            c.col += sx;
            if (!visit(c, t)) return;
            t_max_x += t_delta_x;
        } else {
            c.row += sy;
            if (!visit(c, t)) return;
            t_max_y += t_delta_y;
        }
    }
}

}  // namespace banditnav
