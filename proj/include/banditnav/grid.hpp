#pragma once
// Discrete 2D geometry: grid specs, poses, world/grid transforms and the
// supercover traversal shared by sensing, motion and line-of-sight checks.

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace banditnav {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Grid index as (col, row). Ordering is row-major, the tie-break order used
/// throughout the planner.
struct Cell {
    int col = 0;
    int row = 0;

    friend constexpr bool operator==(Cell a, Cell b) { return a.col == b.col && a.row == b.row; }
    friend constexpr bool operator<(Cell a, Cell b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    }
};

struct GridSpec {
    int width = 1;
    int height = 1;
    double resolution = 0.25;  // meters per cell
    Vec2 origin{};

    void validate() const;

    std::size_t cell_count() const { return static_cast<std::size_t>(width) * height; }
    bool contains(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width && c.row < height; }
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width + c.col; }
    Cell cell_at(std::size_t index) const {
        return {static_cast<int>(index % width), static_cast<int>(index / width)};
    }
    Vec2 center(Cell c) const {
        return {origin.x + (c.col + 0.5) * resolution, origin.y + (c.row + 0.5) * resolution};
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians);

struct Pose {
    Vec2 position{};
    double heading = 0.0;  // radians, counter-clockwise from +x, in [-pi, pi)

    friend bool operator==(const Pose&, const Pose&) = default;
};

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

struct FovSpec {
    double horizontal_fov = deg_to_rad(79.0);
    double max_range = 5.0;
    int ray_count = 181;

    void validate() const;
    /// Bearing of ray `i`, evenly spaced over [-fov/2, +fov/2].
    double ray_bearing(int i) const;
};

struct VisibleCell {
    Cell cell;
    double bearing = 0.0;  // signed angle from the optical axis, left positive
    double range = 0.0;    // entry distance along the reporting ray
    bool terminal = false;
    int ray = 0;           // index of the reporting ray within the FovSpec
};

/// Focal-cone output; carries the spec it was computed on so map updates can
/// reject cones from a different grid.
struct VisibleSet {
    GridSpec spec;
    std::vector<VisibleCell> cells;  // sorted by row-major cell index

    bool empty() const { return cells.empty(); }
    std::size_t size() const { return cells.size(); }
};

std::optional<Cell> world_to_grid(Vec2 p, const GridSpec& spec);

/// One cell crossed by a segment together with the distance at which the
/// segment enters it.
struct TraversedCell {
    Cell cell;
    double entry = 0.0;
};

/// Supercover traversal of the segment starting at `from`, heading `angle`,
/// for `length` meters. The start cell is not reported. When the segment
/// passes exactly through a cell corner both side cells are reported before
/// the diagonal one. Traversal stops at the grid boundary or when
/// `stop(cell)` returns true (that cell is still reported).
template <typename StopFn>
void traverse_segment(const GridSpec& spec, Vec2 from, double angle, double length, StopFn&& stop,
                      std::vector<TraversedCell>& out);

}  // namespace banditnav

#include "banditnav/detail/traverse.inl"
