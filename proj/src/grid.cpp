#include "banditnav/grid.hpp"

#include <cmath>
#include <numbers>

namespace banditnav {

void GridSpec::validate() const {
    if (width < 1 || height < 1) throw Error("GridSpec: width and height must be >= 1");
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw Error("GridSpec: resolution must be positive");
    }
}

double normalize_angle(double radians) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(radians + std::numbers::pi, two_pi);
    if (a < 0.0) a += two_pi;
    a -= std::numbers::pi;
    // fmod can land exactly on +pi after the shift for inputs just below -pi.
    if (a >= std::numbers::pi) a -= two_pi;
    return a;
}

void FovSpec::validate() const {
    if (!(horizontal_fov > 0.0 && horizontal_fov < 2.0 * std::numbers::pi)) {
        throw Error("FovSpec: horizontal_fov must lie in (0, 2*pi)");
    }
    if (!(max_range > 0.0)) throw Error("FovSpec: max_range must be positive");
    if (ray_count < 3) throw Error("FovSpec: ray_count must be >= 3");
}

double FovSpec::ray_bearing(int i) const {
    const double half = 0.5 * horizontal_fov;
    if (i == ray_count - 1) return half;
    return -half + horizontal_fov * static_cast<double>(i) / static_cast<double>(ray_count - 1);
}

std::optional<Cell> world_to_grid(Vec2 p, const GridSpec& spec) {
    const double gx = std::floor((p.x - spec.origin.x) / spec.resolution);
    const double gy = std::floor((p.y - spec.origin.y) / spec.resolution);
    if (!(gx >= 0.0 && gy >= 0.0 && gx < spec.width && gy < spec.height)) return std::nullopt;
    return Cell{static_cast<int>(gx), static_cast<int>(gy)};
}

}  // namespace banditnav
