#pragma once
// Shared fixtures and independent reference implementations for the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "banditnav/grid.hpp"
#include "banditnav/frontier.hpp"
#include "banditnav/occupancy_map.hpp"
#include "banditnav/path.hpp"

namespace testsupport {

using namespace banditnav;

inline GridSpec grid(int w, int h, double res = 1.0) { return {w, h, res, {0.0, 0.0}}; }

inline OccupancyMap free_map(int w, int h, double res = 1.0) {
    return OccupancyMap::from_mask(grid(w, h, res), std::vector<bool>(static_cast<std::size_t>(w) * h, false));
}

/// Map built from rows of text: '#' occupied, '.' free, '?' unknown.
/// The first string is the top row (largest row index).
inline OccupancyMap map_from_rows(const std::vector<std::string>& rows, double res = 1.0) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.front().size());
    OccupancyMap m(grid(w, h, res));
    for (int i = 0; i < h; ++i) {
        const int row = h - 1 - i;
        for (int c = 0; c < w; ++c) {
            const char ch = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            if (ch == '#') m.add_evidence({c, row}, 10.0);
            if (ch == '.') m.add_evidence({c, row}, -10.0);
        }
    }
    return m;
}

/// Random tri-state map: each cell occupied / free / unknown with the given weights.
inline OccupancyMap random_map(std::mt19937_64& rng, int w, int h, double p_occ, double p_unknown) {
    OccupancyMap m(grid(w, h));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double x = u(rng);
            if (x < p_occ) {
                m.add_evidence({c, r}, 10.0);
            } else if (x >= p_occ + p_unknown) {
                m.add_evidence({c, r}, -10.0);
            }
        }
    }
    return m;
}

/// Cells whose closed square intersects the segment a->b, found by
/// brute-force clipping against every cell (Liang-Barsky).
inline bool segment_touches_cell(Vec2 a, Vec2 b, double x0, double y0, double x1, double y1) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) return false;
    }
    return true;
}

/// Frontier clusters by direct neighbour inspection and flood fill over a
/// dense grid; centroid ties go to the smallest (row, col).
inline std::vector<Frontier> oracle_frontiers(const OccupancyMap& m, int min_size) {
    const GridSpec& s = m.spec();
    auto state = [&](int c, int r) { return m.state(Cell{c, r}); };
    std::vector<std::vector<bool>> is_frontier(s.height, std::vector<bool>(s.width, false));
    for (int r = 0; r < s.height; ++r) {
        for (int c = 0; c < s.width; ++c) {
            if (state(c, r) != CellState::free) continue;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int cc = c + dc, rr = r + dr;
                    if ((dr || dc) && cc >= 0 && rr >= 0 && cc < s.width && rr < s.height &&
                        state(cc, rr) == CellState::unknown) {
                        is_frontier[r][c] = true;
                    }
                }
            }
        }
    }
    std::vector<std::vector<int>> label(s.height, std::vector<int>(s.width, -1));
    std::vector<Frontier> out;
    int next = 0;
    for (int r = 0; r < s.height; ++r) {
        for (int c = 0; c < s.width; ++c) {
            if (!is_frontier[r][c] || label[r][c] >= 0) continue;
            label[r][c] = next;
            // grow the label until no cell changes
            bool changed = true;
            while (changed) {
                changed = false;
                for (int y = 0; y < s.height; ++y) {
                    for (int x = 0; x < s.width; ++x) {
                        if (!is_frontier[y][x] || label[y][x] >= 0) continue;
                        for (int dy = -1; dy <= 1 && label[y][x] < 0; ++dy) {
                            for (int dx = -1; dx <= 1; ++dx) {
                                const int xx = x + dx, yy = y + dy;
                                if (xx >= 0 && yy >= 0 && xx < s.width && yy < s.height && label[yy][xx] == next) {
                                    label[y][x] = next;
                                    changed = true;
                                    break;
                                }
                            }
                        }
                    }
                }
            }
            Frontier f;
            for (int y = 0; y < s.height; ++y) {
                for (int x = 0; x < s.width; ++x) {
                    if (label[y][x] == next) f.cells.push_back({x, y});
                }
            }
            ++next;
            if (static_cast<int>(f.cells.size()) < min_size) continue;
            const auto n = static_cast<std::int64_t>(f.cells.size());
            std::int64_t sx = 0, sy = 0;
            for (Cell cell : f.cells) {
                sx += cell.col;
                sy += cell.row;
            }
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (Cell cell : f.cells) {
                const std::int64_t d = (n * cell.col - sx) * (n * cell.col - sx) + (n * cell.row - sy) * (n * cell.row - sy);
                if (d < best || (d == best && cell < f.centroid)) {
                    best = d;
                    f.centroid = cell;
                }
            }
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) { return a.centroid < b.centroid; });
    return out;
}

/// Shortest paths by Bellman-Ford relaxation over every edge, as counts of
/// straight and diagonal moves. Unreachable cells stay nullopt.
inline std::vector<std::optional<OctileCost>> oracle_costs(const OccupancyMap& m, Cell from, UnknownPolicy policy) {
    const GridSpec& s = m.spec();
    auto open = [&](int c, int r) {
        if (c < 0 || r < 0 || c >= s.width || r >= s.height) return false;
        const CellState st = m.state(Cell{c, r});
        return st == CellState::free || (st == CellState::unknown && policy == UnknownPolicy::traversable);
    };
    auto length = [](const OctileCost& k) { return k.straight + k.diagonal * std::sqrt(2.0L); };
    std::vector<std::optional<OctileCost>> d(s.cell_count());
    d[s.index(from)] = OctileCost{};
    for (bool changed = true; changed;) {
        changed = false;
        for (int r = 0; r < s.height; ++r) {
            for (int c = 0; c < s.width; ++c) {
                const auto here = d[s.index(Cell{c, r})];
                if (!here) continue;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (!(dr || dc) || !open(c + dc, r + dr)) continue;
                        if (dr && dc && !(open(c + dc, r) && open(c, r + dr))) continue;
                        const OctileCost cand{here->straight + ((dr && dc) ? 0 : 1), here->diagonal + ((dr && dc) ? 1 : 0)};
                        auto& there = d[s.index(Cell{c + dc, r + dr})];
                        // distinct small (straight, diagonal) pairs differ in length by far more than 1e-9
                        if (!there || length(cand) < length(*there) - 1e-9L) {
                            there = cand;
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    return d;
}

}  // namespace testsupport
