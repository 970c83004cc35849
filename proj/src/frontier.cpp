#include "banditnav/frontier.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "banditnav/kernels/kernels.hpp"

namespace banditnav {

std::vector<Cell> detect_frontier_cells(std::span<const std::uint8_t> states, const GridSpec& spec) {
    if (states.size() != spec.cell_count()) throw Error("detect_frontier_cells: size mismatch");
    std::vector<std::uint8_t> mask(states.size());
    kernels::active().frontier_mask(states.data(), spec.width, spec.height, mask.data());
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) cells.push_back(spec.cell_at(i));
    }
    return cells;
}

std::vector<Cell> detect_frontier_cells(const OccupancyMap& occ) {
    return detect_frontier_cells(occ.states(), occ.spec());
}

std::vector<Frontier> cluster_frontiers(std::span<const Cell> input, int min_size) {
    std::vector<Cell> cells(input.begin(), input.end());
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    auto find = [&](Cell c) -> std::ptrdiff_t {
        const auto it = std::lower_bound(cells.begin(), cells.end(), c);
        return (it != cells.end() && *it == c) ? it - cells.begin() : -1;
    };

    std::vector<bool> seen(cells.size(), false);
    std::vector<Frontier> out;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < cells.size(); ++seed) {
        if (seen[seed]) continue;
        Frontier f;
        seen[seed] = true;
        stack.assign(1, seed);
        while (!stack.empty()) {
            const Cell c = cells[stack.back()];
            stack.pop_back();
            f.cells.push_back(c);
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const std::ptrdiff_t k = find({c.col + dc, c.row + dr});
                    if (k >= 0 && !seen[static_cast<std::size_t>(k)]) {
                        seen[static_cast<std::size_t>(k)] = true;
                        stack.push_back(static_cast<std::size_t>(k));
                    }
                }
            }
        }
        if (static_cast<int>(f.cells.size()) < min_size) continue;
        std::sort(f.cells.begin(), f.cells.end());

        // Compare n^2 * squared distance to the mean in integers so ties are exact.
        const auto n = static_cast<std::int64_t>(f.cells.size());
        std::int64_t sx = 0, sy = 0;
        for (Cell c : f.cells) {
            sx += c.col;
            sy += c.row;
        }
        // Cells are in (row, col) order, so strict '<' keeps the first on ties.
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (Cell c : f.cells) {
            const std::int64_t dx = n * c.col - sx, dy = n * c.row - sy;
            const std::int64_t d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                f.centroid = c;
            }
        }
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(),
              [](const Frontier& a, const Frontier& b) { return a.centroid < b.centroid; });
    return out;
}

}  // namespace banditnav
