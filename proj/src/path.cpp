#include "banditnav/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>

namespace banditnav {

double OctileCost::value() const { return straight + diagonal * std::numbers::sqrt2; }

bool operator<(OctileCost a, OctileCost b) {
    // sign of x + y*sqrt(2), evaluated exactly
    const std::int64_t x = static_cast<std::int64_t>(a.straight) - b.straight;
    const std::int64_t y = static_cast<std::int64_t>(a.diagonal) - b.diagonal;
    if (x <= 0 && y <= 0) return x < 0 || y < 0;
    if (x >= 0 && y >= 0) return false;
    if (x > 0) return x * x < 2 * y * y;  // y < 0
    return 2 * y * y < x * x;             // x < 0, y > 0
}

OctileCost octile_distance(Cell a, Cell b) {
    const int dx = std::abs(a.col - b.col);
    const int dy = std::abs(a.row - b.row);
    const int diag = std::min(dx, dy);
    return {std::max(dx, dy) - diag, diag};
}

bool passable(CellState state, UnknownPolicy policy) {
    if (state == CellState::occupied) return false;
    return state == CellState::free || policy == UnknownPolicy::traversable;
}

namespace {

constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};

struct Search {
    const OccupancyMap& occ;
    UnknownPolicy policy;
    std::vector<std::uint8_t> states;

    bool open(Cell c) const {
        return occ.spec().contains(c) &&
               passable(static_cast<CellState>(states[occ.spec().index(c)]), policy);
    }

    template <typename Fn>
    void for_each_move(Cell c, Fn&& fn) const {
        for (int k = 0; k < 8; ++k) {
            const Cell n{c.col + kDc[k], c.row + kDr[k]};
            if (!open(n)) continue;
            const bool diagonal = k >= 4;
            if (diagonal && (!open({c.col + kDc[k], c.row}) || !open({c.col, c.row + kDr[k]}))) {
                continue;
            }
            fn(n, diagonal ? OctileCost{0, 1} : OctileCost{1, 0});
        }
    }
};

void check_start(const OccupancyMap& occ, Cell from) {
    if (!occ.spec().contains(from)) throw Error("plan_path: start outside grid");
    if (occ.state(from) == CellState::occupied) throw Error("plan_path: start cell is occupied");
}

}  // namespace

std::optional<GridPath> plan_path(const OccupancyMap& occ, Cell from, Cell to, UnknownPolicy policy) {
    check_start(occ, from);
    const GridSpec& spec = occ.spec();
    if (!spec.contains(to)) throw Error("plan_path: goal outside grid");
    if (from == to) return GridPath{{from}, {}};

    Search search{occ, policy, occ.states()};
    if (!search.open(to)) return std::nullopt;

    const std::size_t n = spec.cell_count();
    std::vector<std::optional<OctileCost>> g(n);
    std::vector<std::int64_t> parent(n, -1);
    std::vector<bool> closed(n, false);

    struct Node {
        OctileCost f, h;
        std::size_t index;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (b.f < a.f) return true;
        if (a.f < b.f) return false;
        if (b.h < a.h) return true;
        if (a.h < b.h) return false;
        return a.index > b.index;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> heap(worse);

    const std::size_t start = spec.index(from);
    const std::size_t goal = spec.index(to);
    g[start] = OctileCost{};
    heap.push({octile_distance(from, to), octile_distance(from, to), start});
    while (!heap.empty()) {
        const Node node = heap.top();
        heap.pop();
        if (closed[node.index]) continue;
        closed[node.index] = true;
        if (node.index == goal) break;
        const Cell c = spec.cell_at(node.index);
        const OctileCost gc = *g[node.index];
        search.for_each_move(c, [&](Cell nb, OctileCost step) {
            const std::size_t j = spec.index(nb);
            if (closed[j]) return;
            const OctileCost cand = gc + step;
            if (!g[j] || cand < *g[j]) {
                g[j] = cand;
                parent[j] = static_cast<std::int64_t>(node.index);
                const OctileCost h = octile_distance(nb, to);
                heap.push({cand + h, h, j});
            }
        });
    }
    if (!closed[goal]) return std::nullopt;

    GridPath path;
    path.cost = *g[goal];
    for (std::int64_t i = static_cast<std::int64_t>(goal); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
        path.cells.push_back(spec.cell_at(static_cast<std::size_t>(i)));
    }
    std::reverse(path.cells.begin(), path.cells.end());
    return path;
}

std::vector<std::optional<OctileCost>> path_distances(const OccupancyMap& occ, Cell from,
                                                      UnknownPolicy policy) {
    check_start(occ, from);
    const GridSpec& spec = occ.spec();
    Search search{occ, policy, occ.states()};
    std::vector<std::optional<OctileCost>> dist(spec.cell_count());

    using Entry = std::pair<OctileCost, std::size_t>;
    auto worse = [](const Entry& a, const Entry& b) {
        if (b.first < a.first) return true;
        if (a.first < b.first) return false;
        return a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    std::vector<bool> closed(spec.cell_count(), false);
    dist[spec.index(from)] = OctileCost{};
    heap.push({OctileCost{}, spec.index(from)});
    while (!heap.empty()) {
        const auto [d, i] = heap.top();
        heap.pop();
        if (closed[i]) continue;
        closed[i] = true;
        search.for_each_move(spec.cell_at(i), [&](Cell nb, OctileCost step) {
            const std::size_t j = spec.index(nb);
            const OctileCost cand = d + step;
            if (!dist[j] || cand < *dist[j]) {
                dist[j] = cand;
                heap.push({cand, j});
            }
        });
    }
    return dist;
}

}  // namespace banditnav
