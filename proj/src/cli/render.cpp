#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "banditnav/cli.hpp"

namespace banditnav::cli {

namespace fs = std::filesystem;

std::string_view to_string(Layer layer) {
    switch (layer) {
        case Layer::occupancy: return "occupancy";
        case Layer::relevance_mean: return "relevance_mean";
        case Layer::relevance_var: return "relevance_var";
        case Layer::trajectory: return "trajectory";
    }
    return "unknown";
}

std::optional<Layer> parse_layer(std::string_view name) {
    for (Layer l : {Layer::occupancy, Layer::relevance_mean, Layer::relevance_var, Layer::trajectory}) {
        if (name == to_string(l)) return l;
    }
    return std::nullopt;
}

std::vector<std::uint8_t> encode_pnm(const Image& image) {
    std::ostringstream header;
    header << (image.channels == 1 ? "P5" : "P6") << '\n'
           << image.width << ' ' << image.height << '\n'
           << "255\n";
    const std::string h = header.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

namespace {

Image gray_image(const GridSpec& spec) {
    return {spec.width, spec.height, 1,
            std::vector<std::uint8_t>(spec.cell_count(), 0)};
}

/// Image row of grid row `row`: north up.
int image_row(const GridSpec& spec, int row) { return spec.height - 1 - row; }

Image scalar_layer(const GridSpec& spec, std::span<const double> values) {
    Image img = gray_image(spec);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const bool flat = *lo == *hi;
    for (int r = 0; r < spec.height; ++r) {
        for (int c = 0; c < spec.width; ++c) {
            const double v = values[spec.index({c, r})];
            *img.at(c, image_row(spec, r)) =
                flat ? 128 : static_cast<std::uint8_t>(std::lround(255.0 * (v - *lo) / (*hi - *lo)));
        }
    }
    return img;
}

void plot(Image& img, const GridSpec& spec, Cell c, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (!spec.contains(c)) return;
    std::uint8_t* p = img.at(c.col, image_row(spec, c.row));
    p[0] = r;
    p[1] = g;
    p[2] = b;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(kExitIo, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

MapSnapshot read_snapshot(const fs::path& path) {
    try {
        return decode_snapshot(read_file(path));
    } catch (const SnapshotError& e) {
        throw CliError(kExitIo, "'" + path.string() + "': " + e.what());
    }
}

}  // namespace

Image render_layer(const MapSnapshot& snap, Layer layer) {
    const GridSpec& spec = snap.occupancy.spec();
    switch (layer) {
        case Layer::occupancy: {
            Image img = gray_image(spec);
            for (int r = 0; r < spec.height; ++r) {
                for (int c = 0; c < spec.width; ++c) {
                    const CellState s = snap.occupancy.state(Cell{c, r});
                    *img.at(c, image_row(spec, r)) =
                        s == CellState::unknown ? 128 : s == CellState::free ? 255 : 0;
                }
            }
            return img;
        }
        case Layer::relevance_mean: return scalar_layer(spec, snap.semantic.means());
        case Layer::relevance_var: return scalar_layer(spec, snap.semantic.variances());
        case Layer::trajectory: break;
    }
    throw Error("render_layer: the trajectory layer needs an episode record");
}

Image render_trajectory(const MapSnapshot& snap, const std::vector<Pose>& trajectory) {
    const GridSpec& spec = snap.occupancy.spec();
    const Image gray = render_layer(snap, Layer::occupancy);
    Image img{gray.width, gray.height, 3, {}};
    img.pixels.reserve(gray.pixels.size() * 3);
    for (std::uint8_t v : gray.pixels) img.pixels.insert(img.pixels.end(), {v, v, v});

    std::vector<Cell> cells;
    for (const Pose& p : trajectory) {
        if (const auto c = world_to_grid(p.position, spec)) cells.push_back(*c);
    }
    // Bresenham between consecutive cells.
    for (std::size_t i = 1; i < cells.size(); ++i) {
        Cell a = cells[i - 1];
        const Cell b = cells[i];
        const int dx = std::abs(b.col - a.col), sx = a.col < b.col ? 1 : -1;
        const int dy = -std::abs(b.row - a.row), sy = a.row < b.row ? 1 : -1;
        int err = dx + dy;
        while (true) {
            plot(img, spec, a, 255, 0, 0);
            if (a == b) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                a.col += sx;
            }
            if (e2 <= dx) {
                err += dx;
                a.row += sy;
            }
        }
    }
    if (!cells.empty()) {
        plot(img, spec, cells.front(), 0, 200, 0);
        plot(img, spec, cells.back(), 0, 0, 255);
    }
    return img;
}

void cmd_render(const fs::path& in, Layer layer, const fs::path& out) {
    Image img;
    if (in.extension() == ".json") {
        const auto bytes = read_file(in);
        EpisodeRecord rec;
        try {
            rec = decode_episode_record(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
        } catch (const Error& e) {
            throw CliError(kExitIo, "'" + in.string() + "': " + e.what());
        }
        // Records live in <run>/episodes/, snapshot paths are relative to <run>.
        const fs::path run_dir = fs::absolute(in).parent_path().parent_path();
        const MapSnapshot snap = read_snapshot(run_dir / rec.snapshot);
        img = layer == Layer::trajectory ? render_trajectory(snap, rec.trajectory) : render_layer(snap, layer);
    } else {
        if (layer == Layer::trajectory) {
            throw CliError(kExitUsage, "--layer trajectory needs an episode record (.json) as --in");
        }
        img = render_layer(read_snapshot(in), layer);
    }
    const auto bytes = encode_pnm(img);
    std::ofstream f(out, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw CliError(kExitIo, "cannot write '" + out.string() + "'");
}

}  // namespace banditnav::cli
