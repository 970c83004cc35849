#pragma once
// Binary map snapshot ("GSMAP1"): magic, u32 width, u32 height, f64
// resolution, f64 origin_x, f64 origin_y, then width*height f64 log-odds,
// means and variances, each layer row-major. All values little-endian.

#include <string>
#include <vector>

#include "banditnav/occupancy_map.hpp"
#include "banditnav/semantic_map.hpp"

namespace banditnav {

class SnapshotError : public Error {
public:
    enum class Kind { version, truncated, dimension, io };
    SnapshotError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct MapSnapshot {
    OccupancyMap occupancy;
    SemanticMap semantic;
};

std::vector<unsigned char> encode_snapshot(const OccupancyMap& occ, const SemanticMap& sem);
MapSnapshot decode_snapshot(const std::vector<unsigned char>& bytes);

void save_snapshot(const std::string& path, const OccupancyMap& occ, const SemanticMap& sem);
MapSnapshot load_snapshot(const std::string& path);

}  // namespace banditnav
