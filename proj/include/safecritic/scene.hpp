#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "safecritic/geom.hpp"
#include "safecritic/nn.hpp"
#include "safecritic/tape.hpp"
#include "safecritic/tensor.hpp"

namespace sc {

// Label vocabulary for static maps. Index 0 must stay "free": everything
// outside the map reads as free.
std::vector<std::string> default_static_classes();

struct StaticMap {
    Vec2 origin;           // world position of the map's lower-left corner
    double cell_size_m = 0.5;
    std::size_t width = 0;   // columns (x)
    std::size_t height = 0;  // rows (y)
    std::vector<std::string> classes = default_static_classes();
    std::vector<int> grid;   // height*width class indices, row-major, row 0 at origin.y

    int class_at(Vec2 world) const;  // outside the map -> 0 (free)
    int class_index(const std::string& name) const;  // -1 if unknown

    static StaticMap all_free(std::size_t w, std::size_t h, double cell, Vec2 origin = {});
    static StaticMap load(const std::string& path);
    void save(const std::string& path) const;
};

// Egocentric grid around one agent; agent sits at the grid center.
struct EgoGridSpec {
    std::size_t rows = 8;
    std::size_t cols = 8;
    double cell_size_m = 0.5;

    std::size_t cells() const { return rows * cols; }
    double half_height() const { return 0.5 * static_cast<double>(rows) * cell_size_m; }
    double half_width() const { return 0.5 * static_cast<double>(cols) * cell_size_m; }
};

// Cell index for a relative offset, or -1 when the offset falls outside.
int ego_cell_index(const EgoGridSpec& spec, Vec2 offset);

// (cells, 2) matrix of cell-center offsets divided by the grid half-extent.
Tensor cell_center_offsets(const EgoGridSpec& spec);

struct NeighborState {
    Vec2 pos;
    Var hidden;
};

// Gaussian proximity kernel shared by the grid features and the critic's
// pooled neighbor channel; sharp at collision range, negligible beyond ~1 m.
inline constexpr double kProxSigma = 0.2;  // m
inline double proximity(double dist_m) {
    return std::exp(-dist_m * dist_m / (2.0 * kProxSigma * kProxSigma));
}

// F_d: neighbor hidden states binned into the ego grid. Two neighbors in
// one cell keep the nearer one. Each occupied row is
// [1, proximity(dist), hidden...]; empty rows are zero.
struct DynamicGrid {
    Var cells;               // (rows*cols, hidden + 2) tape tensor
    std::vector<char> mask;  // occupancy per cell
};

DynamicGrid build_dynamic_grid(Tape& tape, Vec2 agent_pos,
                               const std::vector<NeighborState>& neighbors,
                               const EgoGridSpec& spec, std::size_t hidden_size);

// F_s: one-hot class rows sampled from the map at each ego cell center.
Tensor build_static_grid(Vec2 agent_pos, const StaticMap& map, const EgoGridSpec& spec);

struct SceneContext {
    AttentionHead::Result dyn;   // context (hidden), attention over cells
    AttentionHead::Result stat;  // context (classes), attention over cells
};

SceneContext context_vectors(Tape& tape, ParamBinder& bind, const DynamicGrid& fd,
                             const Tensor& fs, Var agent_hidden,
                             const AttentionHead& dyn_head, const AttentionHead& stat_head,
                             const EgoGridSpec& spec);

}  // namespace sc
