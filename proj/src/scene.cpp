#include "safecritic/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "safecritic/errors.hpp"

namespace sc {

std::vector<std::string> default_static_classes() {
    return {"free", "building", "vegetation", "road", "sidewalk"};
}

int StaticMap::class_at(Vec2 world) const {
    const double gx = (world.x - origin.x) / cell_size_m;
    const double gy = (world.y - origin.y) / cell_size_m;
    if (gx < 0.0 || gy < 0.0) return 0;
    const auto cx = static_cast<std::size_t>(gx);
    const auto cy = static_cast<std::size_t>(gy);
    if (cx >= width || cy >= height) return 0;
    return grid[cy * width + cx];
}

int StaticMap::class_index(const std::string& name) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == name) return static_cast<int>(i);
    return -1;
}

StaticMap StaticMap::all_free(std::size_t w, std::size_t h, double cell, Vec2 origin) {
    StaticMap m;
    m.width = w;
    m.height = h;
    m.cell_size_m = cell;
    m.origin = origin;
    m.grid.assign(w * h, 0);
    return m;
}

StaticMap StaticMap::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open static map: " + path);
    StaticMap m;
    std::string header;
    if (!std::getline(f, header)) throw DataError("empty static map file: " + path);
    std::istringstream hs(header);
    std::string class_list;
    if (!(hs >> m.width >> m.height >> m.cell_size_m >> m.origin.x >> m.origin.y >> class_list))
        throw DataError("malformed static map header in " + path);
    if (m.cell_size_m <= 0.0) throw DataError("static map cell size must be positive: " + path);
    m.classes.clear();
    std::istringstream cs(class_list);
    std::string tok;
    while (std::getline(cs, tok, ',')) m.classes.push_back(tok);
    if (m.classes.empty() || m.classes[0] != "free")
        throw DataError("static map class list must start with 'free': " + path);
    m.grid.reserve(m.width * m.height);
    for (std::size_t r = 0; r < m.height; ++r) {
        std::string line;
        if (!std::getline(f, line))
            throw DataError("static map " + path + ": missing row " + std::to_string(r));
        std::istringstream ls(line);
        for (std::size_t c = 0; c < m.width; ++c) {
            int v;
            if (!(ls >> v) || v < 0 || static_cast<std::size_t>(v) >= m.classes.size())
                throw DataError("static map " + path + ": bad class index at row " +
                                std::to_string(r) + " col " + std::to_string(c));
            m.grid.push_back(v);
        }
    }
    return m;
}

void StaticMap::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write static map: " + path);
    f << width << " " << height << " " << cell_size_m << " " << origin.x << " " << origin.y
      << " ";
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (i) f << ",";
        f << classes[i];
    }
    f << "\n";
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            if (c) f << " ";
            f << grid[r * width + c];
        }
        f << "\n";
    }
}

int ego_cell_index(const EgoGridSpec& spec, Vec2 offset) {
    const double fr = std::floor((offset.y + spec.half_height()) / spec.cell_size_m);
    const double fc = std::floor((offset.x + spec.half_width()) / spec.cell_size_m);
    if (fr < 0.0 || fc < 0.0 || fr >= static_cast<double>(spec.rows) ||
        fc >= static_cast<double>(spec.cols))
        return -1;
    return static_cast<int>(fr) * static_cast<int>(spec.cols) + static_cast<int>(fc);
}

Tensor cell_center_offsets(const EgoGridSpec& spec) {
    Tensor out({spec.cells(), 2});
    for (std::size_t r = 0; r < spec.rows; ++r)
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const double ox =
                (static_cast<double>(c) + 0.5) * spec.cell_size_m - spec.half_width();
            const double oy =
                (static_cast<double>(r) + 0.5) * spec.cell_size_m - spec.half_height();
            out.at(r * spec.cols + c, 0) = ox / spec.half_width();
            out.at(r * spec.cols + c, 1) = oy / spec.half_height();
        }
    return out;
}

DynamicGrid build_dynamic_grid(Tape& tape, Vec2 agent_pos,
                               const std::vector<NeighborState>& neighbors,
                               const EgoGridSpec& spec, std::size_t hidden_size) {
    const std::size_t n = spec.cells();
    std::vector<Var> rows(n);            // invalid = zero row
    std::vector<double> best_dist(n, 0.0);
    DynamicGrid out;
    out.mask.assign(n, 0);

    for (const auto& nb : neighbors) {
        const Vec2 off = nb.pos - agent_pos;
        const int idx = ego_cell_index(spec, off);
        if (idx < 0) continue;
        const double d = off.norm();
        if (out.mask[idx] && best_dist[idx] <= d) continue;
        // leading occupancy + proximity channels let attention key on
        // nearby neighbors without decoding their hidden states
        rows[idx] = tape.concat(
            {tape.constant(Tensor::from({2}, {1.0, proximity(d)})), nb.hidden});
        best_dist[idx] = d;
        out.mask[idx] = 1;
    }
    out.cells = tape.stack_rows(hidden_size + 2, rows);
    return out;
}

Tensor build_static_grid(Vec2 agent_pos, const StaticMap& map, const EgoGridSpec& spec) {
    Tensor out({spec.cells(), map.classes.size()});
    for (std::size_t r = 0; r < spec.rows; ++r)
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const Vec2 center{
                agent_pos.x + (static_cast<double>(c) + 0.5) * spec.cell_size_m -
                    spec.half_width(),
                agent_pos.y + (static_cast<double>(r) + 0.5) * spec.cell_size_m -
                    spec.half_height()};
            out.at(r * spec.cols + c, static_cast<std::size_t>(map.class_at(center))) = 1.0;
        }
    return out;
}

SceneContext context_vectors(Tape& tape, ParamBinder& bind, const DynamicGrid& fd,
                             const Tensor& fs, Var agent_hidden,
                             const AttentionHead& dyn_head, const AttentionHead& stat_head,
                             const EgoGridSpec& spec) {
    const Tensor offsets = cell_center_offsets(spec);
    SceneContext ctx;
    ctx.dyn = dyn_head.forward(tape, bind, fd.cells, offsets, agent_hidden);
    ctx.stat = stat_head.forward(tape, bind, tape.constant(fs), offsets, agent_hidden);
    return ctx;
}

}  // namespace sc
