#pragma once

#include <string>

#include "safecritic/data.hpp"
#include "safecritic/model.hpp"

namespace sc {

// Deterministic SVG renderers used by the plot command and experiments.

// One scene: static map cells, observed trajectories (solid), ground-truth
// futures (dashed), K predicted futures (thin, per-sample hue) and a star at
// each agent's ground-truth endpoint.
std::string svg_scene_overlay(const Scene& scene, const PredictionSet& predictions);

// 8x8 (or any grid) attention weight heat map; weights is rank-1 of
// rows*cols entries, rendered row-major with row 0 at the bottom.
std::string svg_attention_heatmap(const Tensor& weights, std::size_t rows,
                                  std::size_t cols, const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sc
