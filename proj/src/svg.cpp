#include "safecritic/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "safecritic/errors.hpp"

namespace sc {

namespace {

constexpr double kScale = 40.0;  // pixels per meter
constexpr double kPad = 20.0;

struct Frame {
    double min_x, min_y, max_x, max_y;
    double px(double x) const { return kPad + (x - min_x) * kScale; }
    // SVG y grows downwards; flip so world +y is up
    double py(double y) const { return kPad + (max_y - y) * kScale; }
    double width() const { return 2 * kPad + (max_x - min_x) * kScale; }
    double height() const { return 2 * kPad + (max_y - min_y) * kScale; }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::fixed << v;
    return os.str();
}

std::string polyline(const Frame& f, const Path& p, const std::string& style) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << " ";
        os << fmt(f.px(p[i].x)) << "," << fmt(f.py(p[i].y));
    }
    os << "\"/>\n";
    return os.str();
}

std::string star(const Frame& f, Vec2 c, double r, const std::string& fill) {
    std::ostringstream os;
    os << "<polygon fill=\"" << fill << "\" points=\"";
    for (int k = 0; k < 10; ++k) {
        const double ang = -M_PI / 2 + k * M_PI / 5;
        const double rad = (k % 2 == 0) ? r : 0.4 * r;
        if (k) os << " ";
        os << fmt(f.px(c.x) + rad * std::cos(ang)) << ","
           << fmt(f.py(c.y) + rad * std::sin(ang));
    }
    os << "\"/>\n";
    return os.str();
}

const char* kClassFill[] = {"#ffffff", "#9e9e9e", "#a5d6a7", "#e0e0e0", "#f5f5dc"};

const char* kSampleStroke[] = {"#e53935", "#fb8c00", "#fdd835", "#43a047",
                               "#1e88e5", "#8e24aa", "#00acc1", "#6d4c41"};

}  // namespace

std::string svg_scene_overlay(const Scene& scene, const PredictionSet& predictions) {
    if (scene.agents.empty()) throw DataError("svg_scene_overlay: empty scene");
    Frame f{1e300, 1e300, -1e300, -1e300};
    auto grow = [&](Vec2 p) {
        f.min_x = std::min(f.min_x, p.x);
        f.min_y = std::min(f.min_y, p.y);
        f.max_x = std::max(f.max_x, p.x);
        f.max_y = std::max(f.max_y, p.y);
    };
    for (const Trajectory& a : scene.agents)
        for (Vec2 p : a.positions()) grow(p);
    for (const PredictionSample& s : predictions.samples)
        for (const Path& p : s.paths)
            for (Vec2 v : p) grow(v);
    f.min_x -= 0.5; f.min_y -= 0.5; f.max_x += 0.5; f.max_y += 0.5;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(f.width())
       << "\" height=\"" << fmt(f.height()) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";

    if (scene.map) {
        const StaticMap& m = *scene.map;
        for (std::size_t r = 0; r < m.height; ++r)
            for (std::size_t c = 0; c < m.width; ++c) {
                const int cls = m.grid[r * m.width + c];
                if (cls <= 0) continue;
                const double x0 = m.origin.x + c * m.cell_size_m;
                const double y0 = m.origin.y + r * m.cell_size_m;
                const char* fill =
                    cls < 5 ? kClassFill[cls] : "#ce93d8";
                os << "<rect x=\"" << fmt(f.px(x0)) << "\" y=\""
                   << fmt(f.py(y0 + m.cell_size_m)) << "\" width=\""
                   << fmt(m.cell_size_m * kScale) << "\" height=\""
                   << fmt(m.cell_size_m * kScale) << "\" fill=\"" << fill
                   << "\" opacity=\"0.6\"/>\n";
            }
    }

    for (std::size_t i = 0; i < scene.agents.size(); ++i) {
        const Path full = scene.agents[i].positions();
        const Path obs(full.begin(), full.begin() + static_cast<long>(kTObs));
        const Path fut(full.begin() + static_cast<long>(kTObs) - 1, full.end());
        for (std::size_t k = 0; k < predictions.samples.size(); ++k) {
            const std::string stroke = kSampleStroke[k % 8];
            os << polyline(f, predictions.samples[k].paths[i],
                           "stroke=\"" + stroke + "\" stroke-width=\"1\" opacity=\"0.7\"");
        }
        os << polyline(f, obs, "stroke=\"#212121\" stroke-width=\"2.5\"");
        os << polyline(f, fut,
                       "stroke=\"#212121\" stroke-width=\"1.5\" stroke-dasharray=\"5,4\"");
        os << star(f, full.back(), 7.0, "#fbc02d");
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_attention_heatmap(const Tensor& weights, std::size_t rows,
                                  std::size_t cols, const std::string& title) {
    if (weights.size() != rows * cols)
        throw DataError("svg_attention_heatmap: weight/grid size mismatch");
    const double cell = 32.0;
    double max_w = 0.0;
    for (double w : weights.data) max_w = std::max(max_w, w);
    if (max_w <= 0.0) max_w = 1.0;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell
       << "\" height=\"" << rows * cell + 24 << "\">\n";
    os << "<text x=\"4\" y=\"16\" font-family=\"monospace\" font-size=\"12\">" << title
       << "</text>\n";
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double w = weights.data[r * cols + c] / max_w;
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - w)));
            os << "<rect x=\"" << c * cell << "\" y=\""
               << (rows - 1 - r) * cell + 24 << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"rgb(255," << shade << ","
               << shade << ")\" stroke=\"#bdbdbd\"/>\n";
        }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

}  // namespace sc
