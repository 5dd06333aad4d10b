#include "safecritic/data.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "safecritic/errors.hpp"

namespace sc {

Path Trajectory::positions() const {
    Path out;
    out.reserve(displacements.size() + 1);
    Vec2 p = anchor;
    out.push_back(p);
    for (const Vec2& d : displacements) {
        p += d;
        out.push_back(p);
    }
    return out;
}

Trajectory to_displacements(int agent_id, const Path& positions) {
    if (positions.size() < 2)
        throw DataError("to_displacements: trajectory needs at least 2 positions");
    Trajectory t;
    t.agent_id = agent_id;
    t.anchor = positions.front();
    t.displacements.reserve(positions.size() - 1);
    for (std::size_t i = 1; i < positions.size(); ++i)
        t.displacements.push_back(positions[i] - positions[i - 1]);
    return t;
}

std::vector<Path> Scene::agent_paths() const {
    std::vector<Path> out;
    out.reserve(agents.size());
    for (const auto& a : agents) out.push_back(a.positions());
    return out;
}

std::vector<Scene> load_trajnet(const std::string& path,
                                std::shared_ptr<const StaticMap> map) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open trajectory file: " + path);

    struct Row {
        long long frame;
        int agent;
        Vec2 pos;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        Row r;
        double frame_raw;
        if (!(ls >> frame_raw >> r.agent >> r.pos.x >> r.pos.y))
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed row");
        r.frame = static_cast<long long>(frame_raw);
        rows.push_back(r);
    }

    // per-agent frame monotonicity
    std::map<int, long long> last_frame;
    for (const auto& r : rows) {
        auto it = last_frame.find(r.agent);
        if (it != last_frame.end() && r.frame <= it->second)
            throw DataError(path + ": non-monotonic frames for agent " +
                            std::to_string(r.agent));
        last_frame[r.agent] = r.frame;
    }

    std::vector<long long> frames;
    for (const auto& r : rows) frames.push_back(r.frame);
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

    std::map<long long, std::size_t> frame_index;
    for (std::size_t i = 0; i < frames.size(); ++i) frame_index[frames[i]] = i;

    // agent -> (frame index -> position)
    std::map<int, std::map<std::size_t, Vec2>> tracks;
    for (const auto& r : rows) tracks[r.agent][frame_index[r.frame]] = r.pos;

    const std::string video = std::filesystem::path(path).stem().string();
    std::vector<Scene> scenes;
    if (frames.size() < kWindowFrames) return scenes;
    for (std::size_t start = 0; start + kWindowFrames <= frames.size(); ++start) {
        Scene s;
        s.video_id = video;
        s.scene_id = video + ":" + std::to_string(start);
        s.map = map;
        for (const auto& [agent, track] : tracks) {
            Path p;
            bool complete = true;
            for (std::size_t t = 0; t < kWindowFrames; ++t) {
                auto it = track.find(start + t);
                if (it == track.end()) {
                    complete = false;
                    break;
                }
                p.push_back(it->second);
            }
            if (complete) s.agents.push_back(to_displacements(agent, p));
        }
        if (!s.agents.empty()) scenes.push_back(std::move(s));
    }
    return scenes;
}

void save_trajnet(const std::vector<Scene>& scenes, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write trajectory file: " + path);
    char buf[128];
    for (std::size_t k = 0; k < scenes.size(); ++k) {
        const long long frame_base = static_cast<long long>(k) * 1000;
        const int agent_base = static_cast<int>(k) * 1000;
        for (std::size_t a = 0; a < scenes[k].agents.size(); ++a) {
            const Path p = scenes[k].agents[a].positions();
            for (std::size_t t = 0; t < p.size(); ++t) {
                std::snprintf(buf, sizeof(buf), "%lld\t%d\t%.17g\t%.17g\n",
                              frame_base + static_cast<long long>(t),
                              agent_base + static_cast<int>(a), p[t].x, p[t].y);
                f << buf;
            }
        }
    }
}

std::vector<std::string> video_ids(const std::vector<Scene>& scenes) {
    std::set<std::string> ids;
    for (const auto& s : scenes) ids.insert(s.video_id);
    return {ids.begin(), ids.end()};
}

std::pair<std::vector<Scene>, std::vector<Scene>> leave_one_out(
    const std::vector<Scene>& scenes, const std::string& held_out_video) {
    const auto ids = video_ids(scenes);
    if (ids.size() < 2) throw DataError("leave_one_out: need at least 2 videos");
    if (std::find(ids.begin(), ids.end(), held_out_video) == ids.end())
        throw DataError("leave_one_out: unknown video id " + held_out_video);
    std::vector<Scene> train, test;
    for (const auto& s : scenes) {
        Scene c = s;
        if (s.video_id == held_out_video) {
            c.split = "test";
            test.push_back(std::move(c));
        } else {
            c.split = "train";
            train.push_back(std::move(c));
        }
    }
    return {std::move(train), std::move(test)};
}

}  // namespace sc
