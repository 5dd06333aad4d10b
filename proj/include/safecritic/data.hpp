#pragma once

#include <memory>
#include <string>
#include <vector>

#include "safecritic/collision.hpp"
#include "safecritic/geom.hpp"
#include "safecritic/scene.hpp"

namespace sc {

// 2.5 Hz frame rate: 8 observed steps span 3.2 s, 12 predicted span 4.8 s.
inline constexpr std::size_t kTObs = 8;
inline constexpr std::size_t kTPred = 12;
inline constexpr std::size_t kWindowFrames = kTObs + kTPred;  // positions per window
inline constexpr double kFrameDt = 0.4;

// Displacement trajectory; positions recovered by prefix sum from the
// anchor (the first absolute position).
struct Trajectory {
    int agent_id = 0;
    Vec2 anchor;
    std::vector<Vec2> displacements;

    std::size_t steps() const { return displacements.size(); }
    Path positions() const;  // length steps()+1
};

// positions -> displacements; length drops by one. Throws on < 2 points.
Trajectory to_displacements(int agent_id, const Path& positions);

struct Scene {
    std::string scene_id;
    std::string video_id;
    std::string split;
    std::vector<Trajectory> agents;  // each spans kWindowFrames positions
    std::shared_ptr<const StaticMap> map;

    std::vector<Path> agent_paths() const;
};

// TrajNet-style TSV: rows (frame_id, agent_id, x, y), whitespace separated.
// Groups by agent, windows over kWindowFrames consecutive distinct frames
// (stride 1); agents without full coverage of a window are dropped, and
// windows with no fully covered agent are skipped.
std::vector<Scene> load_trajnet(const std::string& path,
                                std::shared_ptr<const StaticMap> map = nullptr);

// Inverse interchange: each scene gets a disjoint frame block and unique
// agent ids so that load_trajnet(save_trajnet(...)) is the identity on
// windowed scenes.
void save_trajnet(const std::vector<Scene>& scenes, const std::string& path);

// Leave-one-out split over video ids. Throws on unknown id or < 2 videos.
std::pair<std::vector<Scene>, std::vector<Scene>> leave_one_out(
    const std::vector<Scene>& scenes, const std::string& held_out_video);

std::vector<std::string> video_ids(const std::vector<Scene>& scenes);

}  // namespace sc
