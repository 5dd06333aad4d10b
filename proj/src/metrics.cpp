#include "safecritic/metrics.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "safecritic/data.hpp"
#include "safecritic/errors.hpp"

namespace sc {

namespace {

void check_lengths(const Path& truth, const std::vector<Path>& samples) {
    if (samples.empty()) throw DataError("metrics: empty sample set");
    if (truth.empty()) throw DataError("metrics: empty ground truth");
    for (const Path& s : samples)
        if (s.size() != truth.size())
            throw DataError("metrics: sample/truth length mismatch");
}

}  // namespace

double made(const Path& truth, const std::vector<Path>& samples,
            std::size_t* argmin_out) {
    check_lengths(truth, samples);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < truth.size(); ++t)
            acc += distance(samples[k][t], truth[t]);
        const double ade = acc / static_cast<double>(truth.size());
        if (ade < best) {
            best = ade;
            best_k = k;
        }
    }
    if (argmin_out) *argmin_out = best_k;
    return best;
}

double mfde(const Path& truth, const std::vector<Path>& samples,
            std::size_t* argmin_out) {
    check_lengths(truth, samples);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double fde = distance(samples[k].back(), truth.back());
        if (fde < best) {
            best = fde;
            best_k = k;
        }
    }
    if (argmin_out) *argmin_out = best_k;
    return best;
}

double diversity(const std::vector<Path>& samples) {
    if (samples.size() < 2) throw DataError("diversity: needs K >= 2 samples");
    double acc = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < samples.size(); ++a)
        for (std::size_t b = a + 1; b < samples.size(); ++b) {
            acc += distance(samples[a].back(), samples[b].back());
            ++pairs;
        }
    return acc / static_cast<double>(pairs);
}

EvalResult evaluate(const SafeCriticModel& model, const std::vector<Scene>& scenes,
                    std::size_t k, double epsilon_m, Rng& rng) {
    if (scenes.empty()) throw DataError("evaluate: no scenes");
    if (k == 0) throw DataError("evaluate: k must be >= 1");
    EvalResult result;
    result.k_eval = k;
    result.epsilon_m = epsilon_m;

    for (const Scene& scene : scenes) {
        const PredictionSet set = model.sample_set(scene, k, rng, /*with_scores=*/false);
        const std::size_t n = scene.agents.size();

        // ground truth future positions (without the anchor point)
        std::vector<Path> truth(n), gt_full(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Path full = scene.agents[i].positions();
            gt_full[i] = full;
            truth[i] = Path(full.begin() + static_cast<long>(kTObs), full.end());
        }

        SceneEval se;
        se.scene_id = scene.scene_id;
        se.video_id = scene.video_id;
        se.num_agents = n;

        double made_acc = 0.0, mfde_acc = 0.0, div_acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Path> per_agent;
            per_agent.reserve(k);
            for (const PredictionSample& s : set.samples)
                per_agent.push_back(
                    Path(s.paths[i].begin() + 1, s.paths[i].end()));  // drop anchor
            made_acc += made(truth[i], per_agent);
            mfde_acc += mfde(truth[i], per_agent);
            if (k >= 2) div_acc += diversity(per_agent);
        }
        se.made = made_acc / static_cast<double>(n);
        se.mfde = mfde_acc / static_cast<double>(n);
        se.diversity = k >= 2 ? div_acc / static_cast<double>(n) : 0.0;

        double nc_acc = 0.0;
        for (const PredictionSample& s : set.samples)
            nc_acc += static_cast<double>(count_collisions(s.paths, epsilon_m).nc());
        se.nc_total = nc_acc / static_cast<double>(k);
        se.nc_per_agent = se.nc_total / static_cast<double>(n);
        se.nc_per_frame = se.nc_total / static_cast<double>(kTPred);
        se.gt_nc = static_cast<double>(count_collisions(gt_full, epsilon_m).nc());

        if (!std::isfinite(se.made) || !std::isfinite(se.mfde))
            throw NumericError("evaluate: non-finite metric on scene " + scene.scene_id);
        result.per_scene.push_back(std::move(se));
    }

    SceneEval agg;
    agg.scene_id = "aggregate";
    const double inv = 1.0 / static_cast<double>(result.per_scene.size());
    for (const SceneEval& se : result.per_scene) {
        agg.num_agents += se.num_agents;
        agg.made += se.made * inv;
        agg.mfde += se.mfde * inv;
        agg.nc_total += se.nc_total * inv;
        agg.nc_per_agent += se.nc_per_agent * inv;
        agg.nc_per_frame += se.nc_per_frame * inv;
        agg.diversity += se.diversity * inv;
        agg.gt_nc += se.gt_nc * inv;
    }
    result.aggregate = agg;
    return result;
}

void EvalResult::write_csv(std::ostream& os) const {
    os << "scene_id,video_id,num_agents,made,mfde,nc_total,nc_per_agent,"
          "nc_per_frame,diversity,gt_nc,k_eval,epsilon_m\n";
    auto line = [&](const SceneEval& se) {
        os << se.scene_id << "," << se.video_id << "," << se.num_agents << ","
           << se.made << "," << se.mfde << "," << se.nc_total << ","
           << se.nc_per_agent << "," << se.nc_per_frame << "," << se.diversity << ","
           << se.gt_nc << "," << k_eval << "," << epsilon_m << "\n";
    };
    line(aggregate);
    for (const SceneEval& se : per_scene) line(se);
}

}  // namespace sc
