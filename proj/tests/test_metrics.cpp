#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "safecritic/errors.hpp"
#include "safecritic/metrics.hpp"
#include "safecritic/sim.hpp"

using namespace sc;

namespace {

Path random_path(Rng& rng, std::size_t len) {
    Path p;
    for (std::size_t i = 0; i < len; ++i)
        p.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    return p;
}

}  // namespace

TEST_CASE("made: exact sample gives zero; constant (0.3, 0.4) offset gives 0.5") {
    Rng rng(1);
    const Path truth = random_path(rng, 12);
    CHECK(made(truth, {truth}) == 0.0);

    Path offset = truth;
    for (Vec2& p : offset) p += Vec2{0.3, 0.4};
    CHECK(made(truth, {offset}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mfde(truth, {offset}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mfde: final offset (0, 1) gives exactly 1; zero iff an endpoint matches") {
    Rng rng(2);
    const Path truth = random_path(rng, 12);
    Path s = random_path(rng, 12);
    s.back() = truth.back() + Vec2{0.0, 1.0};
    CHECK(mfde(truth, {s}) == doctest::Approx(1.0).epsilon(1e-12));
    s.back() = truth.back();
    CHECK(mfde(truth, {s}) == 0.0);
}

TEST_CASE("made/mfde match loop-based recomputation within 1e-12 on 1000 random cases") {
    Rng rng(3);
    for (int it = 0; it < 1000; ++it) {
        const std::size_t len = 2 + rng.index(15);
        const std::size_t k = 1 + rng.index(8);
        const Path truth = random_path(rng, len);
        std::vector<Path> samples;
        for (std::size_t i = 0; i < k; ++i) samples.push_back(random_path(rng, len));

        double best_ade = 1e300, best_fde = 1e300;
        for (const Path& s : samples) {
            double acc = 0;
            for (std::size_t t = 0; t < len; ++t)
                acc += std::hypot(s[t].x - truth[t].x, s[t].y - truth[t].y);
            best_ade = std::min(best_ade, acc / static_cast<double>(len));
            best_fde = std::min(best_fde,
                                std::hypot(s.back().x - truth.back().x,
                                           s.back().y - truth.back().y));
        }
        std::size_t argmin = 999;
        CHECK(std::abs(made(truth, samples, &argmin) - best_ade) <= 1e-12);
        CHECK(argmin < k);
        CHECK(std::abs(mfde(truth, samples) - best_fde) <= 1e-12);
    }
}

TEST_CASE("made is monotone non-increasing in nested sample sets") {
    Rng rng(4);
    const Path truth = random_path(rng, 12);
    std::vector<Path> samples;
    double prev = 1e300;
    for (int k = 1; k <= 10; ++k) {
        samples.push_back(random_path(rng, 12));
        const double v = made(truth, samples);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("diversity: identical samples flag mode collapse with 0; two samples 2 m apart give 2") {
    Rng rng(5);
    const Path p = random_path(rng, 12);
    CHECK(diversity({p, p, p}) == 0.0);

    Path q = p;
    q.back() = p.back() + Vec2{2.0, 0.0};
    CHECK(diversity({p, q}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("diversity is invariant under sample permutation and needs K >= 2") {
    Rng rng(6);
    std::vector<Path> samples;
    for (int i = 0; i < 5; ++i) samples.push_back(random_path(rng, 8));
    const double before = diversity(samples);
    std::reverse(samples.begin(), samples.end());
    CHECK(diversity(samples) == doctest::Approx(before).epsilon(1e-12));
    CHECK_THROWS_AS(diversity({samples[0]}), DataError);
}

TEST_CASE("metrics reject empty or mismatched inputs") {
    Rng rng(7);
    const Path truth = random_path(rng, 12);
    CHECK_THROWS_AS(made(truth, {}), DataError);
    CHECK_THROWS_AS(made(truth, {random_path(rng, 11)}), DataError);
}

TEST_CASE("evaluate: NC equals the collision engine's count on the same predictions") {
    // end-to-end over a tiny model; the reported nc_total must be the mean of
    // count_collisions over the sampled rollouts with the same epsilon
    ModelConfig mc;
    mc.hidden = 8;
    mc.noise_dim = 2;
    mc.score_hidden = 4;
    SafeCriticModel model(mc);
    SimConfig sim = preset_config("crossing");
    sim.num_scenes = 2;
    sim.seed = 33;
    const auto scenes = simulate(sim).scenes;

    Rng eval_rng(77);
    const EvalResult res = evaluate(model, scenes, 4, 0.5, eval_rng);
    REQUIRE(res.per_scene.size() == 2);

    Rng again(77);
    for (const auto& se : res.per_scene) CHECK(se.nc_per_frame ==
                                               doctest::Approx(se.nc_total / 12.0));
    for (std::size_t s = 0; s < scenes.size(); ++s) {
        const PredictionSet set = model.sample_set(scenes[s], 4, again, false);
        double nc = 0;
        for (const auto& sample : set.samples)
            nc += static_cast<double>(count_collisions(sample.paths, 0.5).nc());
        CHECK(res.per_scene[s].nc_total == doctest::Approx(nc / 4.0).epsilon(1e-12));
        CHECK(res.per_scene[s].nc_per_agent ==
              doctest::Approx(res.per_scene[s].nc_total /
                              static_cast<double>(scenes[s].agents.size())));
    }

    // aggregate is the unweighted scene mean
    CHECK(res.aggregate.made ==
          doctest::Approx((res.per_scene[0].made + res.per_scene[1].made) / 2.0));
    CHECK(res.aggregate.made >= 0.0);
    CHECK(std::isfinite(res.aggregate.diversity));
}
