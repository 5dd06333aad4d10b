#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "safecritic/model.hpp"
#include "safecritic/sim.hpp"

using namespace sc;

namespace {

ModelConfig tiny_config() {
    ModelConfig mc;
    mc.hidden = 8;
    mc.noise_dim = 3;
    mc.score_hidden = 4;
    return mc;
}

std::vector<Scene> tiny_scenes(std::size_t n, std::uint64_t seed,
                               std::size_t agents_max = 4) {
    SimConfig cfg = preset_config("crossing");
    cfg.num_scenes = n;
    cfg.agents_max = agents_max;
    cfg.seed = seed;
    return simulate(cfg).scenes;
}

}  // namespace

TEST_CASE("observed inputs: leading zero displacement plus the first 7 observed steps") {
    const auto scenes = tiny_scenes(1, 1);
    const Scene& s = scenes[0];
    const auto obs = SafeCriticModel::observed_inputs(s, 0);
    REQUIRE(obs.size() == 8);
    CHECK(obs[0].data[0] == 0.0);
    CHECK(obs[0].data[1] == 0.0);
    for (std::size_t t = 1; t < 8; ++t) {
        CHECK(obs[t].data[0] == s.agents[0].displacements[t - 1].x);
        CHECK(obs[t].data[1] == s.agents[0].displacements[t - 1].y);
    }
    // anchor = last observed position = position index 7
    const Path p = s.agents[0].positions();
    const Vec2 a = SafeCriticModel::anchor(s, 0);
    CHECK(a.x == p[7].x);
    CHECK(a.y == p[7].y);

    const auto fut = SafeCriticModel::future_deltas(s, 0);
    REQUIRE(fut.size() == 12);
    CHECK(fut[0].data[0] == s.agents[0].displacements[7].x);
    CHECK(fut[11].data[1] == s.agents[0].displacements[18].y);
}

TEST_CASE("zero generator output weights produce zero deltas and a frozen path") {
    ModelConfig mc = tiny_config();
    SafeCriticModel model(mc);
    // zero the decoder output head
    for (const auto& e : model.generator_params().entries())
        if (e.name.rfind("gen.out", 0) == 0)
            for (double& v : e.tensor->data) v = 0.0;

    const auto scenes = tiny_scenes(1, 2);
    Rng rng(1);
    const PredictionSet set = model.sample_set(scenes[0], 2, rng, false);
    for (const auto& sample : set.samples)
        for (std::size_t i = 0; i < sample.paths.size(); ++i) {
            const Vec2 a = SafeCriticModel::anchor(scenes[0], i);
            for (const Vec2& p : sample.paths[i]) {
                CHECK(p.x == a.x);
                CHECK(p.y == a.y);
            }
        }
}

TEST_CASE("sampling is deterministic given the rng seed") {
    SafeCriticModel model(tiny_config());
    const auto scenes = tiny_scenes(1, 3);
    Rng r1(42), r2(42), r3(43);
    const auto a = model.sample_set(scenes[0], 3, r1, false);
    const auto b = model.sample_set(scenes[0], 3, r2, false);
    const auto c = model.sample_set(scenes[0], 3, r3, false);
    bool same = true, diff = false;
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < a.samples[k].paths.size(); ++i)
            for (std::size_t t = 0; t < a.samples[k].paths[i].size(); ++t) {
                same = same && a.samples[k].paths[i][t].x == b.samples[k].paths[i][t].x &&
                       a.samples[k].paths[i][t].y == b.samples[k].paths[i][t].y;
                diff = diff || a.samples[k].paths[i][t].x != c.samples[k].paths[i][t].x;
            }
    CHECK(same);
    CHECK(diff);
}

TEST_CASE("different noise draws give different samples (no collapse at init)") {
    SafeCriticModel model(tiny_config());
    const auto scenes = tiny_scenes(1, 4);
    Rng rng(5);
    const auto set = model.sample_set(scenes[0], 4, rng, false);
    double spread = 0.0;
    for (std::size_t k = 1; k < set.samples.size(); ++k)
        for (std::size_t i = 0; i < set.samples[k].paths.size(); ++i)
            spread = std::max(spread, distance(set.samples[k].paths[i].back(),
                                               set.samples[0].paths[i].back()));
    CHECK(spread > 1e-6);
}

TEST_CASE("single-agent scene works end to end (no neighbors anywhere)") {
    SafeCriticModel model(tiny_config());
    SimConfig cfg = preset_config("crossing");
    cfg.num_scenes = 1;
    cfg.agents_min = cfg.agents_max = 1;
    cfg.seed = 6;
    const auto scenes = simulate(cfg).scenes;
    Rng rng(7);
    const auto set = model.sample_set(scenes[0], 3, rng, true);
    REQUIRE(set.samples.size() == 3);
    for (const auto& s : set.samples) {
        REQUIRE(s.paths.size() == 1);
        REQUIRE(s.paths[0].size() == 13);
        REQUIRE(s.critic_scores[0].size() == 12);
        for (double v : s.critic_scores[0]) CHECK(v >= 0.0);  // softplus head
        CHECK(s.disc_scores[0] > 0.0);
        CHECK(s.disc_scores[0] < 1.0);
    }
}

TEST_CASE("asr off and on differ; parameter stores are disjoint by prefix") {
    ModelConfig with = tiny_config(), without = tiny_config();
    without.use_asr = false;
    SafeCriticModel m1(with), m2(without);
    const auto scenes = tiny_scenes(1, 8);
    Rng r1(9), r2(9);
    const auto a = m1.sample_set(scenes[0], 1, r1, false);
    const auto b = m2.sample_set(scenes[0], 1, r2, false);
    double dev = 0;
    for (std::size_t i = 0; i < a.samples[0].paths.size(); ++i)
        dev = std::max(dev, distance(a.samples[0].paths[i].back(),
                                     b.samples[0].paths[i].back()));
    CHECK(dev > 1e-9);  // context contributes to the rollout

    for (const auto& e : m1.generator_params().entries())
        CHECK(e.name.rfind("gen.", 0) == 0);
    for (const auto& e : m1.discriminator_params().entries())
        CHECK(e.name.rfind("disc.", 0) == 0);
    for (const auto& e : m1.critic_params().entries())
        CHECK(e.name.rfind("critic.", 0) == 0);
    CHECK(m1.all_params().entries().size() ==
          m1.generator_params().entries().size() +
              m1.discriminator_params().entries().size() +
              m1.critic_params().entries().size());
}

TEST_CASE("attention snapshot weights form distributions over the grid") {
    SafeCriticModel model(tiny_config());
    const auto scenes = tiny_scenes(1, 10);
    Rng rng(11);
    const auto snap = model.attention_snapshot(scenes[0], 0, rng);
    double s1 = 0, s2 = 0;
    REQUIRE(snap.dyn_weights.size() == 64);
    REQUIRE(snap.stat_weights.size() == 64);
    for (double v : snap.dyn_weights.data) s1 += v;
    for (double v : snap.stat_weights.data) s2 += v;
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("model initialization is deterministic in init_seed") {
    ModelConfig mc = tiny_config();
    SafeCriticModel a(mc), b(mc);
    CHECK(a.all_params().checksum() == b.all_params().checksum());
    mc.init_seed = 999;
    SafeCriticModel c(mc);
    CHECK(a.all_params().checksum() != c.all_params().checksum());
}
