// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// verdict line. Tolerances are pinned in the assertions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "safecritic/checkpoint.hpp"
#include "safecritic/data.hpp"
#include "safecritic/losses.hpp"
#include "safecritic/metrics.hpp"
#include "safecritic/sim.hpp"
#include "safecritic/trainer.hpp"

using namespace sc;
using sc::test::random_tensor;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void verdict(int criterion, bool pass, const std::string& detail) {
    printf("[criterion %d] %s  %s\n", criterion, pass ? "PASS" : "FAIL",
           detail.c_str());
    fflush(stdout);
}

ModelConfig small_model() {
    ModelConfig mc;
    mc.hidden = 16;
    mc.noise_dim = 4;
    mc.score_hidden = 8;
    return mc;
}

std::vector<Scene> sim_scenes(const std::string& preset, std::size_t n,
                              std::uint64_t seed) {
    SimConfig cfg = preset_config(preset);
    cfg.num_scenes = n;
    cfg.seed = seed;
    return simulate(cfg).scenes;
}

// Mann-Whitney AUC of scores for positive vs negative labels.
double auc(const std::vector<double>& pos, const std::vector<double>& neg) {
    double wins = 0;
    for (double p : pos)
        for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace

TEST_CASE("criterion 1: gradient fidelity < 1e-4, suite under 60 s") {
    const auto t0 = Clock::now();
    Rng rng(1);
    bool ok = true;
    auto fd_check = [&](const char* label, const std::vector<Tensor>& inputs,
                        const sc::test::LossBuilder& build, double tol = 1e-4) {
        Tape tape;
        std::vector<Var> leaves;
        for (const Tensor& t : inputs) leaves.push_back(tape.leaf(t));
        Var loss = build(tape, leaves);
        tape.backward(loss);
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const Tensor g = tape.grad(leaves[i]);
            for (std::size_t j = 0; j < inputs[i].size(); ++j) {
                auto eval = [&](double d) {
                    auto shifted = inputs;
                    shifted[i].data[j] += d;
                    Tape t2;
                    std::vector<Var> l2;
                    for (const Tensor& t : shifted) l2.push_back(t2.leaf(t));
                    return t2.val(build(t2, l2)).data[0];
                };
                const double h = 1e-6;
                const double fd = (eval(h) - eval(-h)) / (2 * h);
                const double denom = std::max({std::abs(fd), std::abs(g.data[j]), 1e-3});
                if (std::abs(fd - g.data[j]) > tol * denom + 1e-7) {
                    ok = false;
                    printf("  [criterion 1] %s input %zu[%zu]: fd=%.10g grad=%.10g\n",
                           label, i, j, fd, g.data[j]);
                }
            }
        }
    };

    // every differentiable op
    const Tensor a = random_tensor(rng, {5}), b = random_tensor(rng, {5});
    fd_check("elementwise", {a, b}, [](Tape& t, const std::vector<Var>& v) {
        return t.sum(t.mul(t.tanh(v[0]), t.sigmoid(v[1])));
    });
    fd_check("softplus-exp", {a}, [](Tape& t, const std::vector<Var>& v) {
        return t.sum(t.softplus(t.exp(t.scale(v[0], 0.3))));
    });
    fd_check("matmul", {random_tensor(rng, {3, 4}), random_tensor(rng, {4, 2})},
             [](Tape& t, const std::vector<Var>& v) {
                 return t.sum(t.tanh(t.matmul(v[0], v[1])));
             });
    const Tensor coeffs = random_tensor(rng, {5});
    fd_check("softmax", {a}, [&](Tape& t, const std::vector<Var>& v) {
        return t.sum(t.mul(t.softmax(v[0]), t.constant(coeffs)));
    });

    // MLP and attention
    {
        Rng r2(2);
        Mlp mlp(MlpSpec{{4, 6, 3}, {Activation::Relu, Activation::Tanh}}, r2, "m");
        fd_check("mlp", {random_tensor(rng, {4})}, [&](Tape& t, const std::vector<Var>& v) {
            ParamBinder bind(t);
            Var y = mlp.forward(t, bind, v[0]);
            return t.sum(t.mul(y, y));
        });

        const EgoGridSpec grid{4, 4, 0.5};
        AttentionHead head(3, 4, 5, r2, "att");
        const Tensor offsets = cell_center_offsets(grid);
        fd_check("attention", {random_tensor(rng, {grid.cells(), 3}), random_tensor(rng, {4})},
                 [&](Tape& t, const std::vector<Var>& v) {
                     ParamBinder bind(t);
                     auto res = head.forward(t, bind, v[0], offsets, v[1]);
                     return t.sum(t.mul(res.context, res.context));
                 });
    }

    // LSTM BPTT over the full 8 + 12 = 20 steps
    {
        Rng r2(3);
        LstmCell cell(2, 4, r2, "lstm");
        std::vector<Tensor> xs;
        for (int i = 0; i < 20; ++i) xs.push_back(random_tensor(rng, {2}, 0.5));
        std::vector<Tensor> flat;  // perturb the inputs
        flat.insert(flat.end(), xs.begin(), xs.end());
        fd_check("lstm-bptt", flat, [&](Tape& t, const std::vector<Var>& v) {
            ParamBinder bind(t);
            auto s = cell.zero_state(t);
            for (Var x : v) s = cell.step(t, bind, x, s);
            return t.sum(t.mul(s.h, s.h));
        });
    }

    // full generator loss (adversarial + best-of-K AE + critic regularizer)
    // differentiated with respect to a sample of generator parameters
    {
        ModelConfig mc;
        mc.hidden = 6;
        mc.noise_dim = 2;
        mc.score_hidden = 4;
        SafeCriticModel model(mc);
        const auto scenes = sim_scenes("crossing", 1, 9);
        const Scene& scene = scenes[0];
        std::vector<Tensor> noise0, noise1;
        Rng nz(4);
        for (std::size_t i = 0; i < scene.agents.size(); ++i) {
            noise0.push_back(nz.normal_vec(mc.noise_dim));
            noise1.push_back(nz.normal_vec(mc.noise_dim));
        }
        auto build_loss = [&](Tape& t, ParamBinder& bind) {
            auto u = model.encode(t, bind, scene, true);
            std::vector<Rollout> rollouts{model.decode(t, bind, scene, u, noise0, true),
                                          model.decode(t, bind, scene, u, noise1, true)};
            std::vector<Var> fakes;
            for (const auto& r : rollouts)
                for (std::size_t i = 0; i < scene.agents.size(); ++i)
                    fakes.push_back(model.discriminate(t, bind, scene, i, &r.deltas[i], true));
            Var g = t.bce(t.concat(fakes), Tensor::full({fakes.size()}, 1.0));
            Var ae = loss_autoencode(t, scene, rollouts);
            std::vector<std::vector<std::vector<Var>>> v_all;
            for (const auto& r : rollouts)
                v_all.push_back(model.criticise(t, bind, scene, r.deltas, r.paths, r.hiddens));
            Var reg = loss_critic_regularizer(t, v_all);
            return t.add(t.add(g, t.scale(ae, 0.5)), reg);
        };

        GradMap grads;
        {
            Tape t;
            ParamBinder bind(t);
            Var loss = build_loss(t, bind);
            t.backward(loss);
            grads = bind.collect(model.generator_params());
        }
        auto eval_loss = [&] {
            Tape tp;
            ParamBinder bind(tp);
            return tp.val(build_loss(tp, bind)).data[0];
        };
        Rng pick(5);
        const auto& entries = model.generator_params().entries();
        for (int trial = 0; trial < 25; ++trial) {
            const auto& e = entries[pick.index(entries.size())];
            if (!e.trainable || !grads.count(e.name)) continue;
            const std::size_t j = pick.index(e.tensor->size());
            const double h = 1e-6;
            e.tensor->data[j] += h;
            const double up = eval_loss();
            e.tensor->data[j] -= 2 * h;
            const double dn = eval_loss();
            e.tensor->data[j] += h;
            const double fd = (up - dn) / (2 * h);
            const double got = grads.at(e.name).data[j];
            const double denom = std::max({std::abs(fd), std::abs(got), 1e-3});
            if (std::abs(fd - got) > 1e-4 * denom + 1e-7) ok = false;
        }
    }

    const double dt = seconds_since(t0);
    verdict(1, ok && dt < 60.0,
            "gradient fidelity rel err < 1e-4; suite took " + std::to_string(dt) + " s");
    CHECK(ok);
    CHECK(dt < 60.0);
}

TEST_CASE("criterion 2: collision oracle equivalence on 500 random scenes") {
    Rng rng(2);
    bool ok = true;
    const StaticMap map = StaticMap::all_free(1, 1, 1.0);
    for (int scene = 0; scene < 500; ++scene) {
        const std::size_t n = 2 + rng.index(19);   // up to 20 agents
        const std::size_t steps = 12;
        std::vector<Path> paths(n);
        for (auto& p : paths) {
            Vec2 at{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            for (std::size_t t = 0; t < steps; ++t) {
                p.push_back(at);
                at += Vec2{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
            }
        }
        const auto rep = count_collisions(paths, 0.25);
        std::size_t brute = 0, later = 0;
        for (std::size_t t = 0; t < steps; ++t)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (distance(paths[i][t], paths[j][t]) < 0.25) {
                        ++brute;
                        if (t >= 1) ++later;
                    }
        if (rep.nc() != brute) ok = false;

        const RewardSignal r = reward_for(paths, map, {}, 0.25);
        double total = 0;
        for (const auto& row : r)
            for (double v : row) total += v;
        if (total != 2.0 * static_cast<double>(later)) ok = false;
    }
    verdict(2, ok, "count_collisions == brute force; reward identity exact");
    CHECK(ok);
}

TEST_CASE("criterion 3: metric oracles within 1e-12 on 1000 cases; mADE monotone") {
    Rng rng(3);
    bool ok = true;
    for (int it = 0; it < 1000; ++it) {
        const std::size_t len = 2 + rng.index(15);
        const std::size_t k = 2 + rng.index(7);
        Path truth;
        for (std::size_t i = 0; i < len; ++i)
            truth.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        std::vector<Path> samples(k);
        for (auto& s : samples)
            for (std::size_t i = 0; i < len; ++i)
                s.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});

        double best_ade = 1e300, best_fde = 1e300, div = 0;
        for (const Path& s : samples) {
            double acc = 0;
            for (std::size_t t = 0; t < len; ++t)
                acc += std::hypot(s[t].x - truth[t].x, s[t].y - truth[t].y);
            best_ade = std::min(best_ade, acc / static_cast<double>(len));
            best_fde = std::min(best_fde, std::hypot(s.back().x - truth.back().x,
                                                     s.back().y - truth.back().y));
        }
        std::size_t pairs = 0;
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = x + 1; y < k; ++y) {
                div += std::hypot(samples[x].back().x - samples[y].back().x,
                                  samples[x].back().y - samples[y].back().y);
                ++pairs;
            }
        div /= static_cast<double>(pairs);

        if (std::abs(made(truth, samples) - best_ade) > 1e-12) ok = false;
        if (std::abs(mfde(truth, samples) - best_fde) > 1e-12) ok = false;
        if (std::abs(diversity(samples) - div) > 1e-12) ok = false;

        // nested-K monotonicity
        double prev = 1e300;
        std::vector<Path> nested;
        for (const Path& s : samples) {
            nested.push_back(s);
            const double v = made(truth, nested);
            if (v > prev + 1e-15) ok = false;
            prev = v;
        }
    }
    verdict(3, ok, "mADE/mFDE/diversity == loop recomputation; min monotone in K");
    CHECK(ok);
}

TEST_CASE("criterion 4: critic separates colliding trajectories, AUC > 0.8, < 30 min") {
    const auto t0 = Clock::now();
    const auto train_set = sim_scenes("crossing", 2000, 41);
    SafeCriticModel model(small_model());
    TrainConfig tc;
    tc.k_train = 2;
    tc.batch_size = 8;
    tc.epochs = 3;
    tc.seed = 17;
    // The critic is trained purely on the collision oracle: disable the
    // safety regularizer so the generator cannot adapt around the critic
    // while it learns, bump the critic's learning rate, and weight the rare
    // colliding steps so the regression does not collapse to the zero
    // predictor.
    tc.lambda_critic = 0.0;
    tc.lr_critic = 3e-3;
    tc.critic_positive_weight = 100.0;
    Trainer trainer(model, tc);
    trainer.train(train_set, nullptr);

    // held-out generated rollouts, scored by the critic
    const auto held = sim_scenes("crossing", 200, 4242);
    std::vector<double> pos, neg;  // critic trajectory scores by true label
    Rng rng(91);
    for (const Scene& scene : held) {
        const PredictionSet set = model.sample_set(scene, 3, rng, true);
        for (const auto& sample : set.samples) {
            const auto rep = count_collisions(sample.paths, tc.epsilon_m);
            std::vector<char> collided(scene.agents.size(), 0);
            for (const auto& e : rep.dynamic_events) {
                collided[e.i] = 1;
                collided[e.j] = 1;
            }
            for (std::size_t i = 0; i < scene.agents.size(); ++i) {
                double score = 0;
                for (double v : sample.critic_scores[i]) score += v;
                (collided[i] ? pos : neg).push_back(score);
            }
        }
    }
    const double dt = seconds_since(t0);
    const bool has_both = !pos.empty() && !neg.empty();
    const double a = has_both ? auc(pos, neg) : 0.0;
    std::ostringstream os;
    os << "AUC=" << a << " (" << pos.size() << " colliding / " << neg.size()
       << " clean trajectories), " << dt << " s";
    verdict(4, has_both && a > 0.8 && dt < 1800.0, os.str());
    CHECK(has_both);
    CHECK(a > 0.8);
    CHECK(dt < 1800.0);
}

namespace {

struct ShortRun {
    double nc, made_v, diversity;
    double gen_checksum;
};

// Dense but conflict-free scenes: the simulator's repulsion is active, so
// ground-truth futures are full of neighbor reactions that can only be
// predicted from the scene representation.
std::vector<Scene> dense_safe_scenes(std::size_t n, std::uint64_t seed) {
    SimConfig cfg = preset_config("crossing");
    cfg.agents_min = 6;
    cfg.agents_max = 10;
    cfg.arena_half = 4.0;
    cfg.num_scenes = n;
    cfg.seed = seed;
    return simulate(cfg).scenes;
}

ShortRun context_arm(std::uint64_t seed, bool use_asr) {
    ModelConfig mc = small_model();
    mc.use_asr = use_asr;
    mc.init_seed = 100 + seed;
    SafeCriticModel model(mc);
    TrainConfig tc;
    tc.k_train = 3;
    tc.batch_size = 4;
    tc.epochs = 5;
    tc.seed = seed;
    Trainer trainer(model, tc);
    trainer.train(dense_safe_scenes(120, 500 + seed), nullptr);

    Rng eval_rng(7000 + seed);
    const EvalResult res =
        evaluate(model, dense_safe_scenes(30, 9000 + seed), 5, 0.10, eval_rng);
    return {res.aggregate.nc_total, res.aggregate.made, res.aggregate.diversity,
            model.generator_params().checksum()};
}

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace

namespace {

// Criterion 5 needs scenes whose ground truth actually contains conflicts to
// suppress: the densified unsafe preset gives ~3 generated collisions per
// scene at baseline, so a 2x drop is a measured effect rather than noise.
std::vector<Scene> dense_unsafe_scenes(std::size_t n, std::uint64_t seed) {
    SimConfig cfg = preset_config("crossing-unsafe");
    cfg.agents_min = 6;
    cfg.agents_max = 10;
    cfg.arena_half = 4.0;
    cfg.num_scenes = n;
    cfg.seed = seed;
    return simulate(cfg).scenes;
}

// One training arm for criterion 5. Evaluation uses the standard best-of-20
// protocol: mADE is best-of-K and NC is the per-sample average, so K only
// has to be identical across the two arms for the comparison to be fair.
ShortRun safety_arm(std::uint64_t seed, double lambda_critic) {
    ModelConfig mc = small_model();
    mc.init_seed = 100 + seed;
    SafeCriticModel model(mc);
    TrainConfig tc;
    tc.k_train = 3;
    tc.batch_size = 4;
    tc.epochs = 5;
    tc.seed = seed;
    tc.lambda_critic = lambda_critic;
    tc.lr_critic = 3e-3;
    tc.critic_positive_weight = 100.0;
    Trainer trainer(model, tc);
    trainer.train(dense_unsafe_scenes(120, 500 + seed), nullptr);

    Rng eval_rng(7000 + seed);
    const EvalResult res =
        evaluate(model, dense_unsafe_scenes(30, 9000 + seed), 20, 0.10, eval_rng);
    return {res.aggregate.nc_total, res.aggregate.made, res.aggregate.diversity,
            model.generator_params().checksum()};
}

}  // namespace

TEST_CASE("criterion 5: lambda_c > 0 at least halves NC at < 10% mADE cost (3-seed medians)") {
    std::vector<double> nc_on, nc_off, made_on, made_off;
    for (std::uint64_t seed : {1, 2, 3}) {
        const ShortRun off = safety_arm(seed, 0.0);
        const ShortRun on = safety_arm(seed, 9.0);
        nc_off.push_back(off.nc);
        nc_on.push_back(on.nc);
        made_off.push_back(off.made_v);
        made_on.push_back(on.made_v);
    }
    const double m_nc_off = median3(nc_off[0], nc_off[1], nc_off[2]);
    const double m_nc_on = median3(nc_on[0], nc_on[1], nc_on[2]);
    const double m_made_off = median3(made_off[0], made_off[1], made_off[2]);
    const double m_made_on = median3(made_on[0], made_on[1], made_on[2]);
    const bool nc_halved = m_nc_on * 2.0 <= m_nc_off && m_nc_off > 0.0;
    const bool made_ok = m_made_on < 1.10 * m_made_off;
    std::ostringstream os;
    os << "median NC " << m_nc_off << " -> " << m_nc_on << "; median mADE "
       << m_made_off << " -> " << m_made_on;
    verdict(5, nc_halved && made_ok, os.str());
    CHECK(nc_halved);
    CHECK(made_ok);
}

TEST_CASE("criterion 6: removing the scene representation hurts mADE in >= 2 of 3 seeds") {
    int worse = 0;
    std::ostringstream os;
    for (std::uint64_t seed : {1, 2, 3}) {
        const ShortRun with = context_arm(seed, true);
        const ShortRun without = context_arm(seed, false);
        if (without.made_v > with.made_v) ++worse;
        os << " seed" << seed << ": " << with.made_v << " vs " << without.made_v << ";";
    }
    verdict(6, worse >= 2, "asr-on vs asr-off mADE" + os.str());
    CHECK(worse >= 2);
}

TEST_CASE("criterion 7: K = 5 diversity > 0.2 m, no agent mode-collapses") {
    ModelConfig mc = small_model();
    SafeCriticModel model(mc);
    TrainConfig tc;
    tc.k_train = 3;
    tc.batch_size = 4;
    tc.epochs = 2;
    Trainer trainer(model, tc);
    trainer.train(sim_scenes("crossing", 40, 600), nullptr);

    const auto eval_set = sim_scenes("crossing", 20, 9600);
    Rng rng(77);
    double div_acc = 0;
    std::size_t agents = 0;
    bool any_collapsed = false;
    for (const Scene& scene : eval_set) {
        const PredictionSet set = model.sample_set(scene, 5, rng, false);
        for (std::size_t i = 0; i < scene.agents.size(); ++i) {
            std::vector<Path> per_agent;
            for (const auto& s : set.samples) per_agent.push_back(s.paths[i]);
            const double d = diversity(per_agent);
            div_acc += d;
            ++agents;
            bool identical = true;
            for (std::size_t k = 1; k < per_agent.size() && identical; ++k)
                for (std::size_t t = 0; t < per_agent[k].size(); ++t)
                    if (per_agent[k][t].x != per_agent[0][t].x ||
                        per_agent[k][t].y != per_agent[0][t].y) {
                        identical = false;
                        break;
                    }
            if (identical) any_collapsed = true;
        }
    }
    const double mean_div = div_acc / static_cast<double>(agents);
    std::ostringstream os;
    os << "mean diversity " << mean_div << " m over " << agents << " agents";
    verdict(7, mean_div > 0.2 && !any_collapsed, os.str());
    CHECK(mean_div > 0.2);
    CHECK_FALSE(any_collapsed);
}

TEST_CASE("criterion 8: determinism and round-trips are exact") {
    bool ok = true;

    // (a) fixed seed -> bit-identical training loss trace
    const auto scenes = sim_scenes("crossing", 6, 801);
    auto trace = [&] {
        ModelConfig mc = small_model();
        SafeCriticModel model(mc);
        TrainConfig tc;
        tc.k_train = 2;
        tc.batch_size = 3;
        tc.epochs = 2;
        Trainer trainer(model, tc);
        std::ostringstream log;
        trainer.train(scenes, &log);
        return log.str();
    };
    if (trace() != trace()) ok = false;

    // (b) checkpoint save/load reproduces eval bit-exactly
    {
        ModelConfig mc = small_model();
        SafeCriticModel model(mc);
        TrainConfig tc;
        tc.k_train = 2;
        tc.batch_size = 3;
        tc.epochs = 1;
        Trainer trainer(model, tc);
        trainer.train(scenes, nullptr);
        Rng r1(55);
        const EvalResult before = evaluate(model, scenes, 4, 0.10, r1);
        save_checkpoint("/tmp/sc_acceptance.ckpt", model.all_params());
        SafeCriticModel restored(mc);
        load_checkpoint("/tmp/sc_acceptance.ckpt", restored.all_params());
        Rng r2(55);
        const EvalResult after = evaluate(restored, scenes, 4, 0.10, r2);
        for (std::size_t s = 0; s < before.per_scene.size(); ++s) {
            if (before.per_scene[s].made != after.per_scene[s].made) ok = false;
            if (before.per_scene[s].mfde != after.per_scene[s].mfde) ok = false;
            if (before.per_scene[s].nc_total != after.per_scene[s].nc_total) ok = false;
        }
        std::remove("/tmp/sc_acceptance.ckpt");
    }

    // (c) displacement <-> position round-trip exact on dyadic grids
    {
        Rng rng(8);
        for (int it = 0; it < 200; ++it) {
            Path p;
            for (std::size_t i = 0; i < kWindowFrames; ++i)
                p.push_back({static_cast<double>(static_cast<int>(rng.index(2049)) - 1024) / 64.0,
                             static_cast<double>(static_cast<int>(rng.index(2049)) - 1024) / 64.0});
            const Path back = to_displacements(0, p).positions();
            for (std::size_t i = 0; i < p.size(); ++i)
                if (back[i].x != p[i].x || back[i].y != p[i].y) ok = false;
        }
    }

    // (d) TrajNet export -> import identity
    {
        save_trajnet(scenes, "/tmp/sc_acceptance.tsv");
        const auto back = load_trajnet("/tmp/sc_acceptance.tsv");
        if (back.size() != scenes.size()) ok = false;
        for (std::size_t s = 0; ok && s < scenes.size(); ++s) {
            if (back[s].agents.size() != scenes[s].agents.size()) {
                ok = false;
                break;
            }
            for (std::size_t i = 0; i < scenes[s].agents.size(); ++i) {
                const Path a = scenes[s].agents[i].positions();
                const Path b = back[s].agents[i].positions();
                for (std::size_t t = 0; t < a.size(); ++t)
                    if (a[t].x != b[t].x || a[t].y != b[t].y) ok = false;
            }
        }
        std::remove("/tmp/sc_acceptance.tsv");
    }

    verdict(8, ok, "loss trace, checkpoint eval, displacement and TrajNet round-trips");
    CHECK(ok);
}
