#include "safecritic/model.hpp"

#include <cmath>

#include "safecritic/errors.hpp"

namespace sc {

SafeCriticModel::SafeCriticModel(const ModelConfig& cfg) : cfg_(cfg) {
    Rng rng(cfg.init_seed);
    const std::size_t h = cfg.hidden;
    const std::size_t cls = cfg.num_classes;

    fallback_map_ = StaticMap::all_free(1, 1, 1.0);

    gen_emb_ = Mlp(MlpSpec{{2, h}, {Activation::None}}, rng, "gen.emb");
    gen_bn_ = BatchNorm(h, "gen.bn");
    gen_enc_ = LstmCell(h, h, rng, "gen.enc");
    gen_dec_ = LstmCell(h + (h + 2) + cls + cfg.noise_dim, h, rng, "gen.dec");
    gen_out_ = Mlp(MlpSpec{{h, 2}, {Activation::None}}, rng, "gen.out");
    gen_att_d_ = AttentionHead(h + 2, h, cfg.score_hidden, rng, "gen.att_d");
    gen_att_s_ = AttentionHead(cls, h, cfg.score_hidden, rng, "gen.att_s");

    disc_emb_ = Mlp(MlpSpec{{2, h}, {Activation::None}}, rng, "disc.emb");
    disc_lstm_ = LstmCell(h, h, rng, "disc.lstm");
    disc_head_ = Mlp(MlpSpec{{h, cfg.score_hidden, 1}, {Activation::Tanh, Activation::None}},
                     rng, "disc.head");

    critic_lstm_ = LstmCell(2 + 2 + (h + 2) + cls, h, rng, "critic.lstm");
    critic_head_ = Mlp(MlpSpec{{h, cfg.score_hidden, 1}, {Activation::Tanh, Activation::None}},
                       rng, "critic.head");
    critic_att_d_ = AttentionHead(h + 2, h, cfg.score_hidden, rng, "critic.att_d");
    critic_att_s_ = AttentionHead(cls, h, cfg.score_hidden, rng, "critic.att_s");

    gen_emb_.register_params(gen_store_);
    gen_bn_.register_params(gen_store_);
    gen_enc_.register_params(gen_store_);
    gen_dec_.register_params(gen_store_);
    gen_out_.register_params(gen_store_);
    if (cfg.use_asr) {
        gen_att_d_.register_params(gen_store_);
        gen_att_s_.register_params(gen_store_);
    }
    disc_emb_.register_params(disc_store_);
    disc_lstm_.register_params(disc_store_);
    disc_head_.register_params(disc_store_);
    critic_lstm_.register_params(critic_store_);
    critic_head_.register_params(critic_store_);
    if (cfg.use_asr) {
        critic_att_d_.register_params(critic_store_);
        critic_att_s_.register_params(critic_store_);
    }

    for (ParamStore* s : {&gen_store_, &disc_store_, &critic_store_})
        for (const auto& e : s->entries()) all_store_.add(e.name, e.tensor, e.trainable);
}

void SafeCriticModel::check_scene(const Scene& scene) {
    if (scene.agents.empty()) throw DataError("scene " + scene.scene_id + " has no agents");
    for (const auto& a : scene.agents)
        if (a.steps() != kWindowFrames - 1)
            throw ShapeError("scene " + scene.scene_id + ": agent has " +
                             std::to_string(a.steps()) + " displacement steps, expected " +
                             std::to_string(kWindowFrames - 1));
}

const StaticMap& SafeCriticModel::map_of(const Scene& scene) const {
    return scene.map ? *scene.map : fallback_map_;
}

std::vector<Tensor> SafeCriticModel::observed_inputs(const Scene& scene, std::size_t agent) {
    const auto& d = scene.agents[agent].displacements;
    std::vector<Tensor> out;
    out.reserve(kTObs);
    out.push_back(Tensor({2}));  // leading zero step
    for (std::size_t t = 0; t + 1 < kTObs; ++t)
        out.push_back(Tensor::from({2}, {d[t].x, d[t].y}));
    return out;
}

std::vector<Tensor> SafeCriticModel::future_deltas(const Scene& scene, std::size_t agent) {
    const auto& d = scene.agents[agent].displacements;
    std::vector<Tensor> out;
    out.reserve(kTPred);
    for (std::size_t t = kTObs - 1; t < kWindowFrames - 1; ++t)
        out.push_back(Tensor::from({2}, {d[t].x, d[t].y}));
    return out;
}

Vec2 SafeCriticModel::anchor(const Scene& scene, std::size_t agent) {
    return scene.agents[agent].positions()[kTObs - 1];
}

std::vector<Var> SafeCriticModel::encode(Tape& tape, ParamBinder& bind, const Scene& scene,
                                         bool training) const {
    check_scene(scene);
    std::vector<Var> out;
    out.reserve(scene.agents.size());
    for (std::size_t i = 0; i < scene.agents.size(); ++i) {
        const auto inputs = observed_inputs(scene, i);
        std::vector<Var> rows;
        rows.reserve(inputs.size());
        for (const auto& x : inputs) rows.push_back(tape.constant(x));
        Var obs = tape.stack_rows(2, rows);                      // (T_obs, 2)
        Var emb = gen_emb_.forward(tape, bind, obs);             // (T_obs, h)
        emb = gen_bn_.forward(tape, bind, emb, training);
        LstmCell::State st = gen_enc_.zero_state(tape);
        for (std::size_t t = 0; t < kTObs; ++t)
            st = gen_enc_.step(tape, bind, tape.row(emb, t), st);
        out.push_back(st.h);
    }
    return out;
}

SafeCriticModel::StepContext SafeCriticModel::generator_context(
    Tape& tape, ParamBinder& bind, const Scene& scene, std::size_t agent,
    const std::vector<Vec2>& positions, const std::vector<Var>& neighbor_hidden,
    Var agent_hidden) const {
    std::vector<NeighborState> neighbors;
    for (std::size_t j = 0; j < positions.size(); ++j)
        if (j != agent) neighbors.push_back({positions[j], neighbor_hidden[j]});
    DynamicGrid fd =
        build_dynamic_grid(tape, positions[agent], neighbors, cfg_.grid, cfg_.hidden);
    const Tensor fs = build_static_grid(positions[agent], map_of(scene), cfg_.grid);
    SceneContext ctx = context_vectors(tape, bind, fd, fs, agent_hidden, gen_att_d_,
                                       gen_att_s_, cfg_.grid);
    return StepContext{ctx.dyn.context, ctx.stat.context};
}

Rollout SafeCriticModel::decode(Tape& tape, ParamBinder& bind, const Scene& scene,
                                const std::vector<Var>& u, const std::vector<Tensor>& noise,
                                bool training) const {
    check_scene(scene);
    const std::size_t n = scene.agents.size();
    if (u.size() != n || noise.size() != n)
        throw ShapeError("decode: expected " + std::to_string(n) + " states and noise vectors");

    Rollout r;
    r.deltas.resize(n);
    r.hiddens.resize(n);
    r.paths.resize(n);

    std::vector<Vec2> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = anchor(scene, i);
        r.paths[i].push_back(pos[i]);
    }

    std::vector<Var> z;
    z.reserve(n);
    for (const auto& zt : noise) z.push_back(tape.constant(zt));

    std::vector<LstmCell::State> state(n);
    for (auto& s : state) s = gen_dec_.zero_state(tape);

    // social hidden used for neighbors' grid entries
    std::vector<Var> social = u;
    // frozen-F_d mode: grids built once from observed anchors and encoder states
    std::vector<StepContext> frozen_ctx;

    const Tensor zero_ctx_d({cfg_.hidden + 2});
    const Tensor zero_ctx_s({cfg_.num_classes});

    for (std::size_t t = 0; t < kTPred; ++t) {
        const std::vector<Vec2> pos_now = pos;
        std::vector<Var> input(n);
        for (std::size_t i = 0; i < n; ++i) {
            Var agent_hidden = (t == 0) ? u[i] : state[i].h;
            StepContext ctx;
            if (!cfg_.use_asr) {
                ctx = {tape.constant(zero_ctx_d), tape.constant(zero_ctx_s)};
            } else if (!cfg_.rebuild_dynamic_per_step) {
                if (frozen_ctx.empty()) {
                    frozen_ctx.reserve(n);
                    for (std::size_t a = 0; a < n; ++a)
                        frozen_ctx.push_back(
                            generator_context(tape, bind, scene, a, pos_now, u, u[a]));
                }
                ctx = frozen_ctx[i];
            } else {
                ctx = generator_context(tape, bind, scene, i, pos_now, social, agent_hidden);
            }
            Var feat = (t == 0)
                           ? u[i]
                           : gen_emb_.forward(tape, bind, r.deltas[i][t - 1]);
            input[i] = tape.concat({feat, ctx.ctx_d, ctx.ctx_s, z[i]});
        }
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = gen_dec_.step(tape, bind, input[i], state[i]);
            Var delta = gen_out_.forward(tape, bind, state[i].h);
            r.deltas[i].push_back(delta);
            r.hiddens[i].push_back(state[i].h);
            const Tensor& dv = tape.val(delta);
            pos[i] += Vec2{dv.data[0], dv.data[1]};
            r.paths[i].push_back(pos[i]);
        }
        social = std::vector<Var>();
        for (std::size_t i = 0; i < n; ++i) social.push_back(state[i].h);
    }
    return r;
}

Var SafeCriticModel::discriminate(Tape& tape, ParamBinder& bind, const Scene& scene,
                                  std::size_t agent, const std::vector<Var>* fake_deltas,
                                  bool training) const {
    check_scene(scene);
    std::vector<Var> rows;
    rows.reserve(kWindowFrames);
    for (const auto& x : observed_inputs(scene, agent)) rows.push_back(tape.constant(x));
    if (fake_deltas) {
        if (fake_deltas->size() != kTPred)
            throw ShapeError("discriminate: fake future has " +
                             std::to_string(fake_deltas->size()) + " steps, expected " +
                             std::to_string(kTPred));
        for (Var v : *fake_deltas) rows.push_back(v);
    } else {
        for (const auto& x : future_deltas(scene, agent)) rows.push_back(tape.constant(x));
    }
    Var seq = tape.stack_rows(2, rows);                 // (T_obs+T_pred, 2)
    Var emb = disc_emb_.forward(tape, bind, seq);       // (T, h)
    LstmCell::State st = disc_lstm_.zero_state(tape);
    for (std::size_t t = 0; t < kWindowFrames; ++t)
        st = disc_lstm_.step(tape, bind, tape.row(emb, t), st);
    return tape.sigmoid(disc_head_.forward(tape, bind, st.h));
}

std::vector<std::vector<Var>> SafeCriticModel::criticise(
    Tape& tape, ParamBinder& bind, const Scene& scene,
    const std::vector<std::vector<Var>>& deltas, const std::vector<Path>& paths,
    const std::vector<std::vector<Var>>& hiddens) const {
    check_scene(scene);
    const std::size_t n = scene.agents.size();
    if (deltas.size() != n || paths.size() != n || hiddens.size() != n)
        throw ShapeError("criticise: rollout does not cover all agents");

    const Tensor zero_ctx_d({cfg_.hidden + 2});
    const Tensor zero_ctx_s({cfg_.num_classes});
    const Tensor zero_pooled({2});

    // Live positions rebuilt from the deltas so the pooled proximity channel
    // is differentiable with respect to the rollout (both pair members).
    std::vector<std::vector<Var>> pos_var(n);
    for (std::size_t i = 0; i < n; ++i) {
        Var p = tape.constant(Tensor::vector({paths[i][0].x, paths[i][0].y}));
        for (std::size_t t = 0; t < kTPred; ++t) {
            p = tape.add(p, deltas[i][t]);
            pos_var[i].push_back(p);
        }
    }

    std::vector<std::vector<Var>> v(n);
    std::vector<LstmCell::State> state(n);
    for (auto& s : state) s = critic_lstm_.zero_state(tape);

    for (std::size_t t = 0; t < kTPred; ++t) {
        std::vector<Vec2> pos_now(n);
        for (std::size_t i = 0; i < n; ++i) pos_now[i] = paths[i][t + 1];
        for (std::size_t i = 0; i < n; ++i) {
            // pooled summary of the nearest in-grid neighbor
            Var pooled;
            int nearest = -1;
            double nearest_d = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                if (ego_cell_index(cfg_.grid, pos_now[j] - pos_now[i]) < 0) continue;
                const double d = distance(pos_now[j], pos_now[i]);
                if (nearest < 0 || d < nearest_d) {
                    nearest = static_cast<int>(j);
                    nearest_d = d;
                }
            }
            if (!cfg_.use_asr || nearest < 0) {
                pooled = tape.constant(zero_pooled);
            } else {
                Var diff = tape.add(pos_var[i][t],
                                    tape.scale(pos_var[static_cast<std::size_t>(nearest)][t],
                                               -1.0));
                Var ssq = tape.sum(tape.mul(diff, diff));
                Var prox = tape.exp(tape.scale(ssq, -1.0 / (2.0 * kProxSigma * kProxSigma)));
                pooled = tape.concat({prox, tape.constant(Tensor::full({1}, 1.0))});
            }
            Var ctx_d, ctx_s;
            if (!cfg_.use_asr) {
                ctx_d = tape.constant(zero_ctx_d);
                ctx_s = tape.constant(zero_ctx_s);
            } else {
                std::vector<NeighborState> neighbors;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) neighbors.push_back({pos_now[j], hiddens[j][t]});
                DynamicGrid fd = build_dynamic_grid(tape, pos_now[i], neighbors, cfg_.grid,
                                                    cfg_.hidden);
                const Tensor fs = build_static_grid(pos_now[i], map_of(scene), cfg_.grid);
                SceneContext ctx = context_vectors(tape, bind, fd, fs, state[i].h,
                                                   critic_att_d_, critic_att_s_, cfg_.grid);
                ctx_d = ctx.dyn.context;
                ctx_s = ctx.stat.context;
            }
            Var input = tape.concat({deltas[i][t], pooled, ctx_d, ctx_s});
            state[i] = critic_lstm_.step(tape, bind, input, state[i]);
            v[i].push_back(tape.softplus(critic_head_.forward(tape, bind, state[i].h)));
        }
    }
    return v;
}

PredictionSet SafeCriticModel::sample_set(const Scene& scene, std::size_t k, Rng& rng,
                                          bool with_scores) const {
    if (k == 0) throw ConfigError("sample_set: K must be >= 1");
    PredictionSet out;
    for (std::size_t s = 0; s < k; ++s) {
        Tape tape;
        ParamBinder bind(tape);
        std::vector<Tensor> noise;
        noise.reserve(scene.agents.size());
        for (std::size_t i = 0; i < scene.agents.size(); ++i)
            noise.push_back(rng.normal_vec(cfg_.noise_dim));
        const std::vector<Var> u = encode(tape, bind, scene, /*training=*/false);
        Rollout r = decode(tape, bind, scene, u, noise, /*training=*/false);
        PredictionSample sample;
        sample.paths = r.paths;
        if (with_scores) {
            const auto v = criticise(tape, bind, scene, r.deltas, r.paths, r.hiddens);
            sample.critic_scores.resize(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                for (Var vt : v[i]) sample.critic_scores[i].push_back(tape.val(vt).data[0]);
            for (std::size_t i = 0; i < scene.agents.size(); ++i)
                sample.disc_scores.push_back(
                    tape.val(discriminate(tape, bind, scene, i, &r.deltas[i], false))
                        .data[0]);
        }
        out.samples.push_back(std::move(sample));
    }
    return out;
}

SafeCriticModel::AttentionSnapshot SafeCriticModel::attention_snapshot(const Scene& scene,
                                                                       std::size_t agent,
                                                                       Rng& rng) const {
    Tape tape;
    ParamBinder bind(tape);
    const std::vector<Var> u = encode(tape, bind, scene, false);
    std::vector<Vec2> pos(scene.agents.size());
    for (std::size_t i = 0; i < scene.agents.size(); ++i) pos[i] = anchor(scene, i);
    std::vector<NeighborState> neighbors;
    for (std::size_t j = 0; j < pos.size(); ++j)
        if (j != agent) neighbors.push_back({pos[j], u[j]});
    DynamicGrid fd = build_dynamic_grid(tape, pos[agent], neighbors, cfg_.grid, cfg_.hidden);
    const Tensor fs = build_static_grid(pos[agent], map_of(scene), cfg_.grid);
    SceneContext ctx =
        context_vectors(tape, bind, fd, fs, u[agent], gen_att_d_, gen_att_s_, cfg_.grid);
    (void)rng;
    return AttentionSnapshot{tape.val(ctx.dyn.weights), tape.val(ctx.stat.weights)};
}

}  // namespace sc
