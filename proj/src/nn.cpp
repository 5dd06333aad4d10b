#include "safecritic/nn.hpp"

#include "safecritic/errors.hpp"

namespace sc {

Mlp::Mlp(const MlpSpec& spec, Rng& rng, std::string name)
    : spec_(spec), name_(std::move(name)) {
    if (spec.layer_widths.size() < 2)
        throw ConfigError("Mlp " + name_ + ": need at least input and output widths");
    if (spec.activations.size() != spec.layer_widths.size() - 1)
        throw ConfigError("Mlp " + name_ + ": one activation per weight layer required");
    for (auto w : spec.layer_widths)
        if (w == 0) throw ConfigError("Mlp " + name_ + ": zero layer width");
    for (std::size_t l = 0; l + 1 < spec.layer_widths.size(); ++l) {
        const std::size_t in = spec.layer_widths[l], out = spec.layer_widths[l + 1];
        Tensor w({in, out}), b({out});
        rng.init_uniform(w, in);
        rng.init_uniform(b, in);
        weights_.push_back(std::move(w));
        biases_.push_back(std::move(b));
    }
}

Var Mlp::forward(Tape& tape, ParamBinder& bind, Var input) const {
    Var x = input;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        x = tape.add(tape.matmul(x, bind(weights_[l])), bind(biases_[l]));
        switch (spec_.activations[l]) {
            case Activation::None: break;
            case Activation::Relu: x = tape.relu(x); break;
            case Activation::Tanh: x = tape.tanh(x); break;
        }
    }
    return x;
}

void Mlp::register_params(ParamStore& store) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        store.add(name_ + ".w" + std::to_string(l), &weights_[l]);
        store.add(name_ + ".b" + std::to_string(l), &biases_[l]);
    }
}

LstmCell::LstmCell(std::size_t input_size, std::size_t hidden_size, Rng& rng, std::string name)
    : input_size_(input_size), hidden_size_(hidden_size), name_(std::move(name)) {
    weights_ = Tensor({input_size + hidden_size, 4 * hidden_size});
    bias_ = Tensor({4 * hidden_size});
    rng.init_uniform(weights_, input_size + hidden_size);
    rng.init_uniform(bias_, input_size + hidden_size);
}

LstmCell::State LstmCell::zero_state(Tape& tape) const {
    return State{tape.constant(Tensor({hidden_size_})), tape.constant(Tensor({hidden_size_}))};
}

LstmCell::State LstmCell::step(Tape& tape, ParamBinder& bind, Var input,
                               const State& prev) const {
    if (tape.val(input).size() != input_size_)
        throw ShapeError("LstmCell " + name_ + ": input size " +
                         std::to_string(tape.val(input).size()) + " != " +
                         std::to_string(input_size_));
    Var xh = tape.concat({input, prev.h});
    Var gates = tape.add(tape.matmul(xh, bind(weights_)), bind(bias_));
    const std::size_t h = hidden_size_;
    Var ig = tape.sigmoid(tape.slice(gates, 0, h));
    Var fg = tape.sigmoid(tape.slice(gates, h, h));
    Var gg = tape.tanh(tape.slice(gates, 2 * h, h));
    Var og = tape.sigmoid(tape.slice(gates, 3 * h, h));
    Var c = tape.add(tape.mul(fg, prev.c), tape.mul(ig, gg));
    Var hn = tape.mul(og, tape.tanh(c));
    return State{hn, c};
}

void LstmCell::register_params(ParamStore& store) {
    store.add(name_ + ".w", &weights_);
    store.add(name_ + ".b", &bias_);
}

AttentionHead::AttentionHead(std::size_t feature_size, std::size_t hidden_size,
                             std::size_t score_hidden, Rng& rng, std::string name)
    : feature_size_(feature_size),
      hidden_size_(hidden_size),
      scorer_(MlpSpec{{feature_size + 2 + hidden_size, score_hidden, 1},
                      {Activation::Tanh, Activation::None}},
              rng, name + ".score") {}

AttentionHead::Result AttentionHead::forward(Tape& tape, ParamBinder& bind, Var grid,
                                             const Tensor& offsets, Var agent_hidden) const {
    const Tensor& g = tape.val(grid);
    if (g.rank() != 2 || g.shape[1] != feature_size_)
        throw ShapeError("AttentionHead: grid shape " + g.shape_str() + " != (cells," +
                         std::to_string(feature_size_) + ")");
    const std::size_t cells = g.shape[0];
    if (cells == 0) throw ShapeError("AttentionHead: empty grid");
    if (offsets.rank() != 2 || offsets.shape[0] != cells || offsets.shape[1] != 2)
        throw ShapeError("AttentionHead: offsets shape " + offsets.shape_str());

    Var in = tape.hconcat(
        {grid, tape.constant(offsets), tape.repeat_row(agent_hidden, cells)});
    Var scores = tape.reshape(scorer_.forward(tape, bind, in), {cells});
    Var alpha = tape.softmax(scores);
    // ctx = alpha^T (cells) x grid (cells,F)
    Var ctx = tape.matmul(alpha, grid);
    return Result{ctx, alpha};
}

void AttentionHead::register_params(ParamStore& store) { scorer_.register_params(store); }

BatchNorm::BatchNorm(std::size_t features, std::string name) : name_(std::move(name)) {
    gamma_ = Tensor::full({features}, 1.0);
    beta_ = Tensor({features});
    state_.running_mean = Tensor({features});
    state_.running_var = Tensor::full({features}, 1.0);
}

Var BatchNorm::forward(Tape& tape, ParamBinder& bind, Var x, bool training) const {
    return tape.batch_norm(x, bind(gamma_), bind(beta_), state_, training);
}

void BatchNorm::register_params(ParamStore& store) {
    store.add(name_ + ".gamma", &gamma_);
    store.add(name_ + ".beta", &beta_);
    store.add(name_ + ".running_mean", &state_.running_mean, /*trainable=*/false);
    store.add(name_ + ".running_var", &state_.running_var, /*trainable=*/false);
}

}  // namespace sc
