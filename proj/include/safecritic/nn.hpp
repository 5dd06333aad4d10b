#pragma once

#include <string>
#include <vector>

#include "safecritic/params.hpp"
#include "safecritic/rng.hpp"
#include "safecritic/tape.hpp"

namespace sc {

enum class Activation { None, Relu, Tanh };

// Layer widths include the input width: {in, h1, ..., out}. One activation
// per weight layer; the last is usually None.
struct MlpSpec {
    std::vector<std::size_t> layer_widths;
    std::vector<Activation> activations;
};

class Mlp {
public:
    Mlp() = default;
    Mlp(const MlpSpec& spec, Rng& rng, std::string name);

    // input: rank-1 (in) or rank-2 (B, in)
    Var forward(Tape& tape, ParamBinder& bind, Var input) const;
    void register_params(ParamStore& store);

    std::size_t in_size() const { return spec_.layer_widths.front(); }
    std::size_t out_size() const { return spec_.layer_widths.back(); }

private:
    MlpSpec spec_;
    std::string name_;
    mutable std::vector<Tensor> weights_;
    mutable std::vector<Tensor> biases_;
};

class LstmCell {
public:
    LstmCell() = default;
    LstmCell(std::size_t input_size, std::size_t hidden_size, Rng& rng, std::string name);

    struct State {
        Var h, c;
    };

    State zero_state(Tape& tape) const;
    // Standard gate equations; input rank-1 (input_size).
    State step(Tape& tape, ParamBinder& bind, Var input, const State& prev) const;
    void register_params(ParamStore& store);

    std::size_t input_size() const { return input_size_; }
    std::size_t hidden_size() const { return hidden_size_; }

private:
    std::size_t input_size_ = 0, hidden_size_ = 0;
    std::string name_;
    mutable Tensor weights_;  // (input+hidden) x 4*hidden, gate order i,f,g,o
    mutable Tensor bias_;     // 4*hidden
};

// Additive spatial attention over grid cells. Scores come from an MLP on
// [cell feature, normalized cell center offset, agent hidden]; softmax over
// all cells.
class AttentionHead {
public:
    AttentionHead() = default;
    AttentionHead(std::size_t feature_size, std::size_t hidden_size, std::size_t score_hidden,
                  Rng& rng, std::string name);

    struct Result {
        Var context;  // rank-1 (feature_size)
        Var weights;  // rank-1 (cells), sums to 1
    };

    // grid: rank-2 (cells, feature_size); offsets: rank-2 (cells, 2) of
    // normalized cell-center offsets, passed as a constant.
    Result forward(Tape& tape, ParamBinder& bind, Var grid, const Tensor& offsets,
                   Var agent_hidden) const;
    void register_params(ParamStore& store);

    std::size_t feature_size() const { return feature_size_; }

private:
    std::size_t feature_size_ = 0, hidden_size_ = 0;
    Mlp scorer_;
};

// Batch normalization over the rows of a (B, F) matrix.
class BatchNorm {
public:
    BatchNorm() = default;
    BatchNorm(std::size_t features, std::string name);

    Var forward(Tape& tape, ParamBinder& bind, Var x, bool training) const;
    void register_params(ParamStore& store);

private:
    std::string name_;
    mutable Tensor gamma_, beta_;
    mutable BatchNormState state_;
};

}  // namespace sc
