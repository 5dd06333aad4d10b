#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "safecritic/tensor.hpp"

namespace sc {

// Handle into a Tape node. Default-constructed handles are invalid and
// stand for "absent" (e.g. an unoccupied grid row).
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Running statistics for a batch-norm layer. Owned by the layer, mutated
// by forward passes in training mode.
struct BatchNormState {
    Tensor running_mean;
    Tensor running_var;
    double momentum = 0.9;
    double eps = 1e-5;
    long long batches_seen = 0;
};

// Define-by-run operation tape. Rebuilt every forward pass; reverse-mode
// gradients via backward(). Single-threaded; independent tapes may run
// concurrently.
class Tape {
public:
    // Leaf with gradient tracking (parameters, differentiable inputs).
    Var leaf(const Tensor& v);
    // Leaf that never receives a gradient (data, one-hot grids).
    Var constant(const Tensor& v);

    const Tensor& val(Var v) const;

    // ---- recorded operations ----
    // rank-1 (k) x (k,n) -> (n), or (m,k) x (k,n) -> (m,n)
    Var matmul(Var a, Var b);
    // same shape, or (B,F) + (F) broadcast over rows
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);  // elementwise, same shape
    Var scale(Var a, double s);
    Var concat(const std::vector<Var>& parts);            // rank-1
    Var slice(Var a, std::size_t start, std::size_t len); // rank-1
    Var row(Var a, std::size_t r);                        // rank-2 -> rank-1
    // rank-1 rows of common width -> (B, width); invalid Var = zero row
    Var stack_rows(std::size_t width, const std::vector<Var>& rows);
    Var reshape(Var a, std::vector<std::size_t> new_shape);
    // rank-1 (F) -> (n, F), the vector repeated in every row
    Var repeat_row(Var a, std::size_t n);
    // rank-2 blocks with equal row counts, concatenated column-wise
    Var hconcat(const std::vector<Var>& blocks);

    Var tanh(Var a);
    Var sigmoid(Var a);
    Var relu(Var a);
    Var softplus(Var a);
    Var exp(Var a);
    Var softmax(Var a);  // rank-1, over all entries

    Var sum(Var a);   // -> scalar
    Var mean(Var a);  // -> scalar
    Var squared_error(Var a, Var b);             // sum((a-b)^2) -> scalar
    Var bce(Var p, const Tensor& target);        // mean binary cross-entropy
    Var batch_norm(Var x, Var gamma, Var beta, BatchNormState& state, bool training);

    // ---- gradients ----
    void backward(Var loss);
    bool has_grad(Var v) const;
    Tensor grad(Var v) const;  // zeros of value shape when absent

    std::size_t num_nodes() const { return nodes_.size(); }
    void reset();

private:
    struct Node {
        Tensor value;
        bool needs_grad = false;
        std::function<void(Tape&)> back;  // null for leaves/constants
    };

    Var push(Tensor value, bool needs_grad, std::function<void(Tape&)> back);
    Tensor& grad_buf(int id);
    void check_id(Var v, const char* op) const;

    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
    std::vector<char> grad_set_;
};

}  // namespace sc
