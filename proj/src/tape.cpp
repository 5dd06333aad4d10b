#include "safecritic/tape.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

#include "safecritic/errors.hpp"
#include "safecritic/kernels.hpp"

namespace sc {

namespace {
const kern::Ops& K() { return kern::ops(); }

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b) {
    throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                     b.shape_str());
}

[[noreturn]] void shape_fail(const char* op, const Tensor& a) {
    throw ShapeError(std::string(op) + ": invalid shape " + a.shape_str());
}
}  // namespace

void Tape::check_id(Var v, const char* op) const {
    if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size())
        throw ShapeError(std::string(op) + ": invalid tape handle");
}

Var Tape::push(Tensor value, bool needs_grad, std::function<void(Tape&)> back) {
    nodes_.push_back(Node{std::move(value), needs_grad, needs_grad ? std::move(back) : nullptr});
    grads_.emplace_back();
    grad_set_.push_back(0);
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::leaf(const Tensor& v) { return push(v, true, nullptr); }
Var Tape::constant(const Tensor& v) { return push(v, false, nullptr); }

const Tensor& Tape::val(Var v) const {
    check_id(v, "val");
    return nodes_[v.id].value;
}

Tensor& Tape::grad_buf(int id) {
    if (!grad_set_[id]) {
        grads_[id] = Tensor(nodes_[id].value.shape);
        grad_set_[id] = 1;
    }
    return grads_[id];
}

bool Tape::has_grad(Var v) const {
    check_id(v, "has_grad");
    return grad_set_[v.id] != 0;
}

Tensor Tape::grad(Var v) const {
    check_id(v, "grad");
    if (grad_set_[v.id]) return grads_[v.id];
    return Tensor(nodes_[v.id].value.shape);
}

void Tape::reset() {
    nodes_.clear();
    grads_.clear();
    grad_set_.clear();
}

void Tape::backward(Var loss) {
    check_id(loss, "backward");
    if (nodes_[loss.id].value.size() != 1)
        throw ShapeError("backward: loss must be scalar, got " +
                         nodes_[loss.id].value.shape_str());
    grad_buf(loss.id).data[0] = 1.0;
    for (int id = loss.id; id >= 0; --id) {
        if (!grad_set_[id]) continue;
        if (nodes_[id].back) nodes_[id].back(*this);
    }
}

// ---------------------------------------------------------------- matmul

Var Tape::matmul(Var a, Var b) {
    check_id(a, "matmul");
    check_id(b, "matmul");
    const Tensor& A = nodes_[a.id].value;
    const Tensor& B = nodes_[b.id].value;
    if (B.rank() != 2) shape_fail("matmul", A, B);
    const bool vec = A.rank() == 1;
    const std::size_t m = vec ? 1 : A.shape[0];
    const std::size_t k = vec ? A.shape[0] : A.shape[1];
    const std::size_t n = B.shape[1];
    if (A.rank() > 2 || k != B.shape[0]) shape_fail("matmul", A, B);

    Tensor out(vec ? std::vector<std::size_t>{n} : std::vector<std::size_t>{m, n});
    K().matmul(A.data.data(), B.data.data(), out.data.data(), m, k, n);

    const bool na = nodes_[a.id].needs_grad, nb = nodes_[b.id].needs_grad;
    Var outv = push(std::move(out), na || nb, nullptr);
    if (!(na || nb)) return outv;
    const int oid = outv.id, aid = a.id, bid = b.id;
    nodes_[oid].back = [oid, aid, bid, m, k, n, na, nb](Tape& t) {
        const double* g = t.grads_[oid].data.data();
        const double* av = t.nodes_[aid].value.data.data();
        const double* bv = t.nodes_[bid].value.data.data();
        if (na) {
            double* da = t.grad_buf(aid).data.data();
            // dA[i,p] += dot(dC row i, B row p)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t p = 0; p < k; ++p)
                    da[i * k + p] += K().dot(g + i * n, bv + p * n, n);
        }
        if (nb) {
            double* db = t.grad_buf(bid).data.data();
            // dB[p,:] += A[i,p] * dC[i,:]
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t p = 0; p < k; ++p)
                    K().axpy(av[i * k + p], g + i * n, db + p * n, n);
        }
    };
    return outv;
}

// --------------------------------------------------------- add / sub / mul

Var Tape::add(Var a, Var b) {
    check_id(a, "add");
    check_id(b, "add");
    const Tensor& A = nodes_[a.id].value;
    const Tensor& B = nodes_[b.id].value;
    const bool bcast = !A.same_shape(B);
    if (bcast && !(A.rank() == 2 && B.rank() == 1 && A.shape[1] == B.shape[0]))
        shape_fail("add", A, B);

    Tensor out(A.shape);
    if (!bcast) {
        K().add(A.data.data(), B.data.data(), out.data.data(), A.size());
    } else {
        const std::size_t r = A.shape[0], c = A.shape[1];
        for (std::size_t i = 0; i < r; ++i)
            K().add(A.data.data() + i * c, B.data.data(), out.data.data() + i * c, c);
    }

    const bool na = nodes_[a.id].needs_grad, nb = nodes_[b.id].needs_grad;
    Var outv = push(std::move(out), na || nb, nullptr);
    if (!(na || nb)) return outv;
    const int oid = outv.id, aid = a.id, bid = b.id;
    nodes_[oid].back = [oid, aid, bid, na, nb, bcast](Tape& t) {
        const Tensor& g = t.grads_[oid];
        if (na) K().axpy(1.0, g.data.data(), t.grad_buf(aid).data.data(), g.size());
        if (nb) {
            Tensor& db = t.grad_buf(bid);
            if (!bcast) {
                K().axpy(1.0, g.data.data(), db.data.data(), g.size());
            } else {
                const std::size_t r = g.shape[0], c = g.shape[1];
                for (std::size_t i = 0; i < r; ++i)
                    K().axpy(1.0, g.data.data() + i * c, db.data.data(), c);
            }
        }
    };
    return outv;
}

Var Tape::sub(Var a, Var b) {
    check_id(a, "sub");
    check_id(b, "sub");
    const Tensor& A = nodes_[a.id].value;
    const Tensor& B = nodes_[b.id].value;
    if (!A.same_shape(B)) shape_fail("sub", A, B);
    Tensor out(A.shape);
    K().sub(A.data.data(), B.data.data(), out.data.data(), A.size());

    const bool na = nodes_[a.id].needs_grad, nb = nodes_[b.id].needs_grad;
    Var outv = push(std::move(out), na || nb, nullptr);
    if (!(na || nb)) return outv;
    const int oid = outv.id, aid = a.id, bid = b.id;
    nodes_[oid].back = [oid, aid, bid, na, nb](Tape& t) {
        const Tensor& g = t.grads_[oid];
        if (na) K().axpy(1.0, g.data.data(), t.grad_buf(aid).data.data(), g.size());
        if (nb) K().axpy(-1.0, g.data.data(), t.grad_buf(bid).data.data(), g.size());
    };
    return outv;
}

Var Tape::mul(Var a, Var b) {
    check_id(a, "mul");
    check_id(b, "mul");
    const Tensor& A = nodes_[a.id].value;
    const Tensor& B = nodes_[b.id].value;
    if (!A.same_shape(B)) shape_fail("mul", A, B);
    Tensor out(A.shape);
    K().mul(A.data.data(), B.data.data(), out.data.data(), A.size());

    const bool na = nodes_[a.id].needs_grad, nb = nodes_[b.id].needs_grad;
    Var outv = push(std::move(out), na || nb, nullptr);
    if (!(na || nb)) return outv;
    const int oid = outv.id, aid = a.id, bid = b.id;
    nodes_[oid].back = [oid, aid, bid, na, nb](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const std::size_t n = g.size();
        if (na) {
            const double* bv = t.nodes_[bid].value.data.data();
            double* da = t.grad_buf(aid).data.data();
            for (std::size_t i = 0; i < n; ++i) da[i] += g.data[i] * bv[i];
        }
        if (nb) {
            const double* av = t.nodes_[aid].value.data.data();
            double* db = t.grad_buf(bid).data.data();
            for (std::size_t i = 0; i < n; ++i) db[i] += g.data[i] * av[i];
        }
    };
    return outv;
}

Var Tape::scale(Var a, double s) {
    check_id(a, "scale");
    const Tensor& A = nodes_[a.id].value;
    Tensor out(A.shape);
    K().scale(A.data.data(), s, out.data.data(), A.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid, s](Tape& t) {
        const Tensor& g = t.grads_[oid];
        K().axpy(s, g.data.data(), t.grad_buf(aid).data.data(), g.size());
    };
    return outv;
}

// -------------------------------------------------- concat / slice / rows

Var Tape::concat(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeError("concat: empty part list");
    std::size_t total = 0;
    bool needs = false;
    for (Var p : parts) {
        check_id(p, "concat");
        const Tensor& v = nodes_[p.id].value;
        if (v.rank() != 1) shape_fail("concat", v);
        total += v.size();
        needs = needs || nodes_[p.id].needs_grad;
    }
    Tensor out({total});
    std::size_t off = 0;
    for (Var p : parts) {
        const Tensor& v = nodes_[p.id].value;
        std::memcpy(out.data.data() + off, v.data.data(), v.size() * sizeof(double));
        off += v.size();
    }
    Var outv = push(std::move(out), needs, nullptr);
    if (!needs) return outv;
    const int oid = outv.id;
    std::vector<int> ids;
    for (Var p : parts) ids.push_back(p.id);
    nodes_[oid].back = [oid, ids](Tape& t) {
        const Tensor& g = t.grads_[oid];
        std::size_t off = 0;
        for (int pid : ids) {
            const std::size_t n = t.nodes_[pid].value.size();
            if (t.nodes_[pid].needs_grad)
                K().axpy(1.0, g.data.data() + off, t.grad_buf(pid).data.data(), n);
            off += n;
        }
    };
    return outv;
}

Var Tape::slice(Var a, std::size_t start, std::size_t len) {
    check_id(a, "slice");
    const Tensor& A = nodes_[a.id].value;
    if (A.rank() != 1 || start + len > A.size())
        throw ShapeError("slice: range [" + std::to_string(start) + "," +
                         std::to_string(start + len) + ") out of " + A.shape_str());
    Tensor out({len});
    std::memcpy(out.data.data(), A.data.data() + start, len * sizeof(double));
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid, start, len](Tape& t) {
        K().axpy(1.0, t.grads_[oid].data.data(), t.grad_buf(aid).data.data() + start, len);
    };
    return outv;
}

Var Tape::row(Var a, std::size_t r) {
    check_id(a, "row");
    const Tensor& A = nodes_[a.id].value;
    if (A.rank() != 2 || r >= A.shape[0])
        throw ShapeError("row: index " + std::to_string(r) + " out of " + A.shape_str());
    const std::size_t c = A.shape[1];
    Tensor out({c});
    std::memcpy(out.data.data(), A.data.data() + r * c, c * sizeof(double));
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid, r, c](Tape& t) {
        K().axpy(1.0, t.grads_[oid].data.data(), t.grad_buf(aid).data.data() + r * c, c);
    };
    return outv;
}

Var Tape::stack_rows(std::size_t width, const std::vector<Var>& rows) {
    if (rows.empty()) throw ShapeError("stack_rows: empty row list");
    bool needs = false;
    for (Var r : rows) {
        if (!r.valid()) continue;
        check_id(r, "stack_rows");
        const Tensor& v = nodes_[r.id].value;
        if (v.rank() != 1 || v.size() != width) shape_fail("stack_rows", v);
        needs = needs || nodes_[r.id].needs_grad;
    }
    Tensor out({rows.size(), width});
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].valid())
            std::memcpy(out.data.data() + i * width, nodes_[rows[i].id].value.data.data(),
                        width * sizeof(double));
    Var outv = push(std::move(out), needs, nullptr);
    if (!needs) return outv;
    const int oid = outv.id;
    std::vector<int> ids;
    for (Var r : rows) ids.push_back(r.id);
    nodes_[oid].back = [oid, ids, width](Tape& t) {
        const Tensor& g = t.grads_[oid];
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] >= 0 && t.nodes_[ids[i]].needs_grad)
                K().axpy(1.0, g.data.data() + i * width, t.grad_buf(ids[i]).data.data(), width);
    };
    return outv;
}

Var Tape::reshape(Var a, std::vector<std::size_t> new_shape) {
    check_id(a, "reshape");
    const Tensor& A = nodes_[a.id].value;
    std::size_t n = 1;
    for (auto d : new_shape) n *= d;
    if (n != A.size())
        throw ShapeError("reshape: " + A.shape_str() + " -> " + sc::shape_str(new_shape) +
                         " changes element count");
    Tensor out = A;
    out.shape = std::move(new_shape);
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        K().axpy(1.0, g.data.data(), t.grad_buf(aid).data.data(), g.size());
    };
    return outv;
}

Var Tape::repeat_row(Var a, std::size_t n) {
    check_id(a, "repeat_row");
    const Tensor& A = nodes_[a.id].value;
    if (A.rank() != 1 || n == 0) shape_fail("repeat_row", A);
    const std::size_t f = A.size();
    Tensor out({n, f});
    for (std::size_t i = 0; i < n; ++i)
        std::memcpy(out.data.data() + i * f, A.data.data(), f * sizeof(double));
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid, n, f](Tape& t) {
        const Tensor& g = t.grads_[oid];
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < n; ++i)
            K().axpy(1.0, g.data.data() + i * f, da, f);
    };
    return outv;
}

Var Tape::hconcat(const std::vector<Var>& blocks) {
    if (blocks.empty()) throw ShapeError("hconcat: empty block list");
    std::size_t rows = 0, total_cols = 0;
    bool needs = false;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        check_id(blocks[b], "hconcat");
        const Tensor& v = nodes_[blocks[b].id].value;
        if (v.rank() != 2) shape_fail("hconcat", v);
        if (b == 0)
            rows = v.shape[0];
        else if (v.shape[0] != rows)
            shape_fail("hconcat", nodes_[blocks[0].id].value, v);
        total_cols += v.shape[1];
        needs = needs || nodes_[blocks[b].id].needs_grad;
    }
    Tensor out({rows, total_cols});
    std::size_t off = 0;
    for (Var b : blocks) {
        const Tensor& v = nodes_[b.id].value;
        const std::size_t c = v.shape[1];
        for (std::size_t i = 0; i < rows; ++i)
            std::memcpy(out.data.data() + i * total_cols + off, v.data.data() + i * c,
                        c * sizeof(double));
        off += c;
    }
    Var outv = push(std::move(out), needs, nullptr);
    if (!needs) return outv;
    const int oid = outv.id;
    std::vector<int> ids;
    for (Var b : blocks) ids.push_back(b.id);
    nodes_[oid].back = [oid, ids, rows, total_cols](Tape& t) {
        const Tensor& g = t.grads_[oid];
        std::size_t off = 0;
        for (int bid : ids) {
            const std::size_t c = t.nodes_[bid].value.shape[1];
            if (t.nodes_[bid].needs_grad) {
                double* db = t.grad_buf(bid).data.data();
                for (std::size_t i = 0; i < rows; ++i)
                    K().axpy(1.0, g.data.data() + i * total_cols + off, db + i * c, c);
            }
            off += c;
        }
    };
    return outv;
}

// ----------------------------------------------------------- elementwise

namespace {
enum class Unary { Tanh, Sigmoid, Relu, Softplus, Exp };
}

Var Tape::tanh(Var a) {
    check_id(a, "tanh");
    const Tensor& A = nodes_[a.id].value;
    Tensor out(A.shape);
    K().tanh(A.data.data(), out.data.data(), A.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& y = t.nodes_[oid].value;
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
            da[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
    };
    return outv;
}

Var Tape::sigmoid(Var a) {
    check_id(a, "sigmoid");
    const Tensor& A = nodes_[a.id].value;
    Tensor out(A.shape);
    K().sigmoid(A.data.data(), out.data.data(), A.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& y = t.nodes_[oid].value;
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
            da[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
    };
    return outv;
}

Var Tape::relu(Var a) {
    check_id(a, "relu");
    const Tensor& A = nodes_[a.id].value;
    Tensor out(A.shape);
    K().relu(A.data.data(), out.data.data(), A.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& x = t.nodes_[aid].value;
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
            if (x.data[i] > 0.0) da[i] += g.data[i];
    };
    return outv;
}

Var Tape::softplus(Var a) {
    check_id(a, "softplus");
    const Tensor& A = nodes_[a.id].value;
    Tensor out(A.shape);
    K().softplus(A.data.data(), out.data.data(), A.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& x = t.nodes_[aid].value;
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
            da[i] += g.data[i] / (1.0 + std::exp(-x.data[i]));
    };
    return outv;
}

Var Tape::exp(Var a) {
    check_id(a, "exp");
    const Tensor& A = nodes_[a.id].value;
    Tensor out(A.shape);
    K().exp(A.data.data(), out.data.data(), A.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& y = t.nodes_[oid].value;
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < g.size(); ++i) da[i] += g.data[i] * y.data[i];
    };
    return outv;
}

Var Tape::softmax(Var a) {
    check_id(a, "softmax");
    const Tensor& A = nodes_[a.id].value;
    if (A.rank() != 1 || A.size() == 0) shape_fail("softmax", A);
    Tensor out(A.shape);
    const double mx = *std::max_element(A.data.begin(), A.data.end());
    double z = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        out.data[i] = std::exp(A.data[i] - mx);
        z += out.data[i];
    }
    K().scale(out.data.data(), 1.0 / z, out.data.data(), out.size());
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& y = t.nodes_[oid].value;
        const double dy_y = K().dot(g.data.data(), y.data.data(), g.size());
        double* da = t.grad_buf(aid).data.data();
        for (std::size_t i = 0; i < g.size(); ++i)
            da[i] += y.data[i] * (g.data[i] - dy_y);
    };
    return outv;
}

// ------------------------------------------------------------ reductions

Var Tape::sum(Var a) {
    check_id(a, "sum");
    const Tensor& A = nodes_[a.id].value;
    Tensor out = Tensor::scalar(K().sum(A.data.data(), A.size()));
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid](Tape& t) {
        const double g = t.grads_[oid].data[0];
        Tensor& da = t.grad_buf(aid);
        for (auto& v : da.data) v += g;
    };
    return outv;
}

Var Tape::mean(Var a) {
    check_id(a, "mean");
    const Tensor& A = nodes_[a.id].value;
    if (A.size() == 0) shape_fail("mean", A);
    const double inv = 1.0 / static_cast<double>(A.size());
    Tensor out = Tensor::scalar(K().sum(A.data.data(), A.size()) * inv);
    const bool na = nodes_[a.id].needs_grad;
    Var outv = push(std::move(out), na, nullptr);
    if (!na) return outv;
    const int oid = outv.id, aid = a.id;
    nodes_[oid].back = [oid, aid, inv](Tape& t) {
        const double g = t.grads_[oid].data[0] * inv;
        Tensor& da = t.grad_buf(aid);
        for (auto& v : da.data) v += g;
    };
    return outv;
}

Var Tape::squared_error(Var a, Var b) {
    check_id(a, "squared_error");
    check_id(b, "squared_error");
    const Tensor& A = nodes_[a.id].value;
    const Tensor& B = nodes_[b.id].value;
    if (!A.same_shape(B)) shape_fail("squared_error", A, B);
    double acc = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double d = A.data[i] - B.data[i];
        acc += d * d;
    }
    const bool na = nodes_[a.id].needs_grad, nb = nodes_[b.id].needs_grad;
    Var outv = push(Tensor::scalar(acc), na || nb, nullptr);
    if (!(na || nb)) return outv;
    const int oid = outv.id, aid = a.id, bid = b.id;
    nodes_[oid].back = [oid, aid, bid, na, nb](Tape& t) {
        const double g = t.grads_[oid].data[0];
        const Tensor& A = t.nodes_[aid].value;
        const Tensor& B = t.nodes_[bid].value;
        if (na) {
            double* da = t.grad_buf(aid).data.data();
            for (std::size_t i = 0; i < A.size(); ++i)
                da[i] += 2.0 * g * (A.data[i] - B.data[i]);
        }
        if (nb) {
            double* db = t.grad_buf(bid).data.data();
            for (std::size_t i = 0; i < A.size(); ++i)
                db[i] -= 2.0 * g * (A.data[i] - B.data[i]);
        }
    };
    return outv;
}

Var Tape::bce(Var p, const Tensor& target) {
    check_id(p, "bce");
    const Tensor& P = nodes_[p.id].value;
    if (!P.same_shape(target)) shape_fail("bce", P, target);
    const std::size_t n = P.size();
    if (n == 0) shape_fail("bce", P);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pv = P.data[i];
        if (!(pv > 0.0 && pv < 1.0))
            throw NumericError("bce: probability " + std::to_string(pv) + " outside (0,1)");
        acc -= target.data[i] * std::log(pv) + (1.0 - target.data[i]) * std::log(1.0 - pv);
    }
    const double inv = 1.0 / static_cast<double>(n);
    const bool np = nodes_[p.id].needs_grad;
    Var outv = push(Tensor::scalar(acc * inv), np, nullptr);
    if (!np) return outv;
    const int oid = outv.id, pid = p.id;
    Tensor tgt = target;
    nodes_[oid].back = [oid, pid, tgt = std::move(tgt), inv](Tape& t) {
        const double g = t.grads_[oid].data[0] * inv;
        const Tensor& P = t.nodes_[pid].value;
        double* dp = t.grad_buf(pid).data.data();
        for (std::size_t i = 0; i < P.size(); ++i)
            dp[i] += g * (-tgt.data[i] / P.data[i] +
                          (1.0 - tgt.data[i]) / (1.0 - P.data[i]));
    };
    return outv;
}

// ------------------------------------------------------------ batch norm

Var Tape::batch_norm(Var x, Var gamma, Var beta, BatchNormState& state, bool training) {
    check_id(x, "batch_norm");
    check_id(gamma, "batch_norm");
    check_id(beta, "batch_norm");
    const Tensor& X = nodes_[x.id].value;
    const Tensor& G = nodes_[gamma.id].value;
    const Tensor& Bt = nodes_[beta.id].value;
    if (X.rank() != 2) shape_fail("batch_norm", X);
    const std::size_t b = X.shape[0], f = X.shape[1];
    if (G.rank() != 1 || G.size() != f) shape_fail("batch_norm", X, G);
    if (Bt.rank() != 1 || Bt.size() != f) shape_fail("batch_norm", X, Bt);
    if (state.running_mean.size() != f) {
        state.running_mean = Tensor({f});
        state.running_var = Tensor::full({f}, 1.0);
    }

    Tensor mean_t({f}), var_t({f});
    if (training) {
        for (std::size_t j = 0; j < f; ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < b; ++i) m += X.at(i, j);
            m /= static_cast<double>(b);
            double v = 0.0;
            for (std::size_t i = 0; i < b; ++i) {
                const double d = X.at(i, j) - m;
                v += d * d;
            }
            v /= static_cast<double>(b);
            mean_t.data[j] = m;
            var_t.data[j] = v;
            state.running_mean.data[j] =
                state.momentum * state.running_mean.data[j] + (1.0 - state.momentum) * m;
            state.running_var.data[j] =
                state.momentum * state.running_var.data[j] + (1.0 - state.momentum) * v;
        }
        ++state.batches_seen;
    } else {
        mean_t = state.running_mean;
        var_t = state.running_var;
    }

    Tensor xhat({b, f}), out({b, f});
    Tensor inv_std({f});
    for (std::size_t j = 0; j < f; ++j)
        inv_std.data[j] = 1.0 / std::sqrt(var_t.data[j] + state.eps);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < f; ++j) {
            xhat.at(i, j) = (X.at(i, j) - mean_t.data[j]) * inv_std.data[j];
            out.at(i, j) = G.data[j] * xhat.at(i, j) + Bt.data[j];
        }

    const bool nx = nodes_[x.id].needs_grad;
    const bool ng = nodes_[gamma.id].needs_grad;
    const bool nb = nodes_[beta.id].needs_grad;
    Var outv = push(std::move(out), nx || ng || nb, nullptr);
    if (!(nx || ng || nb)) return outv;
    const int oid = outv.id, xid = x.id, gid = gamma.id, bid = beta.id;
    nodes_[oid].back = [oid, xid, gid, bid, nx, ng, nb, b, f, training,
                        xhat = std::move(xhat), inv_std = std::move(inv_std)](Tape& t) {
        const Tensor& g = t.grads_[oid];
        const Tensor& G = t.nodes_[gid].value;
        if (ng) {
            double* dg = t.grad_buf(gid).data.data();
            for (std::size_t j = 0; j < f; ++j)
                for (std::size_t i = 0; i < b; ++i) dg[j] += g.at(i, j) * xhat.at(i, j);
        }
        if (nb) {
            double* db = t.grad_buf(bid).data.data();
            for (std::size_t j = 0; j < f; ++j)
                for (std::size_t i = 0; i < b; ++i) db[j] += g.at(i, j);
        }
        if (nx) {
            double* dx = t.grad_buf(xid).data.data();
            if (!training) {
                for (std::size_t i = 0; i < b; ++i)
                    for (std::size_t j = 0; j < f; ++j)
                        dx[i * f + j] += g.at(i, j) * G.data[j] * inv_std.data[j];
            } else {
                const double invb = 1.0 / static_cast<double>(b);
                for (std::size_t j = 0; j < f; ++j) {
                    double sum_dy = 0.0, sum_dy_xhat = 0.0;
                    for (std::size_t i = 0; i < b; ++i) {
                        const double dxh = g.at(i, j) * G.data[j];
                        sum_dy += dxh;
                        sum_dy_xhat += dxh * xhat.at(i, j);
                    }
                    for (std::size_t i = 0; i < b; ++i) {
                        const double dxh = g.at(i, j) * G.data[j];
                        dx[i * f + j] += inv_std.data[j] *
                                         (dxh - invb * sum_dy -
                                          invb * xhat.at(i, j) * sum_dy_xhat);
                    }
                }
            }
        }
    };
    return outv;
}

}  // namespace sc
