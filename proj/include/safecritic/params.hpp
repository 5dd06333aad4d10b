#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "safecritic/tape.hpp"
#include "safecritic/tensor.hpp"

namespace sc {

// Ordered registry of named parameter tensors. Layers own the storage and
// register pointers; the order of registration defines checkpoint order.
// Non-trainable entries (batch-norm running stats) are checkpointed but
// skipped by the optimizer.
class ParamStore {
public:
    struct Entry {
        std::string name;
        Tensor* tensor;
        bool trainable;
    };

    void add(std::string name, Tensor* t, bool trainable = true);
    const std::vector<Entry>& entries() const { return entries_; }
    Tensor* find(const std::string& name) const;
    std::size_t scalar_count() const;

    // Sum of all values; cheap fingerprint for isolation assertions.
    double checksum() const;

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

using GradMap = std::unordered_map<std::string, Tensor>;

// Per-forward-pass binding of parameters to tape leaves. Each parameter
// becomes one leaf per pass; repeated lookups return the same Var so
// gradients accumulate correctly across uses (shared weights).
class ParamBinder {
public:
    ParamBinder(Tape& tape, GradMap* sink = nullptr) : tape_(tape), sink_(sink) {}

    Var operator()(Tensor& param);

    // After backward(), pull gradients for every bound parameter of
    // `store` into a GradMap keyed by parameter name.
    GradMap collect(const ParamStore& store) const;

private:
    Tape& tape_;
    GradMap* sink_;
    std::unordered_map<const Tensor*, Var> bound_;
};

}  // namespace sc
