#include "safecritic/params.hpp"

#include "safecritic/errors.hpp"
#include "safecritic/kernels.hpp"

namespace sc {

void ParamStore::add(std::string name, Tensor* t, bool trainable) {
    if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
    index_[name] = entries_.size();
    entries_.push_back(Entry{std::move(name), t, trainable});
}

Tensor* ParamStore::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : entries_[it->second].tensor;
}

std::size_t ParamStore::scalar_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.tensor->size();
    return n;
}

double ParamStore::checksum() const {
    double acc = 0.0;
    for (const auto& e : entries_)
        acc += kern::ops().sum(e.tensor->data.data(), e.tensor->size());
    return acc;
}

Var ParamBinder::operator()(Tensor& param) {
    auto it = bound_.find(&param);
    if (it != bound_.end()) return it->second;
    Var v = tape_.leaf(param);
    bound_.emplace(&param, v);
    return v;
}

GradMap ParamBinder::collect(const ParamStore& store) const {
    GradMap out;
    for (const auto& e : store.entries()) {
        auto it = bound_.find(e.tensor);
        if (it != bound_.end()) out.emplace(e.name, tape_.grad(it->second));
    }
    return out;
}

}  // namespace sc
