#include "safecritic/tensor.hpp"

#include <cmath>
#include <sstream>

#include "safecritic/errors.hpp"

namespace sc {

namespace {
std::size_t product(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (auto d : s) n *= d;
    return n;
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)), data(product(shape), 0.0) {}

Tensor Tensor::full(std::vector<std::size_t> s, double v) {
    Tensor t(std::move(s));
    for (auto& x : t.data) x = v;
    return t;
}

Tensor Tensor::scalar(double v) {
    Tensor t({1});
    t.data[0] = v;
    return t;
}

Tensor Tensor::vector(std::initializer_list<double> v) {
    Tensor t;
    t.shape = {v.size()};
    t.data.assign(v.begin(), v.end());
    return t;
}

Tensor Tensor::from(std::vector<std::size_t> s, std::vector<double> d) {
    if (product(s) != d.size())
        throw ShapeError("Tensor::from: shape " + sc::shape_str(s) + " does not match " +
                         std::to_string(d.size()) + " values");
    Tensor t;
    t.shape = std::move(s);
    t.data = std::move(d);
    return t;
}

std::size_t Tensor::rows() const {
    if (rank() != 2) throw ShapeError("rows(): tensor is rank " + std::to_string(rank()));
    return shape[0];
}

std::size_t Tensor::cols() const {
    if (rank() != 2) throw ShapeError("cols(): tensor is rank " + std::to_string(rank()));
    return shape[1];
}

bool Tensor::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string Tensor::shape_str() const { return sc::shape_str(shape); }

std::string shape_str(const std::vector<std::size_t>& s) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << 'x';
        os << s[i];
    }
    os << ')';
    return os.str();
}

}  // namespace sc
