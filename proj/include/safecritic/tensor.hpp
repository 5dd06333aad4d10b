#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace sc {

// Dense row-major tensor of doubles. Rank 1 and 2 cover nearly everything;
// grids are stored flattened to (cells x features) matrices.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);
    static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }
    static Tensor full(std::vector<std::size_t> s, double v);
    static Tensor scalar(double v);
    static Tensor vector(std::initializer_list<double> v);
    static Tensor from(std::vector<std::size_t> s, std::vector<double> d);

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t rows() const;  // rank-2 only
    std::size_t cols() const;  // rank-2 only

    double& at(std::size_t i) { return data[i]; }
    double at(std::size_t i) const { return data[i]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    bool all_finite() const;
    std::string shape_str() const;
};

std::string shape_str(const std::vector<std::size_t>& s);

}  // namespace sc
