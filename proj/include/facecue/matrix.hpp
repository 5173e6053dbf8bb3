#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "facecue/errors.hpp"

namespace facecue {

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void set_row(std::size_t r, std::span<const double> values) {
        if (values.size() != cols_)
            throw Error(Errc::DimensionMismatch, "row width " + std::to_string(values.size()) +
                                                     " != matrix width " + std::to_string(cols_));
        for (std::size_t c = 0; c < cols_; ++c) at(r, c) = values[c];
    }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
        return out;
    }

    Matrix select_rows(std::span<const int> indices) const {
        Matrix out(indices.size(), cols_);
        for (std::size_t i = 0; i < indices.size(); ++i)
            out.set_row(i, row(static_cast<std::size_t>(indices[i])));
        return out;
    }

    Matrix select_columns(std::span<const int> indices) const {
        Matrix out(rows_, indices.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t i = 0; i < indices.size(); ++i)
                out.at(r, i) = at(r, static_cast<std::size_t>(indices[i]));
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace facecue
