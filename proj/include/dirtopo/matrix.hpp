#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dirtopo/errors.hpp"

namespace dirtopo {

/// Dense row-major matrix of doubles. Sized for desk-scale models; no view
/// semantics, copies are explicit.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

void add_inplace(Matrix& a, const Matrix& b);
void scale_inplace(Matrix& a, double s);
void relu_inplace(Matrix& a);
/// Zeroes entries of grad where the forward pre-activation was negative.
void relu_backward_inplace(Matrix& grad, const Matrix& preactivation);
/// Adds the bias row vector to every row of a.
void add_row_inplace(Matrix& a, const Matrix& bias_row);

/// Sparse matrix in compressed-sparse-row form with double values; used both
/// for boolean adjacency operators (values 1.0) and weighted operators.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr;  // size rows+1
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    CsrMatrix() = default;
    CsrMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), row_ptr(r + 1, 0) {}

    std::size_t nnz() const { return col.size(); }

    /// Builds from (row, col, value) triplets; duplicate coordinates are
    /// summed. Triplets may arrive in any order.
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t);

    Matrix apply(const Matrix& x) const;            // this * x
    Matrix apply_transpose(const Matrix& x) const;  // this^T * x
    CsrMatrix transpose() const;

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;
};

}  // namespace dirtopo
