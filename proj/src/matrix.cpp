#include "dirtopo/matrix.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace dirtopo {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw ShapeMismatch(what);
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols == b.rows, "matmul: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a.data[i * a.cols + k];
            if (aik == 0.0) continue;
            const double* brow = &b.data[k * b.cols];
            double* orow = &out.data[i * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    require(a.rows == b.rows, "matmul_tn: row counts differ");
    Matrix out(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = &a.data[k * a.cols];
        const double* brow = &b.data[k * b.cols];
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* orow = &out.data[i * b.cols];
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    require(a.cols == b.cols, "matmul_nt: column counts differ");
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = &a.data[i * a.cols];
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = &b.data[j * b.cols];
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            out.data[i * b.rows + j] = acc;
        }
    }
    return out;
}

void add_inplace(Matrix& a, const Matrix& b) {
    require(a.rows == b.rows && a.cols == b.cols, "add: shapes differ");
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void scale_inplace(Matrix& a, double s) {
    for (double& x : a.data) x *= s;
}

void relu_inplace(Matrix& a) {
    for (double& x : a.data) x = x > 0.0 ? x : 0.0;
}

void relu_backward_inplace(Matrix& grad, const Matrix& preactivation) {
    require(grad.rows == preactivation.rows && grad.cols == preactivation.cols,
            "relu backward: shapes differ");
    for (std::size_t i = 0; i < grad.data.size(); ++i) {
        if (preactivation.data[i] <= 0.0) grad.data[i] = 0.0;
    }
}

void add_row_inplace(Matrix& a, const Matrix& bias_row) {
    require(bias_row.rows == 1 && bias_row.cols == a.cols, "bias: shape differs");
    for (std::size_t r = 0; r < a.rows; ++r) {
        double* row = &a.data[r * a.cols];
        for (std::size_t c = 0; c < a.cols; ++c) row[c] += bias_row.data[c];
    }
}

CsrMatrix CsrMatrix::from_triplets(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t) {
    std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) {
        return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
    });
    CsrMatrix m(rows, cols);
    for (std::size_t p = 0; p < t.size();) {
        auto [r, c, v] = t[p];
        if (r >= rows || c >= cols) throw IndexOutOfRange("triplet outside matrix bounds");
        double sum = 0.0;
        while (p < t.size() && std::get<0>(t[p]) == r && std::get<1>(t[p]) == c) {
            sum += std::get<2>(t[p]);
            ++p;
        }
        m.col.push_back(c);
        m.val.push_back(sum);
        ++m.row_ptr[r + 1];
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    return m;
}

Matrix CsrMatrix::apply(const Matrix& x) const {
    if (x.rows != cols) throw ShapeMismatch("csr apply: operand row count differs");
    Matrix out(rows, x.cols);
    for (std::size_t r = 0; r < rows; ++r) {
        double* orow = &out.data[r * x.cols];
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            const double v = val[p];
            const double* xrow = &x.data[col[p] * x.cols];
            for (std::size_t c = 0; c < x.cols; ++c) orow[c] += v * xrow[c];
        }
    }
    return out;
}

Matrix CsrMatrix::apply_transpose(const Matrix& x) const {
    if (x.rows != rows) throw ShapeMismatch("csr apply_transpose: operand row count differs");
    Matrix out(cols, x.cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* xrow = &x.data[r * x.cols];
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            const double v = val[p];
            double* orow = &out.data[col[p] * x.cols];
            for (std::size_t c = 0; c < x.cols; ++c) orow[c] += v * xrow[c];
        }
    }
    return out;
}

CsrMatrix CsrMatrix::transpose() const {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    t.reserve(nnz());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            t.emplace_back(col[p], static_cast<std::uint32_t>(r), val[p]);
        }
    }
    return from_triplets(cols, rows, std::move(t));
}

}  // namespace dirtopo
