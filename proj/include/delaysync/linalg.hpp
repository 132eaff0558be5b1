#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace delaysync {

/// Dense row-major matrix of doubles. Everything in this project is
/// desk-scale (k up to a few hundred), so there is no sparse storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::span<const double> data() const { return data_; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

double frobenius_norm(const Matrix& a);
double max_asymmetry(const Matrix& a);
double trace(const Matrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// nondecreasing. Converges when off(A) < 1e-12 * ||A||_F; at most 100
/// sweeps. Throws std::invalid_argument if the input asymmetry exceeds
/// 1e-12 relative.
std::vector<double> jacobi_eigenvalues(Matrix a);

} // namespace delaysync
