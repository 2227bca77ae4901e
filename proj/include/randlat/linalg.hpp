#pragma once

// Small dense linear algebra for d <= 8. Matrices are row-major; lattice
// bases store basis vectors as COLUMNS.

#include <cstddef>
#include <span>
#include <vector>

namespace randlat {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);
    /// Throws DimensionMismatch on ragged input.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> v);
    std::vector<std::vector<double>> to_rows() const;

    std::span<const double> data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, std::span<const double> x);
Matrix scaled(const Matrix& a, double s);

/// LU with partial pivoting.
double determinant(const Matrix& a);
/// Gauss–Jordan inverse; throws NumericalFailure if singular.
Matrix inverse(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm(std::span<const double> a);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);

/// Max-abs entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Gram–Schmidt data of the columns of a basis: B = Q R with Q orthogonal and
/// R upper triangular with positive diagonal. mu(i, j) = <b_i, b*_j> / |b*_j|^2
/// for j < i and star_norm2[i] = |b*_i|^2.
struct GramSchmidt {
    Matrix q;
    Matrix r;
    Matrix mu;
    std::vector<double> star_norm2;
};

GramSchmidt gram_schmidt(const Matrix& basis);

}  // namespace randlat
