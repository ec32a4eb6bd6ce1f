#ifndef CFGD_LINALG_HPP
#define CFGD_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace cfgd {

/// Dense real vector.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vector(std::initializer_list<double> init) : data_(init) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    const std::vector<double>& values() const { return data_; }

    Vector& operator+=(const Vector& rhs);
    Vector& operator-=(const Vector& rhs);
    Vector& operator*=(double s);

    bool all_finite() const;

private:
    std::vector<double> data_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(double s, Vector v);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm_inf(const Vector& v);

/// Dense row-major real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& values() const { return data_; }

    Matrix transposed() const;
    Vector diag() const;
    bool is_symmetric(double tol = 1e-12) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Vector matvec(const Matrix& A, const Vector& x);
Vector matvec_transposed(const Matrix& A, const Vector& x);
Matrix matmul(const Matrix& A, const Matrix& B);
Matrix operator+(const Matrix& A, const Matrix& B);
Matrix operator-(const Matrix& A, const Matrix& B);
Matrix operator*(double s, Matrix A);

/// A * A^T without forming the transpose.
Matrix gram(const Matrix& A);

/// Symmetric tridiagonal matrix; carrier for the Golub-Welsch eigenproblem.
struct SymTridiagonal {
    Vector diagonal;
    Vector off_diagonal; // length = diagonal.size() - 1
};

/// Solve A x = b for symmetric positive definite A via Cholesky.
/// Throws NotSpd on a non-positive pivot, DimensionMismatch on shape errors.
Vector spd_solve(const Matrix& A, const Vector& b);

/// Cholesky factor check only; true iff A (assumed symmetric) is positive definite.
bool is_positive_definite(const Matrix& A);

struct TridiagonalEigen {
    Vector values;           // ascending
    Vector first_components; // first component of each unit-norm eigenvector
};

/// Eigenvalues of a symmetric tridiagonal matrix (implicit-shift QL), ascending,
/// with the first components of the corresponding unit-norm eigenvectors.
TridiagonalEigen sym_eigenvalues(const SymTridiagonal& T);

struct SymmetricEigen {
    Vector values;   // ascending
    Matrix vectors;  // column j is the eigenvector for values[j]
};

/// Full eigendecomposition of a dense symmetric matrix
/// (Householder tridiagonalization followed by implicit-shift QL).
SymmetricEigen sym_eigen(const Matrix& A);

/// (sigma_min, sigma_max) of a general matrix. sigma_max by power iteration on
/// the smaller Gram matrix from an all-ones start; sigma_min from the full
/// symmetric eigensolve of the same Gram matrix.
std::pair<double, double> extreme_singular_values(const Matrix& M);

/// Spectral norm, i.e. the largest singular value.
double spectral_norm(const Matrix& M);

/// Ratio of the largest to the smallest eigenvalue of a symmetric positive
/// definite matrix. Throws NotSpd if an eigenvalue is not strictly positive.
double condition_number(const Matrix& A);

} // namespace cfgd

#endif
