#include "cfgd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfgd/errors.hpp"

namespace cfgd {

namespace {

void require_same_size(const Vector& a, const Vector& b, const char* op) {
    if (a.size() != b.size())
        throw DimensionMismatch(std::string(op) + ": vector sizes " +
                                std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

double pythag(double a, double b) {
    return std::hypot(a, b);
}

} // namespace

Vector& Vector::operator+=(const Vector& rhs) {
    require_same_size(*this, rhs, "operator+=");
    for (std::size_t i = 0; i < size(); ++i) data_[i] += rhs[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
    require_same_size(*this, rhs, "operator-=");
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= rhs[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

bool Vector::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator*(double s, Vector v) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
    require_same_size(a, b, "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix D(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
    return D;
}

Matrix Matrix::transposed() const {
    Matrix T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    return T;
}

Vector Matrix::diag() const {
    const std::size_t n = std::min(rows_, cols_);
    Vector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
    return d;
}

bool Matrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    double scale = 0.0;
    for (double v : data_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return true;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol * scale) return false;
    return true;
}

Vector matvec(const Matrix& A, const Vector& x) {
    if (A.cols() != x.size())
        throw DimensionMismatch("matvec: " + std::to_string(A.cols()) + " columns vs vector of " +
                                std::to_string(x.size()));
    Vector y(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) acc += A(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

Vector matvec_transposed(const Matrix& A, const Vector& x) {
    if (A.rows() != x.size())
        throw DimensionMismatch("matvec_transposed: " + std::to_string(A.rows()) +
                                " rows vs vector of " + std::to_string(x.size()));
    Vector y(A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) y[j] += A(i, j) * x[i];
    return y;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
    if (A.cols() != B.rows()) throw DimensionMismatch("matmul: inner dimensions disagree");
    Matrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += a * B(k, j);
        }
    return C;
}

Matrix operator+(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw DimensionMismatch("matrix addition: shapes disagree");
    Matrix C(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j) + B(i, j);
    return C;
}

Matrix operator-(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw DimensionMismatch("matrix subtraction: shapes disagree");
    Matrix C(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j) - B(i, j);
    return C;
}

Matrix operator*(double s, Matrix A) {
    Matrix C = std::move(A);
    for (std::size_t i = 0; i < C.rows(); ++i)
        for (std::size_t j = 0; j < C.cols(); ++j) C(i, j) *= s;
    return C;
}

Matrix gram(const Matrix& A) {
    Matrix G(A.rows(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = i; j < A.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < A.cols(); ++k) acc += A(i, k) * A(j, k);
            G(i, j) = acc;
            G(j, i) = acc;
        }
    return G;
}

namespace {

// Lower Cholesky factor; throws NotSpd on a non-positive pivot.
Matrix cholesky(const Matrix& A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("cholesky: matrix not square");
    Matrix L(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw NotSpd("cholesky: non-positive pivot at index " + std::to_string(j));
        const double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = A(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= L(i, k) * L(j, k);
            L(i, j) = acc / ljj;
        }
    }
    return L;
}

} // namespace

Vector spd_solve(const Matrix& A, const Vector& b) {
    if (A.rows() != b.size()) throw DimensionMismatch("spd_solve: matrix/vector sizes disagree");
    const Matrix L = cholesky(A);
    const std::size_t n = b.size();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= L(i, k) * y[k];
        y[i] = acc / L(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= L(k, ii) * x[k];
        x[ii] = acc / L(ii, ii);
    }
    if (!x.all_finite()) throw NotSpd("spd_solve: non-finite solution");
    return x;
}

bool is_positive_definite(const Matrix& A) {
    try {
        cholesky(A);
        return true;
    } catch (const NotSpd&) {
        return false;
    }
}

namespace {

// Implicit-shift QL for a symmetric tridiagonal matrix. Descended from the
// Algol tql2 procedure (Bowdler, Martin, Reinsch, Wilkinson) via EISPACK.
// d holds the diagonal, e the subdiagonal in e[0..n-2]; on return d holds the
// eigenvalues (unsorted). If rot != nullptr its columns are rotated along,
// so seeding it with the identity accumulates full eigenvectors and seeding a
// single row [1, 0, ..., 0] accumulates the first eigenvector components.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix* rot) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, 0.0);

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw NoConvergence("tridiagonal_ql: more than 50 sweeps");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (rot) {
                        for (std::size_t k = 0; k < rot->rows(); ++k) {
                            f = (*rot)(k, i + 1);
                            (*rot)(k, i + 1) = s * (*rot)(k, i) + c * f;
                            (*rot)(k, i) = c * (*rot)(k, i) - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Sort eigenvalues ascending, permuting the tracked columns along.
void sort_eigen(std::vector<double>& d, Matrix* rot) {
    const std::size_t n = d.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> ds(n);
    for (std::size_t i = 0; i < n; ++i) ds[i] = d[perm[i]];
    d = std::move(ds);
    if (rot) {
        Matrix sorted(rot->rows(), rot->cols());
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < rot->rows(); ++k) sorted(k, j) = (*rot)(k, perm[j]);
        *rot = std::move(sorted);
    }
}

} // namespace

TridiagonalEigen sym_eigenvalues(const SymTridiagonal& T) {
    const std::size_t n = T.diagonal.size();
    if (n == 0) return {};
    if (T.off_diagonal.size() + 1 != n)
        throw DimensionMismatch("sym_eigenvalues: off-diagonal length must be n-1");

    std::vector<double> d(T.diagonal.begin(), T.diagonal.end());
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = T.off_diagonal[i];

    Matrix first_row(1, n);
    first_row(0, 0) = 1.0;
    tridiagonal_ql(d, e, &first_row);
    sort_eigen(d, &first_row);

    TridiagonalEigen out;
    out.values = Vector(d);
    out.first_components = Vector(n);
    for (std::size_t j = 0; j < n; ++j) out.first_components[j] = first_row(0, j);
    return out;
}

namespace {

// Householder reduction to tridiagonal form with accumulation of the
// orthogonal transform (tred2 lineage).
void householder_tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    for (std::size_t ii = n; ii-- > 1;) {
        const std::size_t i = ii;
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }

    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

} // namespace

SymmetricEigen sym_eigen(const Matrix& A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("sym_eigen: matrix not square");
    if (n == 0) return {};
    if (n == 1) {
        SymmetricEigen out;
        out.values = Vector{A(0, 0)};
        out.vectors = Matrix::identity(1);
        return out;
    }

    Matrix z = A;
    std::vector<double> d, e;
    householder_tridiagonalize(z, d, e);
    // tql expects the subdiagonal in e[0..n-2]; tred2 leaves it in e[1..n-1].
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    tridiagonal_ql(d, e, &z);
    sort_eigen(d, &z);

    SymmetricEigen out;
    out.values = Vector(d);
    out.vectors = std::move(z);
    return out;
}

namespace {

// Largest eigenvalue of a symmetric PSD matrix by power iteration from the
// all-ones vector (deterministic traces). Rayleigh-quotient stop; returns
// false when the quotient has not settled within the sweep cap.
bool power_largest_eigenvalue(const Matrix& S, double& lambda_out) {
    const std::size_t n = S.rows();
    Vector v(n, 1.0);
    v *= 1.0 / norm2(v);
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Vector w = matvec(S, v);
        const double next = dot(v, w);
        const double nw = norm2(w);
        if (nw == 0.0) {
            lambda_out = 0.0;
            return true;
        }
        w *= 1.0 / nw;
        v = std::move(w);
        if (it > 0 && std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next))) {
            lambda_out = next;
            return true;
        }
        lambda = next;
    }
    return false;
}

} // namespace

std::pair<double, double> extreme_singular_values(const Matrix& M) {
    if (M.rows() == 0 || M.cols() == 0)
        throw DimensionMismatch("extreme_singular_values: empty matrix");
    const Matrix S = (M.rows() <= M.cols()) ? gram(M) : gram(M.transposed());
    const SymmetricEigen eig = sym_eigen(S);
    const double lam_min = eig.values[0];
    const double lam_max = eig.values[eig.values.size() - 1];
    return {std::sqrt(std::max(lam_min, 0.0)), std::sqrt(std::max(lam_max, 0.0))};
}

double spectral_norm(const Matrix& M) {
    if (M.rows() == 0 || M.cols() == 0) throw DimensionMismatch("spectral_norm: empty matrix");
    const Matrix S = (M.rows() <= M.cols()) ? gram(M) : gram(M.transposed());
    double lam = 0.0;
    if (!power_largest_eigenvalue(S, lam)) {
        // Clustered top of the spectrum; the dense eigensolve settles it.
        const SymmetricEigen eig = sym_eigen(S);
        lam = eig.values[eig.values.size() - 1];
    }
    return std::sqrt(std::max(lam, 0.0));
}

double condition_number(const Matrix& A) {
    if (!A.is_symmetric()) throw NotSpd("condition_number: matrix not symmetric");
    const SymmetricEigen eig = sym_eigen(A);
    const double lo = eig.values[0];
    const double hi = eig.values[eig.values.size() - 1];
    if (!(lo > 0.0)) throw NotSpd("condition_number: matrix not positive definite");
    return hi / lo;
}

} // namespace cfgd
