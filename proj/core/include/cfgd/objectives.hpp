#ifndef CFGD_OBJECTIVES_HPP
#define CFGD_OBJECTIVES_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "cfgd/linalg.hpp"

namespace cfgd {

/// Objective-function contract. Besides value and full gradient, objectives
/// expose the coordinate-restricted derivatives
///   f_{j,x}(y) = f(x + (y - x_j) e_j)
/// evaluated at arbitrary points, which is what the quadrature direction
/// consumes. coord_first(j, x, x_j) must equal gradient(x)_j.
class Objective {
public:
    virtual ~Objective() = default;

    virtual std::size_t dimension() const = 0;
    virtual double value(const Vector& x) const = 0;
    virtual Vector gradient(const Vector& x) const = 0;

    virtual double coord_first(std::size_t j, const Vector& x, double u) const = 0;
    virtual double coord_second(std::size_t j, const Vector& x, double u) const = 0;

    virtual bool is_quadratic() const { return false; }
    virtual bool has_coordinate_second_derivative() const { return true; }

    /// Hessian and linear term of a quadratic objective; only meaningful when
    /// is_quadratic() is true.
    virtual const Matrix& quadratic_matrix() const;
    virtual const Vector& quadratic_vector() const;

    /// Hook for objectives that precompute per-iterate state (see
    /// TwoLayerTanhNet). No-op by default.
    virtual void prepare_cache(const Vector& /*x*/) {}
};

/// f(x) = 1/2 x'Ax + b'x + c0 with A symmetric positive definite.
class QuadraticObjective : public Objective {
public:
    QuadraticObjective(Matrix A, Vector b, double c0 = 0.0);

    std::size_t dimension() const override { return b_.size(); }
    double value(const Vector& x) const override;
    Vector gradient(const Vector& x) const override;
    double coord_first(std::size_t j, const Vector& x, double u) const override;
    double coord_second(std::size_t j, const Vector& x, double u) const override;
    bool is_quadratic() const override { return true; }
    const Matrix& quadratic_matrix() const override { return A_; }
    const Vector& quadratic_vector() const override { return b_; }

    /// Unique minimizer -A^{-1} b.
    Vector minimizer() const;

private:
    Matrix A_;
    Vector b_;
    double c0_;
};

/// f(x) = 1/2 ||W' x - y||^2; the quadratic form has A = WW', b = -Wy.
class LeastSquaresObjective : public Objective {
public:
    LeastSquaresObjective(Matrix W, Vector y);

    std::size_t dimension() const override { return W_.rows(); }
    double value(const Vector& x) const override;
    Vector gradient(const Vector& x) const override;
    double coord_first(std::size_t j, const Vector& x, double u) const override;
    double coord_second(std::size_t j, const Vector& x, double u) const override;
    bool is_quadratic() const override { return true; }
    const Matrix& quadratic_matrix() const override { return A_; }
    const Vector& quadratic_vector() const override { return b_; }

    const Matrix& design() const { return W_; }
    const Vector& targets() const { return y_; }
    bool has_unique_minimizer() const { return full_rank_; }

    /// (WW')^{-1} W y; requires the Gram matrix to be positive definite.
    Vector minimizer() const;

private:
    Matrix W_; // d x m
    Vector y_; // m
    Matrix A_;
    Vector b_;
    bool full_rank_;
};

/// Two-layer tanh network N(z) = sum_j a3_j tanh(a1_j z + a2_j) with the
/// squared-error loss over m samples. Parameters are flattened block-wise:
/// index l < n is a1, n <= l < 2n is a2, 2n <= l < 3n is a3.
///
/// Coordinate-restricted derivatives require prepare_cache(x) at the same
/// base point first; they then cost O(m) apiece via the stored misfit.
class TwoLayerTanhNet : public Objective {
public:
    TwoLayerTanhNet(std::vector<double> inputs, std::vector<double> targets, std::size_t width);

    std::size_t dimension() const override { return 3 * width_; }
    double value(const Vector& x) const override;
    Vector gradient(const Vector& x) const override;
    double coord_first(std::size_t j, const Vector& x, double u) const override;
    double coord_second(std::size_t j, const Vector& x, double u) const override;
    bool is_quadratic() const override { return false; }
    void prepare_cache(const Vector& x) override;

    std::size_t width() const { return width_; }
    std::size_t sample_count() const { return inputs_.size(); }

    /// Network prediction at z for parameters x.
    double predict(double z, const Vector& x) const;

    /// Cached feature matrix (width x m) and misfit; valid after prepare_cache.
    const Matrix& cached_features() const;
    const Vector& cached_misfit() const;

private:
    void require_cache(const Vector& x) const;

    std::vector<double> inputs_;
    std::vector<double> targets_;
    std::size_t width_;

    // cache at a fixed base point
    Vector cache_base_;
    Matrix phi_;    // phi(j, i) = tanh(a1_j z_i + a2_j)
    Vector misfit_; // phi' a3 - y
    bool cache_valid_ = false;
};

enum class TestFunction {
    h1,               // sin(5 pi z)
    h2,               // sin(2 pi z) exp(-z^2)
    h3,               // [z > 0] + 0.2 sin(2 pi z)
    landscape_quartic // (z-6)(z+4)(7z^2+10z+24)
};

double scalar_test(TestFunction f, double z);

/// Derivatives f^(k)(c), k = 0..4, of the landscape quartic at c.
std::array<double, 5> landscape_quartic_derivatives(double c);

} // namespace cfgd

#endif
