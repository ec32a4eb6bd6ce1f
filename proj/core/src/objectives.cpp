#include "cfgd/objectives.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "cfgd/errors.hpp"

namespace cfgd {

const Matrix& Objective::quadratic_matrix() const {
    throw DomainError("objective is not quadratic");
}

const Vector& Objective::quadratic_vector() const {
    throw DomainError("objective is not quadratic");
}

QuadraticObjective::QuadraticObjective(Matrix A, Vector b, double c0)
    : A_(std::move(A)), b_(std::move(b)), c0_(c0) {
    if (A_.rows() != A_.cols() || A_.rows() != b_.size())
        throw DimensionMismatch("QuadraticObjective: A and b shapes disagree");
    if (!A_.is_symmetric()) throw NotSpd("QuadraticObjective: A not symmetric");
    if (!is_positive_definite(A_)) throw NotSpd("QuadraticObjective: A not positive definite");
}

double QuadraticObjective::value(const Vector& x) const {
    if (x.size() != b_.size()) throw DimensionMismatch("QuadraticObjective::value");
    return 0.5 * dot(x, matvec(A_, x)) + dot(b_, x) + c0_;
}

Vector QuadraticObjective::gradient(const Vector& x) const {
    if (x.size() != b_.size()) throw DimensionMismatch("QuadraticObjective::gradient");
    Vector g = matvec(A_, x);
    g += b_;
    return g;
}

double QuadraticObjective::coord_first(std::size_t j, const Vector& x, double u) const {
    // restriction of Ax + b to coordinate j with x_j replaced by u
    double acc = b_[j];
    for (std::size_t i = 0; i < x.size(); ++i) acc += A_(j, i) * (i == j ? u : x[i]);
    return acc;
}

double QuadraticObjective::coord_second(std::size_t j, const Vector&, double) const {
    return A_(j, j);
}

Vector QuadraticObjective::minimizer() const {
    Vector rhs = -1.0 * b_;
    return spd_solve(A_, rhs);
}

LeastSquaresObjective::LeastSquaresObjective(Matrix W, Vector y)
    : W_(std::move(W)), y_(std::move(y)) {
    if (W_.cols() != y_.size())
        throw DimensionMismatch("LeastSquaresObjective: W columns must match y length");
    A_ = gram(W_);
    Vector wy = matvec(W_, y_);
    b_ = -1.0 * wy;
    full_rank_ = (W_.cols() >= W_.rows()) && is_positive_definite(A_);
}

double LeastSquaresObjective::value(const Vector& x) const {
    if (x.size() != W_.rows()) throw DimensionMismatch("LeastSquaresObjective::value");
    const Vector r = matvec_transposed(W_, x) - y_;
    return 0.5 * dot(r, r);
}

Vector LeastSquaresObjective::gradient(const Vector& x) const {
    if (x.size() != W_.rows()) throw DimensionMismatch("LeastSquaresObjective::gradient");
    const Vector r = matvec_transposed(W_, x) - y_;
    return matvec(W_, r);
}

double LeastSquaresObjective::coord_first(std::size_t j, const Vector& x, double u) const {
    double acc = b_[j];
    for (std::size_t i = 0; i < x.size(); ++i) acc += A_(j, i) * (i == j ? u : x[i]);
    return acc;
}

double LeastSquaresObjective::coord_second(std::size_t j, const Vector&, double) const {
    return A_(j, j);
}

Vector LeastSquaresObjective::minimizer() const {
    return spd_solve(A_, matvec(W_, y_));
}

namespace {

double tanh_d1(double t) { return 1.0 - t * t; }        // phi' from phi
double tanh_d2(double t) { return -2.0 * t * (1.0 - t * t); } // phi'' from phi

} // namespace

TwoLayerTanhNet::TwoLayerTanhNet(std::vector<double> inputs, std::vector<double> targets,
                                 std::size_t width)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), width_(width) {
    if (inputs_.size() != targets_.size())
        throw DimensionMismatch("TwoLayerTanhNet: inputs and targets differ in length");
    if (width_ == 0) throw DomainError("TwoLayerTanhNet: width must be positive");
}

double TwoLayerTanhNet::predict(double z, const Vector& x) const {
    const std::size_t n = width_;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += x[2 * n + j] * std::tanh(x[j] * z + x[n + j]);
    return acc;
}

double TwoLayerTanhNet::value(const Vector& x) const {
    if (x.size() != dimension()) throw DimensionMismatch("TwoLayerTanhNet::value");
    double acc = 0.0;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        const double r = predict(inputs_[i], x) - targets_[i];
        acc += r * r;
    }
    return 0.5 * acc;
}

Vector TwoLayerTanhNet::gradient(const Vector& x) const {
    if (x.size() != dimension()) throw DimensionMismatch("TwoLayerTanhNet::gradient");
    const std::size_t n = width_;
    const std::size_t m = inputs_.size();
    Vector g(3 * n);
    for (std::size_t i = 0; i < m; ++i) {
        const double z = inputs_[i];
        double pred = 0.0;
        for (std::size_t j = 0; j < n; ++j) pred += x[2 * n + j] * std::tanh(x[j] * z + x[n + j]);
        const double r = pred - targets_[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double t = std::tanh(x[j] * z + x[n + j]);
            const double d1 = tanh_d1(t);
            g[j] += r * x[2 * n + j] * d1 * z;
            g[n + j] += r * x[2 * n + j] * d1;
            g[2 * n + j] += r * t;
        }
    }
    return g;
}

void TwoLayerTanhNet::prepare_cache(const Vector& x) {
    if (x.size() != dimension()) throw DimensionMismatch("TwoLayerTanhNet::prepare_cache");
    const std::size_t n = width_;
    const std::size_t m = inputs_.size();
    phi_ = Matrix(n, m);
    misfit_ = Vector(m);
    for (std::size_t i = 0; i < m; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = std::tanh(x[j] * inputs_[i] + x[n + j]);
            phi_(j, i) = t;
            pred += x[2 * n + j] * t;
        }
        misfit_[i] = pred - targets_[i];
    }
    cache_base_ = x;
    cache_valid_ = true;
}

void TwoLayerTanhNet::require_cache(const Vector& x) const {
    if (!cache_valid_ || cache_base_.size() != x.size())
        throw CacheMissing("TwoLayerTanhNet: prepare_cache was not called for this point");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (cache_base_[i] != x[i])
            throw CacheMissing("TwoLayerTanhNet: cache base point differs from query point");
}

const Matrix& TwoLayerTanhNet::cached_features() const {
    if (!cache_valid_) throw CacheMissing("TwoLayerTanhNet: no cache prepared");
    return phi_;
}

const Vector& TwoLayerTanhNet::cached_misfit() const {
    if (!cache_valid_) throw CacheMissing("TwoLayerTanhNet: no cache prepared");
    return misfit_;
}

double TwoLayerTanhNet::coord_first(std::size_t l, const Vector& x, double u) const {
    require_cache(x);
    const std::size_t n = width_;
    const std::size_t m = inputs_.size();
    const std::size_t block = l / n;
    const std::size_t j = l % n;
    const double a3j = x[2 * n + j];
    double acc = 0.0;
    if (block == 0) {
        for (std::size_t i = 0; i < m; ++i) {
            const double z = inputs_[i];
            const double t = std::tanh(u * z + x[n + j]);
            const double mis = misfit_[i] + a3j * (t - phi_(j, i));
            acc += mis * a3j * tanh_d1(t) * z;
        }
    } else if (block == 1) {
        for (std::size_t i = 0; i < m; ++i) {
            const double t = std::tanh(x[j] * inputs_[i] + u);
            const double mis = misfit_[i] + a3j * (t - phi_(j, i));
            acc += mis * a3j * tanh_d1(t);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            const double mis = misfit_[i] + (u - a3j) * phi_(j, i);
            acc += mis * phi_(j, i);
        }
    }
    return acc;
}

double TwoLayerTanhNet::coord_second(std::size_t l, const Vector& x, double u) const {
    require_cache(x);
    const std::size_t n = width_;
    const std::size_t m = inputs_.size();
    const std::size_t block = l / n;
    const std::size_t j = l % n;
    const double a3j = x[2 * n + j];
    double acc = 0.0;
    if (block == 0) {
        for (std::size_t i = 0; i < m; ++i) {
            const double z = inputs_[i];
            const double t = std::tanh(u * z + x[n + j]);
            const double mis = misfit_[i] + a3j * (t - phi_(j, i));
            const double slope = a3j * tanh_d1(t) * z;
            acc += mis * a3j * tanh_d2(t) * z * z + slope * slope;
        }
    } else if (block == 1) {
        for (std::size_t i = 0; i < m; ++i) {
            const double t = std::tanh(x[j] * inputs_[i] + u);
            const double mis = misfit_[i] + a3j * (t - phi_(j, i));
            const double slope = a3j * tanh_d1(t);
            acc += mis * a3j * tanh_d2(t) + slope * slope;
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) acc += phi_(j, i) * phi_(j, i);
    }
    return acc;
}

double scalar_test(TestFunction f, double z) {
    switch (f) {
    case TestFunction::h1:
        return std::sin(5.0 * std::numbers::pi * z);
    case TestFunction::h2:
        return std::sin(2.0 * std::numbers::pi * z) * std::exp(-z * z);
    case TestFunction::h3:
        return (z > 0.0 ? 1.0 : 0.0) + 0.2 * std::sin(2.0 * std::numbers::pi * z);
    case TestFunction::landscape_quartic:
        return (z - 6.0) * (z + 4.0) * (7.0 * z * z + 10.0 * z + 24.0);
    }
    throw DomainError("scalar_test: unknown selector");
}

std::array<double, 5> landscape_quartic_derivatives(double c) {
    // expanded: 7z^4 - 4z^3 - 164z^2 - 288z - 576
    const double c2 = c * c;
    const double c3 = c2 * c;
    const double c4 = c2 * c2;
    return {
        7.0 * c4 - 4.0 * c3 - 164.0 * c2 - 288.0 * c - 576.0,
        28.0 * c3 - 12.0 * c2 - 328.0 * c - 288.0,
        84.0 * c2 - 24.0 * c - 328.0,
        168.0 * c - 24.0,
        168.0,
    };
}

} // namespace cfgd
