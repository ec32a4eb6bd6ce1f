#ifndef CFGD_CAPUTO_HPP
#define CFGD_CAPUTO_HPP

#include <span>

#include "cfgd/linalg.hpp"
#include "cfgd/special.hpp"

namespace cfgd {

class Objective;

/// Fractional order and smoothing parameter of the scaled direction.
/// gamma = beta - (1-alpha)/(2-alpha) is always derived, never stored.
class FracParams {
public:
    FracParams(double alpha, double beta);

    /// beta chosen so that gamma() equals the given value.
    static FracParams from_gamma(double alpha, double gamma);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return beta_ - (1.0 - alpha_) / (2.0 - alpha_); }

private:
    double alpha_;
    double beta_;
};

/// Left/right Caputo derivative of order alpha of the identity map:
/// sign(x-c) |x-c|^(1-alpha) / Gamma(2-alpha); zero at x = c.
double caputo_identity(double alpha, double c, double x);

/// Left/right Caputo derivative of order alpha of z -> z^2:
/// 2 (D^alpha I)(x) (gamma_alpha (x-c) + x) with gamma_alpha = -(1-alpha)/(2-alpha).
double caputo_square(double alpha, double c, double x);

struct CaputoSeriesResult {
    double d_alpha = 0.0;                 // D^alpha f at x
    double d_one_plus_alpha_scaled = 0.0; // |x-c| * D^(1+alpha) f at x
};

/// Taylor-series evaluation of the order-alpha derivative and the |x-c|-scaled
/// order-(1+alpha) derivative. taylor_coeffs[k] holds f^(k)(c). Exact (up to
/// rounding) for polynomials of degree <= truncation. Terms below
/// 1e-16 of the accumulated magnitude stop the summation early.
CaputoSeriesResult caputo_series(std::span<const double> taylor_coeffs, double alpha, double c,
                                 double x, std::size_t truncation = 30);

/// Quadrature evaluation of the scaled CFGD direction. Component j is
///   C_a sum_l w_l f'_{j,x}(t_l) + C_a beta (x_j - c_j) sum_l w_l f''_{j,x}(t_l)
/// with nodes t_l = c_j + (x_j - c_j)(1 + u_l)/2. The signed factor in the
/// second term makes the same expression valid on both sides of the terminal;
/// for x_j > c_j it coincides with the |x_j - c_j| form. At x_j = c_j the
/// value degenerates to the integer-order partial derivative.
Vector scaled_direction_quadrature(const Objective& obj, const Vector& x, const Vector& terminal,
                                   const FracParams& params, const QuadratureRule& rule);

/// Closed form of the scaled direction for quadratic objectives:
/// A x + b + gamma * diag(a_11..a_dd) * (x - c).
Vector scaled_direction_closed_quadratic(const Matrix& A, const Vector& b, const Vector& x,
                                         const Vector& terminal, const FracParams& params);

} // namespace cfgd

#endif
