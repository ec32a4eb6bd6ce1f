#include "cfgd/caputo.hpp"

#include <cmath>

#include "cfgd/errors.hpp"
#include "cfgd/objectives.hpp"

namespace cfgd {

FracParams::FracParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("FracParams: alpha must lie strictly inside (0, 1)");
    if (!std::isfinite(beta)) throw DomainError("FracParams: beta must be finite");
}

FracParams FracParams::from_gamma(double alpha, double gamma) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("FracParams: alpha must lie strictly inside (0, 1)");
    return FracParams(alpha, gamma + (1.0 - alpha) / (2.0 - alpha));
}

double caputo_identity(double alpha, double c, double x) {
    if (x == c) return 0.0;
    const double d = x - c;
    const double mag = std::pow(std::abs(d), 1.0 - alpha) / gamma_fn(2.0 - alpha);
    return d > 0.0 ? mag : -mag;
}

double caputo_square(double alpha, double c, double x) {
    const double gamma_a = -(1.0 - alpha) / (2.0 - alpha);
    return 2.0 * caputo_identity(alpha, c, x) * (gamma_a * (x - c) + x);
}

CaputoSeriesResult caputo_series(std::span<const double> taylor_coeffs, double alpha, double c,
                                 double x, std::size_t truncation) {
    CaputoSeriesResult out;
    if (taylor_coeffs.size() <= 1) return out;

    const double g2a = gamma_fn(2.0 - alpha);
    const double dx = x - c;
    const std::size_t top = std::min(truncation, taylor_coeffs.size() - 1);

    double s1 = 0.0, s2 = 0.0;
    double mag1 = 0.0, mag2 = 0.0;
    double power = 1.0; // (x-c)^(k-1)
    for (std::size_t k = 1; k <= top; ++k) {
        const double fk = taylor_coeffs[k];
        if (fk != 0.0) {
            const double t1 = g2a / gamma_fn(static_cast<double>(k) + 1.0 - alpha) * fk * power;
            s1 += t1;
            mag1 += std::abs(t1);
            if (k >= 2) {
                const double t2 = g2a / gamma_fn(static_cast<double>(k) - alpha) * fk * power;
                s2 += t2;
                mag2 += std::abs(t2);
                if (std::abs(t1) < 1e-16 * mag1 && std::abs(t2) < 1e-16 * mag2) break;
            }
        }
        power *= dx;
    }

    const double di = caputo_identity(alpha, c, x);
    out.d_alpha = di * s1;
    out.d_one_plus_alpha_scaled = di * s2;
    return out;
}

Vector scaled_direction_quadrature(const Objective& obj, const Vector& x, const Vector& terminal,
                                   const FracParams& params, const QuadratureRule& rule) {
    if (x.size() != obj.dimension() || terminal.size() != x.size())
        throw DimensionMismatch("scaled_direction_quadrature: dimensions disagree");
    if (rule.alpha != params.alpha())
        throw DomainError("scaled_direction_quadrature: rule alpha differs from params alpha");

    const double ca = c_alpha(params.alpha());
    const double beta = params.beta();
    const std::size_t s = rule.size();

    Vector d(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double delta = x[j] - terminal[j];
        double first = 0.0;
        double second = 0.0;
        for (std::size_t l = 0; l < s; ++l) {
            const double t = terminal[j] + delta * (1.0 + rule.nodes[l]) * 0.5;
            first += rule.weights[l] * obj.coord_first(j, x, t);
            if (beta != 0.0) second += rule.weights[l] * obj.coord_second(j, x, t);
        }
        d[j] = ca * first + ca * beta * delta * second;
    }
    if (!d.all_finite()) throw NonFiniteIterate("scaled_direction_quadrature: non-finite direction");
    return d;
}

Vector scaled_direction_closed_quadratic(const Matrix& A, const Vector& b, const Vector& x,
                                         const Vector& terminal, const FracParams& params) {
    if (A.rows() != A.cols() || A.rows() != x.size() || b.size() != x.size() ||
        terminal.size() != x.size())
        throw DimensionMismatch("scaled_direction_closed_quadratic: dimensions disagree");
    const double gamma = params.gamma();
    Vector d = matvec(A, x);
    d += b;
    for (std::size_t j = 0; j < x.size(); ++j) d[j] += gamma * A(j, j) * (x[j] - terminal[j]);
    return d;
}

} // namespace cfgd
