#ifndef CFGD_SPECIAL_HPP
#define CFGD_SPECIAL_HPP

#include <cstddef>
#include <vector>

namespace cfgd {

/// Gamma function (Lanczos approximation, g = 7, 9 terms).
/// Throws PoleError at non-positive integers.
double gamma_fn(double x);

/// C_alpha = (1 - alpha) * 2^(alpha - 1), the constant in front of the
/// quadrature form of the scaled direction. Accepts alpha in (0, 1];
/// C_alpha * total weight mass = 1.
double c_alpha(double alpha);

/// Total mass of the weight (1-u)^(-alpha) on [-1,1]: 2^(1-alpha)/(1-alpha).
double jacobi_weight_mass(double alpha);

/// Moments m_k = integral of u^k (1-u)^(-alpha) over [-1,1] for k = 0..max_k,
/// by the recurrence (k+1-alpha) m_k = k m_{k-1} + (-1)^k 2^(1-alpha).
std::vector<double> jacobi_weight_moments(double alpha, std::size_t max_k);

/// Gauss-Jacobi rule for the weight (1-u)^(-alpha) (1+u)^0 on [-1,1].
/// Nodes strictly increasing inside (-1,1), weights positive.
struct QuadratureRule {
    double alpha = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Construct the s-point rule by Golub-Welsch on the Jacobi (-alpha, 0)
/// three-term recurrence. Exact for polynomial integrands of degree <= 2s-1.
QuadratureRule gauss_jacobi(std::size_t s, double alpha);

} // namespace cfgd

#endif
