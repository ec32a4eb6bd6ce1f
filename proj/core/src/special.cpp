#include "cfgd/special.hpp"

#include <cmath>
#include <numbers>

#include "cfgd/errors.hpp"
#include "cfgd/linalg.hpp"

namespace cfgd {

namespace {

// Godfrey's coefficients for g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_gamma_positive(double x) {
    // valid for x >= 0.5
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    const double t = x + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

} // namespace

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw PoleError("gamma_fn: pole at non-positive integer " + std::to_string(x));
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma_positive(1.0 - x));
    }
    return lanczos_gamma_positive(x);
}

double c_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw DomainError("c_alpha: alpha must lie in (0, 1], got " + std::to_string(alpha));
    return (1.0 - alpha) * std::pow(2.0, alpha - 1.0);
}

double jacobi_weight_mass(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("jacobi_weight_mass: alpha must lie in (0, 1)");
    return std::pow(2.0, 1.0 - alpha) / (1.0 - alpha);
}

std::vector<double> jacobi_weight_moments(double alpha, std::size_t max_k) {
    std::vector<double> m(max_k + 1);
    m[0] = jacobi_weight_mass(alpha);
    const double edge = std::pow(2.0, 1.0 - alpha); // (1-u)^(1-alpha) at u = -1
    double sign = -1.0;
    for (std::size_t k = 1; k <= max_k; ++k) {
        m[k] = (static_cast<double>(k) * m[k - 1] + sign * edge) / (static_cast<double>(k) + 1.0 - alpha);
        sign = -sign;
    }
    return m;
}

QuadratureRule gauss_jacobi(std::size_t s, double alpha) {
    if (s < 1) throw DomainError("gauss_jacobi: need at least one point");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("gauss_jacobi: alpha must lie in (0, 1)");

    // Monic Jacobi recurrence coefficients for (a, b) = (-alpha, 0):
    //   p_{k+1} = (u - a_k) p_k - b_k p_{k-1}
    const double a = -alpha;
    SymTridiagonal J;
    J.diagonal = Vector(s);
    J.off_diagonal = Vector(s > 1 ? s - 1 : 0);
    J.diagonal[0] = -a / (a + 2.0); // alpha / (2 - alpha)
    for (std::size_t k = 1; k < s; ++k) {
        const double kk = static_cast<double>(k);
        const double t = 2.0 * kk + a;
        J.diagonal[k] = -(a * a) / (t * (t + 2.0));
        const double bk = 4.0 * kk * kk * (kk + a) * (kk + a) / (t * t * (t + 1.0) * (t - 1.0));
        J.off_diagonal[k - 1] = std::sqrt(bk);
    }

    const TridiagonalEigen eig = sym_eigenvalues(J);
    const double mu0 = jacobi_weight_mass(alpha);

    QuadratureRule rule;
    rule.alpha = alpha;
    rule.nodes.resize(s);
    rule.weights.resize(s);
    for (std::size_t l = 0; l < s; ++l) {
        rule.nodes[l] = eig.values[l];
        rule.weights[l] = mu0 * eig.first_components[l] * eig.first_components[l];
    }

    for (std::size_t l = 0; l < s; ++l) {
        if (!(rule.nodes[l] > -1.0) || !(rule.nodes[l] < 1.0))
            throw NoConvergence("gauss_jacobi: node escaped (-1, 1)");
        if (!(rule.weights[l] > 0.0)) throw NoConvergence("gauss_jacobi: non-positive weight");
        if (l > 0 && !(rule.nodes[l] > rule.nodes[l - 1]))
            throw NoConvergence("gauss_jacobi: nodes not strictly increasing");
    }
    double mass = 0.0;
    for (double w : rule.weights) mass += w;
    if (std::abs(mass - mu0) > 1e-12 * mu0)
        throw NoConvergence("gauss_jacobi: weights lost the total mass");
    return rule;
}

} // namespace cfgd
