#ifndef CFGD_ANALYSIS_HPP
#define CFGD_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cfgd/linalg.hpp"

namespace cfgd {

/// Tikhonov-regularized least squares
///   min ||W'x - y||^2 + gamma ||R'(x - xbar)||^2
/// with R = diag(sqrt(sum_k w_kj^2)), so RR' equals diag(WW').
struct TikhonovProblem {
    TikhonovProblem(Matrix W, Vector y, double gamma, Vector xbar);

    Matrix W;
    Vector y;
    double gamma;
    Vector xbar;
    Vector R; // diagonal entries sqrt(sum_k w_kj^2)
};

/// Closed-form solution xbar + (WW' + gamma RR')^{-1} W (y - W' xbar).
/// Throws NotSpd when the regularized matrix is not positive definite.
Vector tikhonov_solution(const TikhonovProblem& p);

/// The model matrix of the non-adaptive theory: WW' with the diagonal scaled
/// by (beta + 1/(2-alpha)), i.e. WW' + gamma_{alpha,beta} diag(WW').
Matrix tilde_A(const Matrix& W, double alpha, double beta);

/// Squared-distance decay factor |1 - eta/kappa|^k with kappa the condition
/// number of tilde_A. Requires tilde_A positive definite and 0 < eta < 2.
double na_rate_bound(const Matrix& W, double alpha, double beta, double eta, std::size_t k);

/// The recursion matrices of the adaptive-terminal error bound, materialized
/// for k = 1..k_max:
///   A_{1,0} = I - eta (A + gamma diag(A)),  A_{1,L} = eta gamma diag(A),
///   A_{k,0} = A_{k-1,0} A_{1,0} + A_{k-1,1},
///   A_{k,j} = A_{k-1,j+1} (1 <= j < L),  A_{k,L} = A_{k-1,0} A_{1,L}.
class AtBoundSequence {
public:
    AtBoundSequence(const Matrix& A, double gamma, double eta, std::size_t lag, std::size_t k_max);

    std::size_t lag() const { return lag_; }
    std::size_t k_max() const { return mats_.size(); }

    /// 1-based iteration index k, block index j in [0, L].
    const Matrix& matrix(std::size_t k, std::size_t j) const;

    /// Spectral norm of matrix(k, j).
    double norm(std::size_t k, std::size_t j) const;

    /// sum_j ||A_{k,j}|| * initial_dists[j], where initial_dists[j] holds
    /// ||x^(-j) - x*|| for j = 0..L.
    double bound(std::size_t k, std::span<const double> initial_dists) const;

private:
    std::size_t lag_;
    std::vector<std::vector<Matrix>> mats_;       // [k-1][j]
    mutable std::vector<std::vector<double>> norms_; // lazy spectral norms
};

inline AtBoundSequence at_bound_matrices(const Matrix& A, double gamma, double eta,
                                         std::size_t lag, std::size_t k_max) {
    return AtBoundSequence(A, gamma, eta, lag, k_max);
}

/// Stage-end error bounds of adaptive-order CFGD. Stage s runs ks[s-1]
/// iterations with regularization gammas[s-1] and normalized rate etas[s-1].
/// Returns the bound after each stage (size = number of stages).
/// B_max is approximated by maximizing ||(WW' + g RR')^{-1}|| over a 100-point
/// grid on [0, max gamma].
std::vector<double> ao_error_bounds(const Matrix& W, const Vector& y,
                                    std::span<const double> gammas, std::span<const double> etas,
                                    std::span<const std::size_t> ks, const Vector& x0,
                                    const Vector& terminal);

/// Bound after the final stage.
double ao_error_bound(const Matrix& W, const Vector& y, std::span<const double> gammas,
                      std::span<const double> etas, std::span<const std::size_t> ks,
                      const Vector& x0, const Vector& terminal);

/// Taylor coefficient damping of the smoothing F:
/// C_{k,alpha,beta} = Gamma(2-a)Gamma(k)/Gamma(k+1-a) + beta Gamma(2-a)Gamma(k)/Gamma(k-a),
/// defined for k >= 2.
double smoothing_coefficient(std::size_t k, double alpha, double beta);

/// Truncated smoothing series around c; taylor_coeffs[k] = f^(k)(c).
struct SmoothingSeries {
    SmoothingSeries(double alpha, double beta, double c, std::vector<double> taylor_coeffs,
                    std::size_t truncation = 40);

    double alpha;
    double beta;
    double c;
    std::vector<double> taylor_coeffs;
    std::size_t truncation;
};

/// F(z) = f(c) + f'(c)(z-c) + sum_{k>=2} C_k f^(k)(c)/k! (z-c)^k.
double smoothing_value(const SmoothingSeries& s, double z);

/// F'(z); equals the scaled Caputo fractional derivative of f at z.
double smoothing_derivative(const SmoothingSeries& s, double z);

} // namespace cfgd

#endif
