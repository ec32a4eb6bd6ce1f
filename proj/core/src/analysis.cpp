#include "cfgd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cfgd/errors.hpp"
#include "cfgd/special.hpp"

namespace cfgd {

TikhonovProblem::TikhonovProblem(Matrix W_, Vector y_, double gamma_, Vector xbar_)
    : W(std::move(W_)), y(std::move(y_)), gamma(gamma_), xbar(std::move(xbar_)) {
    if (W.cols() != y.size()) throw DimensionMismatch("TikhonovProblem: W columns vs y length");
    if (W.rows() != xbar.size()) throw DimensionMismatch("TikhonovProblem: W rows vs xbar length");
    R = Vector(W.rows());
    for (std::size_t j = 0; j < W.rows(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < W.cols(); ++k) acc += W(j, k) * W(j, k);
        R[j] = std::sqrt(acc);
    }
}

Vector tikhonov_solution(const TikhonovProblem& p) {
    Matrix M = gram(p.W); // WW'
    for (std::size_t j = 0; j < M.rows(); ++j) M(j, j) += p.gamma * p.R[j] * p.R[j];
    const Vector rhs = matvec(p.W, p.y - matvec_transposed(p.W, p.xbar));
    return p.xbar + spd_solve(M, rhs);
}

Matrix tilde_A(const Matrix& W, double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw DomainError("tilde_A: alpha must lie in (0, 1)");
    Matrix A = gram(W);
    const double scale = beta + 1.0 / (2.0 - alpha);
    for (std::size_t j = 0; j < A.rows(); ++j) A(j, j) *= scale;
    return A;
}

double na_rate_bound(const Matrix& W, double alpha, double beta, double eta, std::size_t k) {
    if (!(eta > 0.0) || !(eta < 2.0)) throw DomainError("na_rate_bound: eta must lie in (0, 2)");
    const double kappa = condition_number(tilde_A(W, alpha, beta));
    return std::pow(std::abs(1.0 - eta / kappa), static_cast<double>(k));
}

AtBoundSequence::AtBoundSequence(const Matrix& A, double gamma, double eta, std::size_t lag,
                                 std::size_t k_max)
    : lag_(lag) {
    if (A.rows() != A.cols()) throw DimensionMismatch("at_bound_matrices: A not square");
    if (lag < 1) throw DomainError("at_bound_matrices: lag must be >= 1");
    if (k_max < 1) throw DomainError("at_bound_matrices: k_max must be >= 1");
    const std::size_t d = A.rows();

    Matrix a10 = Matrix::identity(d);
    Matrix a1L(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) a10(i, j) -= eta * A(i, j);
        a10(i, i) -= eta * gamma * A(i, i);
        a1L(i, i) = eta * gamma * A(i, i);
    }

    mats_.reserve(k_max);
    std::vector<Matrix> row(lag + 1, Matrix(d, d));
    row[0] = a10;
    row[lag] = a1L;
    mats_.push_back(row);
    for (std::size_t k = 2; k <= k_max; ++k) {
        const std::vector<Matrix>& prev = mats_.back();
        std::vector<Matrix> next(lag + 1, Matrix(d, d));
        next[0] = matmul(prev[0], a10) + prev[1];
        for (std::size_t j = 1; j < lag; ++j) next[j] = prev[j + 1];
        next[lag] = matmul(prev[0], a1L);
        mats_.push_back(std::move(next));
    }
    norms_.assign(k_max, std::vector<double>(lag + 1, -1.0));
}

const Matrix& AtBoundSequence::matrix(std::size_t k, std::size_t j) const {
    if (k < 1 || k > mats_.size() || j > lag_)
        throw DomainError("AtBoundSequence::matrix: index out of range");
    return mats_[k - 1][j];
}

double AtBoundSequence::norm(std::size_t k, std::size_t j) const {
    if (k < 1 || k > mats_.size() || j > lag_)
        throw DomainError("AtBoundSequence::norm: index out of range");
    double& cached = norms_[k - 1][j];
    if (cached < 0.0) cached = spectral_norm(mats_[k - 1][j]);
    return cached;
}

double AtBoundSequence::bound(std::size_t k, std::span<const double> initial_dists) const {
    if (initial_dists.size() != lag_ + 1)
        throw DimensionMismatch("AtBoundSequence::bound: need L+1 initial distances");
    double acc = 0.0;
    for (std::size_t j = 0; j <= lag_; ++j) acc += norm(k, j) * initial_dists[j];
    return acc;
}

std::vector<double> ao_error_bounds(const Matrix& W, const Vector& y,
                                    std::span<const double> gammas, std::span<const double> etas,
                                    std::span<const std::size_t> ks, const Vector& x0,
                                    const Vector& terminal) {
    const std::size_t S = gammas.size();
    if (etas.size() != S || ks.size() != S)
        throw DimensionMismatch("ao_error_bounds: stage lists must share a length");
    if (S == 0) throw DomainError("ao_error_bounds: need at least one stage");
    for (double g : gammas)
        if (g < 0.0) throw DomainError("ao_error_bounds: gammas must be nonnegative");

    const Matrix A = gram(W);
    Vector rr(A.rows());
    for (std::size_t j = 0; j < A.rows(); ++j) rr[j] = A(j, j); // RR' diagonal

    // Per-stage contraction factors R_s = |1 - eta_s/kappa_s|^(k_s/2).
    std::vector<double> Rs(S);
    for (std::size_t s = 0; s < S; ++s) {
        Matrix tl = A;
        for (std::size_t j = 0; j < A.rows(); ++j) tl(j, j) += gammas[s] * rr[j];
        const double kappa = condition_number(tl);
        Rs[s] = std::pow(std::abs(1.0 - etas[s] / kappa), static_cast<double>(ks[s]) / 2.0);
    }

    // C = B_max^2 ||W||^2 ||R||^2 ||x* - c||, B_max over a 100-point gamma grid.
    const double gamma_top = *std::max_element(gammas.begin(), gammas.end());
    double b_max = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double g = gamma_top * static_cast<double>(i) / 99.0;
        Matrix M = A;
        for (std::size_t j = 0; j < A.rows(); ++j) M(j, j) += g * rr[j];
        const SymmetricEigen eig = sym_eigen(M);
        if (!(eig.values[0] > 0.0)) throw NotSpd("ao_error_bounds: WW' + g RR' not SPD on grid");
        b_max = std::max(b_max, 1.0 / eig.values[0]);
    }
    const Vector x_star = spd_solve(A, matvec(W, y));
    double r_norm2 = 0.0;
    for (std::size_t j = 0; j < rr.size(); ++j) r_norm2 = std::max(r_norm2, rr[j]);
    const double C =
        b_max * b_max * spectral_norm(W) * spectral_norm(W) * r_norm2 * norm2(x_star - terminal);

    const TikhonovProblem tik1(W, y, gammas[0], terminal);
    const double e1 = norm2(x0 - tikhonov_solution(tik1));

    std::vector<double> bounds(S);
    for (std::size_t send = 1; send <= S; ++send) {
        // prod_{j=0}^{s-1} R_{s-j} = R_s ... R_1
        double prod_all = 1.0;
        for (std::size_t s = 0; s < send; ++s) prod_all *= Rs[s];
        double gap = 0.0;
        for (std::size_t i = 1; i < send; ++i) {
            double prod = 1.0;
            for (std::size_t j = 0; j < i; ++j) prod *= Rs[send - 1 - j];
            gap += prod * std::abs(gammas[send - 1 - i] - gammas[send - i]);
        }
        bounds[send - 1] = prod_all * e1 + C * (gap + std::abs(gammas[send - 1]));
    }
    return bounds;
}

double ao_error_bound(const Matrix& W, const Vector& y, std::span<const double> gammas,
                      std::span<const double> etas, std::span<const std::size_t> ks,
                      const Vector& x0, const Vector& terminal) {
    return ao_error_bounds(W, y, gammas, etas, ks, x0, terminal).back();
}

double smoothing_coefficient(std::size_t k, double alpha, double beta) {
    if (k < 2) throw DomainError("smoothing_coefficient: defined for k >= 2");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("smoothing_coefficient: alpha must lie in (0, 1)");
    const double kd = static_cast<double>(k);
    const double g2a = gamma_fn(2.0 - alpha);
    const double gk = gamma_fn(kd);
    return g2a * gk / gamma_fn(kd + 1.0 - alpha) + beta * g2a * gk / gamma_fn(kd - alpha);
}

SmoothingSeries::SmoothingSeries(double alpha_, double beta_, double c_,
                                 std::vector<double> coeffs, std::size_t truncation_)
    : alpha(alpha_), beta(beta_), c(c_), taylor_coeffs(std::move(coeffs)),
      truncation(truncation_) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw DomainError("SmoothingSeries: alpha must lie in (0, 1)");
}

double smoothing_value(const SmoothingSeries& s, double z) {
    const std::size_t top = std::min(s.truncation, s.taylor_coeffs.size() - 1);
    const double dz = z - s.c;
    double acc = s.taylor_coeffs[0];
    if (top >= 1) acc += s.taylor_coeffs[1] * dz;
    double power = dz * dz;
    double factorial = 2.0;
    for (std::size_t k = 2; k <= top; ++k) {
        const double fk = s.taylor_coeffs[k];
        if (fk != 0.0) {
            const double term = smoothing_coefficient(k, s.alpha, s.beta) * fk / factorial * power;
            acc += term;
            if (std::abs(term) < 1e-16 * std::abs(acc)) break;
        }
        power *= dz;
        factorial *= static_cast<double>(k + 1);
    }
    return acc;
}

double smoothing_derivative(const SmoothingSeries& s, double z) {
    if (s.taylor_coeffs.size() < 2) return 0.0;
    const std::size_t top = std::min(s.truncation, s.taylor_coeffs.size() - 1);
    const double dz = z - s.c;
    double acc = s.taylor_coeffs[1];
    double power = dz;      // (z-c)^(k-1)
    double factorial = 1.0; // (k-1)!
    for (std::size_t k = 2; k <= top; ++k) {
        const double fk = s.taylor_coeffs[k];
        if (fk != 0.0) {
            const double term = smoothing_coefficient(k, s.alpha, s.beta) * fk / factorial * power;
            acc += term;
            if (std::abs(term) < 1e-16 * std::abs(acc)) break;
        }
        power *= dz;
        factorial *= static_cast<double>(k);
    }
    return acc;
}

} // namespace cfgd
