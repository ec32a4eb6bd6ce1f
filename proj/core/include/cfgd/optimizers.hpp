#ifndef CFGD_OPTIMIZERS_HPP
#define CFGD_OPTIMIZERS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cfgd/caputo.hpp"
#include "cfgd/linalg.hpp"
#include "cfgd/objectives.hpp"
#include "cfgd/trace.hpp"

namespace cfgd {

enum class Variant { GD, NA, AT, AO };

/// One adaptive-order stage: (alpha_s, beta_s) held for `iterations` steps.
struct Stage {
    FracParams params;
    std::size_t iterations;
};

/// Which CFGD variant runs and its per-iteration parameters:
///   GD  - integer-order gradient
///   NA  - fixed (alpha, beta, c)
///   AT  - fixed (alpha, beta), c_k = x^(k-L)
///   AO  - staged (alpha_s, beta_s), fixed c, gamma_s >= 0 per stage
class Schedule {
public:
    static Schedule gd();
    static Schedule non_adaptive(FracParams params, Vector terminal);
    static Schedule adaptive_terminal(FracParams params, std::size_t lag,
                                      std::vector<Vector> history);
    static Schedule adaptive_order(std::vector<Stage> stages, Vector terminal);

    Variant variant() const { return variant_; }
    const FracParams& params() const { return *params_; }
    const Vector& terminal() const { return terminal_; }
    std::size_t lag() const { return lag_; }
    /// history[j-1] = x^(-j), j = 1..L
    const std::vector<Vector>& history() const { return history_; }
    const std::vector<Stage>& stages() const { return stages_; }

    /// Number of quadrature points used when the objective has no closed
    /// quadratic form. Default 10.
    std::size_t quadrature_points() const { return quad_points_; }
    void set_quadrature_points(std::size_t s);

    /// Parameters in effect at iteration k (stage lookup for AO).
    const FracParams& params_at(std::size_t k) const;

    void validate(std::size_t dimension) const;
    std::string describe() const;

private:
    Schedule() = default;

    Variant variant_ = Variant::GD;
    std::optional<FracParams> params_;
    Vector terminal_;
    std::size_t lag_ = 0;
    std::vector<Vector> history_;
    std::vector<Stage> stages_;
    std::size_t quad_points_ = 10;
};

/// Stepsize policies:
///   Fixed          - constant eta
///   SpectralScaled - eta / sigma_max(A + gamma diag(A)), the normalized rate
///                    of the linear-convergence theory (quadratics only)
///   ExactQuadratic - <Ax+b, d> / (d'Ad) (quadratics only)
///   GridBest32     - best of {t 10^-l : l=1..8, t=1/4..1} by objective value,
///                    ties resolved toward the larger stepsize
struct Fixed {
    double eta;
};
struct SpectralScaled {
    double eta;
};
struct ExactQuadratic {};
struct GridBest32 {};

using StepsizePolicy = std::variant<Fixed, SpectralScaled, ExactQuadratic, GridBest32>;

/// The 32 grid values, descending.
std::array<double, 32> stepsize_grid();

/// Resolve the stepsize for one step from x along direction d. gamma is the
/// effective regularization of the current schedule stage (used only by
/// SpectralScaled). Throws DegenerateDirection when an exact rate divides by
/// a numerically null curvature.
double compute_stepsize(const StepsizePolicy& policy, const Objective& obj, const Vector& x,
                        const Vector& d, double gamma = 0.0);

/// Direction for one iteration: the integer gradient for GD, otherwise the
/// scaled CFGD direction (closed quadratic engine when the objective is
/// quadratic, quadrature otherwise). `history` carries past iterates for AT,
/// front = x^(k-1). `rule` may be null for quadratic objectives.
Vector step_direction(const Schedule& schedule, const Objective& obj, const Vector& x,
                      std::span<const Vector> history, std::size_t iteration,
                      const QuadratureRule* rule = nullptr);

struct StoppingCriteria {
    std::size_t max_iterations = 100;
    double gradient_tolerance = 1e-12; // on the direction's max-norm
    std::optional<double> objective_tolerance;
};

/// Optional reference points; when present the trace records distances.
struct ReferencePoints {
    std::optional<Vector> x_star;
    std::optional<Vector> x_tik;
};

/// Drive the iteration x^(k+1) = x^(k) - eta_k d_k. Deterministic given its
/// arguments. A non-finite iterate stops the run and marks the trace instead
/// of throwing, so partial output stays usable.
Trace run(const Schedule& schedule, Objective& obj, const StepsizePolicy& policy, const Vector& x0,
          const StoppingCriteria& stopping, const ReferencePoints& refs = {});

/// Blockwise stepsize policy for the tanh net: exact line-search rate on the
/// output-coefficient block (quadratic in a3), shared GridBest32 rate for the
/// weight and bias blocks, measured on the loss with the coefficient step
/// already applied.
struct NnTrainingResult {
    Trace trace;
    Vector final_x;
};

NnTrainingResult run_nn_training(TwoLayerTanhNet& net, const Schedule& schedule,
                                 std::size_t quad_points, std::size_t iterations, const Vector& x0,
                                 std::span<const double> test_inputs,
                                 std::span<const double> test_targets);

} // namespace cfgd

#endif
