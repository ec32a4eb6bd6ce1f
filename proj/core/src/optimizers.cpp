#include "cfgd/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfgd/errors.hpp"

namespace cfgd {

Schedule Schedule::gd() {
    Schedule s;
    s.variant_ = Variant::GD;
    return s;
}

Schedule Schedule::non_adaptive(FracParams params, Vector terminal) {
    Schedule s;
    s.variant_ = Variant::NA;
    s.params_ = params;
    s.terminal_ = std::move(terminal);
    return s;
}

Schedule Schedule::adaptive_terminal(FracParams params, std::size_t lag,
                                     std::vector<Vector> history) {
    Schedule s;
    s.variant_ = Variant::AT;
    s.params_ = params;
    s.lag_ = lag;
    s.history_ = std::move(history);
    return s;
}

Schedule Schedule::adaptive_order(std::vector<Stage> stages, Vector terminal) {
    Schedule s;
    s.variant_ = Variant::AO;
    s.stages_ = std::move(stages);
    s.terminal_ = std::move(terminal);
    return s;
}

void Schedule::set_quadrature_points(std::size_t s) {
    if (s < 1) throw DomainError("Schedule: need at least one quadrature point");
    quad_points_ = s;
}

const FracParams& Schedule::params_at(std::size_t k) const {
    if (variant_ == Variant::AO) {
        std::size_t upto = 0;
        for (const Stage& st : stages_) {
            upto += st.iterations;
            if (k < upto) return st.params;
        }
        return stages_.back().params; // past the last boundary: hold the final stage
    }
    return *params_;
}

void Schedule::validate(std::size_t dimension) const {
    switch (variant_) {
    case Variant::GD:
        return;
    case Variant::NA:
        if (!params_) throw ConfigError("NA schedule needs FracParams");
        if (terminal_.size() != dimension)
            throw DimensionMismatch("NA schedule: terminal dimension differs from objective");
        return;
    case Variant::AT:
        if (!params_) throw ConfigError("AT schedule needs FracParams");
        if (lag_ < 1) throw ConfigError("AT schedule: lag must be >= 1");
        if (history_.size() != lag_)
            throw ConfigError("AT schedule: history must hold exactly L initial points");
        for (const Vector& h : history_)
            if (h.size() != dimension)
                throw DimensionMismatch("AT schedule: history dimension differs from objective");
        return;
    case Variant::AO:
        if (stages_.empty()) throw ConfigError("AO schedule needs at least one stage");
        for (const Stage& st : stages_) {
            if (st.iterations == 0) throw ConfigError("AO schedule: stage lengths must be positive");
            if (st.params.gamma() < 0.0)
                throw ConfigError("AO schedule: gamma_s must be nonnegative at every stage");
        }
        if (terminal_.size() != dimension)
            throw DimensionMismatch("AO schedule: terminal dimension differs from objective");
        return;
    }
}

std::string Schedule::describe() const {
    std::ostringstream os;
    switch (variant_) {
    case Variant::GD:
        os << "GD";
        break;
    case Variant::NA:
        os << "NA(alpha=" << params_->alpha() << ",beta=" << params_->beta()
           << ",gamma=" << params_->gamma() << ")";
        break;
    case Variant::AT:
        os << "AT(alpha=" << params_->alpha() << ",beta=" << params_->beta()
           << ",gamma=" << params_->gamma() << ",L=" << lag_ << ")";
        break;
    case Variant::AO: {
        os << "AO(stages=" << stages_.size() << ",gammas=";
        for (std::size_t i = 0; i < stages_.size(); ++i)
            os << (i ? "|" : "") << stages_[i].params.gamma();
        os << ")";
        break;
    }
    }
    return os.str();
}

std::array<double, 32> stepsize_grid() {
    std::array<double, 32> grid{};
    std::size_t idx = 0;
    for (int l = 1; l <= 8; ++l)
        for (int t = 1; t <= 4; ++t) grid[idx++] = 0.25 * t * std::pow(10.0, -l);
    std::sort(grid.begin(), grid.end(), std::greater<>());
    return grid;
}

namespace {

double exact_quadratic_stepsize(const Objective& obj, const Vector& x, const Vector& d) {
    if (!obj.is_quadratic())
        throw DomainError("ExactQuadratic stepsize requires a quadratic objective");
    const Matrix& A = obj.quadratic_matrix();
    const Vector Ad = matvec(A, d);
    const double curvature = dot(d, Ad);
    if (curvature <= 1e-300)
        throw DegenerateDirection("exact line search: d'Ad is numerically null");
    Vector g = matvec(A, x);
    g += obj.quadratic_vector();
    return dot(g, d) / curvature;
}

double grid_best_stepsize(const Objective& obj, const Vector& x, const Vector& d) {
    const auto grid = stepsize_grid();
    double best_eta = 0.0;
    double best_value = 0.0;
    bool have = false;
    Vector candidate(x.size());
    for (double eta : grid) { // descending: ties keep the larger stepsize
        for (std::size_t i = 0; i < x.size(); ++i) candidate[i] = x[i] - eta * d[i];
        const double v = obj.value(candidate);
        if (!have || v < best_value) {
            have = true;
            best_value = v;
            best_eta = eta;
        }
    }
    return best_eta;
}

} // namespace

double compute_stepsize(const StepsizePolicy& policy, const Objective& obj, const Vector& x,
                        const Vector& d, double gamma) {
    if (const auto* f = std::get_if<Fixed>(&policy)) return f->eta;
    if (const auto* s = std::get_if<SpectralScaled>(&policy)) {
        if (!obj.is_quadratic())
            throw DomainError("SpectralScaled stepsize requires a quadratic objective");
        Matrix tilde = obj.quadratic_matrix();
        for (std::size_t j = 0; j < tilde.rows(); ++j) tilde(j, j) *= 1.0 + gamma;
        return s->eta / spectral_norm(tilde);
    }
    if (std::holds_alternative<ExactQuadratic>(policy)) return exact_quadratic_stepsize(obj, x, d);
    return grid_best_stepsize(obj, x, d);
}

Vector step_direction(const Schedule& schedule, const Objective& obj, const Vector& x,
                      std::span<const Vector> history, std::size_t iteration,
                      const QuadratureRule* rule) {
    if (schedule.variant() == Variant::GD) return obj.gradient(x);

    const FracParams& params = schedule.params_at(iteration);
    const Vector* terminal = nullptr;
    if (schedule.variant() == Variant::AT) {
        if (history.size() < schedule.lag())
            throw ConfigError("step_direction: AT history not populated");
        terminal = &history[schedule.lag() - 1]; // x^(k-L)
    } else {
        terminal = &schedule.terminal();
    }

    if (obj.is_quadratic())
        return scaled_direction_closed_quadratic(obj.quadratic_matrix(), obj.quadratic_vector(), x,
                                                 *terminal, params);

    if (rule && rule->alpha == params.alpha())
        return scaled_direction_quadrature(obj, x, *terminal, params, *rule);
    const QuadratureRule local = gauss_jacobi(schedule.quadrature_points(), params.alpha());
    return scaled_direction_quadrature(obj, x, *terminal, params, local);
}

namespace {

void fill_distances(TraceRecord& rec, const ReferencePoints& refs) {
    if (refs.x_star) rec.dist_to_x_star = norm2(rec.x - *refs.x_star);
    if (refs.x_tik) rec.dist_to_x_tik = norm2(rec.x - *refs.x_tik);
}

} // namespace

Trace run(const Schedule& schedule, Objective& obj, const StepsizePolicy& policy, const Vector& x0,
          const StoppingCriteria& stopping, const ReferencePoints& refs) {
    schedule.validate(x0.size());
    if (x0.size() != obj.dimension()) throw DimensionMismatch("run: x0 dimension");

    Trace trace;
    trace.set_meta("schedule", schedule.describe());

    // Quadrature rules are reused across iterations; one per distinct alpha.
    std::vector<QuadratureRule> rules;
    if (!obj.is_quadratic() && schedule.variant() != Variant::GD) {
        if (schedule.variant() == Variant::AO) {
            for (const Stage& st : schedule.stages())
                rules.push_back(gauss_jacobi(schedule.quadrature_points(), st.params.alpha()));
        } else {
            rules.push_back(gauss_jacobi(schedule.quadrature_points(), schedule.params().alpha()));
        }
    }

    // SpectralScaled etas are constant within a stage.
    std::vector<double> stage_eta;
    const bool spectral = std::holds_alternative<SpectralScaled>(policy);
    if (spectral) {
        if (schedule.variant() == Variant::AO) {
            for (const Stage& st : schedule.stages())
                stage_eta.push_back(
                    compute_stepsize(policy, obj, x0, x0, st.params.gamma()));
        } else {
            const double gamma =
                schedule.variant() == Variant::GD ? 0.0 : schedule.params().gamma();
            stage_eta.push_back(compute_stepsize(policy, obj, x0, x0, gamma));
        }
    }
    auto stage_index = [&](std::size_t k) -> std::size_t {
        if (schedule.variant() != Variant::AO) return 0;
        std::size_t upto = 0, idx = 0;
        for (const Stage& st : schedule.stages()) {
            upto += st.iterations;
            if (k < upto) return idx;
            ++idx;
        }
        return schedule.stages().size() - 1;
    };

    std::vector<Vector> past(schedule.history().begin(), schedule.history().end());

    Vector x = x0;
    obj.prepare_cache(x);
    TraceRecord first;
    first.iter = 0;
    first.x = x;
    first.objective = obj.value(x);
    fill_distances(first, refs);
    trace.records().push_back(std::move(first));

    std::string stop_reason = "max_iterations";
    for (std::size_t k = 0; k < stopping.max_iterations; ++k) {
        const std::size_t si = stage_index(k);
        const QuadratureRule* rule = nullptr;
        if (!rules.empty()) rule = &rules[std::min(si, rules.size() - 1)];

        const Vector d =
            step_direction(schedule, obj, x, {past.data(), past.size()}, k, rule);
        if (norm_inf(d) <= stopping.gradient_tolerance) {
            stop_reason = "direction_tolerance";
            break;
        }

        double eta;
        if (spectral) {
            eta = stage_eta[std::min(si, stage_eta.size() - 1)];
        } else {
            try {
                eta = compute_stepsize(policy, obj, x, d);
            } catch (const DegenerateDirection&) {
                stop_reason = "degenerate_direction";
                break;
            }
        }

        Vector next = x;
        for (std::size_t i = 0; i < next.size(); ++i) next[i] -= eta * d[i];

        trace.records().back().stepsize = eta;

        if (!next.all_finite()) {
            trace.mark_non_finite();
            stop_reason = "non_finite_iterate";
            break;
        }

        if (schedule.variant() == Variant::AT) {
            past.insert(past.begin(), x);
            past.pop_back();
        }
        x = std::move(next);
        obj.prepare_cache(x);

        TraceRecord rec;
        rec.iter = k + 1;
        rec.x = x;
        rec.objective = obj.value(x);
        fill_distances(rec, refs);
        trace.records().push_back(std::move(rec));

        if (stopping.objective_tolerance &&
            trace.records().back().objective <= *stopping.objective_tolerance) {
            stop_reason = "objective_tolerance";
            break;
        }
    }

    trace.set_meta("stop_reason", stop_reason);
    trace.set_meta("iterations", static_cast<double>(trace.records().size() - 1));
    return trace;
}

NnTrainingResult run_nn_training(TwoLayerTanhNet& net, const Schedule& schedule,
                                 std::size_t quad_points, std::size_t iterations, const Vector& x0,
                                 std::span<const double> test_inputs,
                                 std::span<const double> test_targets) {
    if (schedule.variant() != Variant::GD && schedule.variant() != Variant::AT)
        throw ConfigError("run_nn_training drives GD or AT schedules");
    schedule.validate(x0.size());
    if (x0.size() != net.dimension()) throw DimensionMismatch("run_nn_training: x0 dimension");
    if (test_inputs.size() != test_targets.size())
        throw DimensionMismatch("run_nn_training: test set sizes disagree");

    const std::size_t n = net.width();
    const bool cfgd = schedule.variant() == Variant::AT;
    QuadratureRule rule;
    if (cfgd) rule = gauss_jacobi(quad_points, schedule.params().alpha());

    auto test_error = [&](const Vector& x) {
        if (test_inputs.empty()) return 0.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < test_inputs.size(); ++i) {
            const double r = net.predict(test_inputs[i], x) - test_targets[i];
            acc += r * r;
        }
        return acc / static_cast<double>(test_inputs.size());
    };

    Trace trace;
    trace.set_meta("schedule", schedule.describe());
    trace.set_meta("quadrature_points", static_cast<double>(quad_points));

    std::vector<Vector> past(schedule.history().begin(), schedule.history().end());

    Vector x = x0;
    net.prepare_cache(x);
    TraceRecord first;
    first.iter = 0;
    first.x = x;
    first.objective = net.value(x);
    first.test_error = test_error(x);
    trace.records().push_back(std::move(first));

    std::string stop_reason = "max_iterations";
    const auto grid = stepsize_grid();

    for (std::size_t k = 0; k < iterations; ++k) {
        net.prepare_cache(x);
        const Matrix& phi = net.cached_features();
        const Vector& misfit = net.cached_misfit();

        Vector d;
        if (!cfgd) {
            d = net.gradient(x);
        } else {
            const Vector& terminal = past.back(); // x^(k-L)
            d = scaled_direction_quadrature(net, x, terminal, schedule.params(), rule);
        }

        // Exact line-search rate on the coefficient block: f restricted to a3
        // is 1/2 ||phi' a3 - y||^2, so eta = <misfit, phi' d3> / ||phi' d3||^2.
        const std::size_t m = net.sample_count();
        Vector v(m);
        for (std::size_t j = 0; j < n; ++j) {
            const double dj = d[2 * n + j];
            if (dj == 0.0) continue;
            for (std::size_t i = 0; i < m; ++i) v[i] += phi(j, i) * dj;
        }
        const double vv = dot(v, v);
        const double eta3 = vv > 1e-300 ? dot(misfit, v) / vv : 0.0;

        Vector candidate = x;
        for (std::size_t j = 0; j < n; ++j) candidate[2 * n + j] = x[2 * n + j] - eta3 * d[2 * n + j];

        // Shared grid rate for weights and biases, judged on the loss with the
        // coefficient step already applied. Descending grid keeps the larger
        // stepsize on ties.
        double best_eta = 0.0, best_value = 0.0;
        bool have = false;
        for (double eta : grid) {
            for (std::size_t j = 0; j < 2 * n; ++j) candidate[j] = x[j] - eta * d[j];
            const double value = net.value(candidate);
            if (!have || value < best_value) {
                have = true;
                best_value = value;
                best_eta = eta;
            }
        }
        for (std::size_t j = 0; j < 2 * n; ++j) candidate[j] = x[j] - best_eta * d[j];

        trace.records().back().stepsize = best_eta;

        if (!candidate.all_finite()) {
            trace.mark_non_finite();
            stop_reason = "non_finite_iterate";
            break;
        }

        if (cfgd) {
            past.insert(past.begin(), x);
            past.pop_back();
        }
        x = std::move(candidate);

        TraceRecord rec;
        rec.iter = k + 1;
        rec.x = x;
        rec.objective = best_value;
        rec.test_error = test_error(x);
        trace.records().push_back(std::move(rec));
    }

    trace.set_meta("stop_reason", stop_reason);
    return {std::move(trace), std::move(x)};
}

} // namespace cfgd
