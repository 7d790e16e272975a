#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "normflow/control.hpp"
#include "normflow/grid.hpp"
#include "normflow/model.hpp"

namespace normflow {

enum class InitialKind { Sech, SechNormalized, Gaussian };

struct InitialCondition {
    InitialKind kind = InitialKind::Sech;
    double width = 2.0;  ///< Gaussian only: exp(-x^2 / (2 width^2))

    friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

/// sech(x); sech(x) rescaled to unit discrete norm; or an unnormalized Gaussian.
[[nodiscard]] Wavefunction make_initial(const InitialCondition& initial, const GridSpec& grid);

struct SolverConfig {
    PhysicsParams physics{};
    GridSpec grid{};
    double dtau = 1e-3;
    std::size_t max_steps = 20000;
    FeedbackLaw law = FeedbackLaw::TargetNorm;
    double alpha = 0.5;
    double target_norm_sq = 2.0;
    InitialCondition initial{};
    bool renormalize_every_step = false;
    std::size_t record_every = 10;
    double convergence_tol = 1e-10;
    /// Bypasses update_mu and holds mu at this value for the whole run.
    std::optional<double> pinned_mu;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

struct TimeSeriesRecord {
    double tau = 0.0;
    double norm_sq = 0.0;
    double mu = 0.0;
    double l2_error = 0.0;
    double energy = 0.0;

    friend bool operator==(const TimeSeriesRecord&, const TimeSeriesRecord&) = default;
};

enum class Termination { Converged, MaxSteps, Diverged };

[[nodiscard]] std::string_view to_string(Termination termination) noexcept;

struct RunResult {
    Wavefunction final_psi;
    std::vector<TimeSeriesRecord> series;
    Termination termination = Termination::MaxSteps;
    std::size_t steps_taken = 0;
    std::optional<std::size_t> diverged_at_step;  ///< set iff termination == Diverged
};

/// -H[psi] + feedback_term(psi, feedback, law).
[[nodiscard]] Field rhs(const Wavefunction& psi, const PhysicsParams& params, const FeedbackState& feedback,
                        FeedbackLaw law);

/// Classical four-stage Runge-Kutta with reusable stage buffers.
class Rk4Integrator {
public:
    explicit Rk4Integrator(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), stage_(size) {}

    /**
     * Advances `y` by one step of size h. `f(in, out)` writes dy/dtau for
     * `in` into `out`. Returns false, leaving `y` untouched, if any stage
     * or the result is non-finite.
     */
    template <class Derivative>
    bool advance(std::span<Complex> y, double h, Derivative&& f) {
        const std::size_t n = y.size();
        f(std::span<const Complex>(y), std::span<Complex>(k1_));
        if (!all_finite(k1_)) return false;
        for (std::size_t j = 0; j < n; ++j) stage_[j] = y[j] + 0.5 * h * k1_[j];
        f(std::span<const Complex>(stage_), std::span<Complex>(k2_));
        if (!all_finite(k2_)) return false;
        for (std::size_t j = 0; j < n; ++j) stage_[j] = y[j] + 0.5 * h * k2_[j];
        f(std::span<const Complex>(stage_), std::span<Complex>(k3_));
        if (!all_finite(k3_)) return false;
        for (std::size_t j = 0; j < n; ++j) stage_[j] = y[j] + h * k3_[j];
        f(std::span<const Complex>(stage_), std::span<Complex>(k4_));
        if (!all_finite(k4_)) return false;

        const double w = h / 6.0;
        for (std::size_t j = 0; j < n; ++j) stage_[j] = y[j] + w * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
        if (!all_finite(stage_)) return false;
        std::copy(stage_.begin(), stage_.end(), y.begin());
        return true;
    }

private:
    Field k1_, k2_, k3_, k4_, stage_;
};

/// One RK4 step of the modified flow with mu frozen at `feedback`. Throws DivergenceError.
[[nodiscard]] Wavefunction rk4_step(const Wavefunction& psi, double dtau, const PhysicsParams& params,
                                    const FeedbackState& feedback, FeedbackLaw law);

/// psi * sqrt(target / ||psi||^2). Throws std::invalid_argument on a zero-norm field.
[[nodiscard]] Wavefunction renormalize(const Wavefunction& psi, double target_norm_sq);

/**
 * Runs imaginary-time evolution to convergence, the step limit, or blow-up.
 *
 * Each step: measure ||psi||^2, update mu (held fixed through the RK4
 * stages), advance, and optionally project back to the target norm. A
 * record is taken at step 0, every `record_every` steps, and at the final
 * state. The run converges when consecutive records' l2_error differ by
 * less than `convergence_tol`.
 */
[[nodiscard]] RunResult run(const SolverConfig& config);

}  // namespace normflow
