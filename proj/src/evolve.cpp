#include "normflow/evolve.hpp"

#include <algorithm>
#include <string>

namespace normflow {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

bool record_is_finite(const TimeSeriesRecord& r) {
    return std::isfinite(r.tau) && std::isfinite(r.norm_sq) && std::isfinite(r.mu) && std::isfinite(r.l2_error) &&
           std::isfinite(r.energy);
}

}  // namespace

std::string_view to_string(Termination termination) noexcept {
    switch (termination) {
        case Termination::Converged: return "converged";
        case Termination::MaxSteps: return "max_steps";
        case Termination::Diverged: return "diverged";
    }
    return "unknown";
}

Wavefunction make_initial(const InitialCondition& initial, const GridSpec& grid) {
    switch (initial.kind) {
        case InitialKind::Sech:
            return soliton_reference(grid);
        case InitialKind::SechNormalized:
            return renormalize(soliton_reference(grid), 1.0);
        case InitialKind::Gaussian: {
            require_positive(initial.width, "gaussian width");
            Field values(grid.points());
            const double two_w2 = 2.0 * initial.width * initial.width;
            for (std::size_t j = 0; j < values.size(); ++j) {
                const double x = grid.coordinate(j);
                values[j] = std::exp(-x * x / two_w2);
            }
            return Wavefunction(grid, std::move(values));
        }
    }
    throw std::invalid_argument("unknown initial condition");
}

void SolverConfig::validate() const {
    physics.validate();
    require_positive(dtau, "dtau");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be finite and >= 0");
    require_positive(target_norm_sq, "target_norm_sq");
    if (initial.kind == InitialKind::Gaussian) require_positive(initial.width, "gaussian width");
    if (record_every == 0) throw std::invalid_argument("record_every must be positive");
    require_positive(convergence_tol, "convergence_tol");
    if (renormalize_every_step && law != FeedbackLaw::Off) {
        throw std::invalid_argument("renormalize requires law = off (projection and feedback are exclusive)");
    }
    if (pinned_mu && !std::isfinite(*pinned_mu)) throw std::invalid_argument("pinned mu must be finite");
}

Field rhs(const Wavefunction& psi, const PhysicsParams& params, const FeedbackState& feedback, FeedbackLaw law) {
    Field out = apply_hamiltonian(psi, params);
    if (law == FeedbackLaw::Off) {
        for (Complex& v : out) v = -v;
        return out;
    }
    const Complex c = feedback_coefficient(feedback, law);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = -out[j] + c * psi[j];
    return out;
}

Wavefunction rk4_step(const Wavefunction& psi, double dtau, const PhysicsParams& params,
                      const FeedbackState& feedback, FeedbackLaw law) {
    require_positive(dtau, "dtau");
    Wavefunction next = psi;
    Rk4Integrator integrator(psi.size());
    const Complex c = feedback_coefficient(feedback, law);
    const GridSpec& grid = psi.grid();
    const bool ok = integrator.advance(next.values(), dtau, [&](std::span<const Complex> in, std::span<Complex> out) {
        hamiltonian_into(in, grid, params, out);
        for (std::size_t j = 0; j < in.size(); ++j) out[j] = -out[j] + c * in[j];
    });
    if (!ok) throw DivergenceError("rk4_step: non-finite stage value");
    return next;
}

Wavefunction renormalize(const Wavefunction& psi, double target_norm_sq) {
    require_positive(target_norm_sq, "target_norm_sq");
    const double n2 = norm_squared(psi);
    if (!(n2 > 0.0)) throw std::invalid_argument("renormalize: cannot project a zero-norm wavefunction");
    const double scale = std::sqrt(target_norm_sq / n2);
    Wavefunction out = psi;
    for (Complex& v : out.values()) v *= scale;
    return out;
}

RunResult run(const SolverConfig& config) {
    config.validate();
    const GridSpec& grid = config.grid;
    const Wavefunction reference = soliton_reference(grid);

    Wavefunction psi = make_initial(config.initial, grid);
    if (config.renormalize_every_step) psi = renormalize(psi, config.target_norm_sq);

    FeedbackState feedback;
    feedback.alpha = config.alpha;
    feedback.target_norm_sq = config.target_norm_sq;

    RunResult result{psi, {}, Termination::MaxSteps, 0, std::nullopt};
    result.series.reserve(config.max_steps / config.record_every + 2);

    auto diverge = [&](std::size_t step) {
        result.termination = Termination::Diverged;
        result.diverged_at_step = step;
    };

    Rk4Integrator integrator(grid.points());
    for (std::size_t step = 0;; ++step) {
        const double n2 = norm_squared(psi);
        try {
            feedback = update_mu(feedback, n2, config.dtau, config.law);
            if (config.pinned_mu) feedback.mu = *config.pinned_mu;
            feedback = refresh_balance(feedback, psi, config.physics, config.law);
        } catch (const DivergenceError&) {
            diverge(step);
            break;
        }

        const bool last = step == config.max_steps;
        if (step % config.record_every == 0 || last) {
            const TimeSeriesRecord row{static_cast<double>(step) * config.dtau, n2, feedback.mu,
                                       l2_error(psi, reference), energy(psi, config.physics)};
            if (!record_is_finite(row)) {
                diverge(step);
                break;
            }
            result.series.push_back(row);
            const std::size_t count = result.series.size();
            if (count >= 2 &&
                std::abs(result.series[count - 1].l2_error - result.series[count - 2].l2_error) <
                    config.convergence_tol) {
                result.termination = Termination::Converged;
                break;
            }
        }
        if (last) break;

        const Complex c = feedback_coefficient(feedback, config.law);
        const bool ok = integrator.advance(psi.values(), config.dtau,
                                           [&](std::span<const Complex> in, std::span<Complex> out) {
                                               hamiltonian_into(in, grid, config.physics, out);
                                               for (std::size_t j = 0; j < in.size(); ++j) {
                                                   out[j] = -out[j] + c * in[j];
                                               }
                                           });
        if (!ok) {
            diverge(step + 1);
            break;
        }
        if (config.renormalize_every_step) {
            const double after = norm_squared(psi);
            if (!(after > 0.0) || !std::isfinite(after)) {
                diverge(step + 1);
                break;
            }
            const double scale = std::sqrt(config.target_norm_sq / after);
            for (Complex& v : psi.values()) v *= scale;
        }
        result.steps_taken = step + 1;
    }

    result.final_psi = std::move(psi);
    return result;
}

}  // namespace normflow
