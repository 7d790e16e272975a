#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

#include "normflow/model.hpp"

namespace normflow {

/// How the control signal mu enters the flow d(psi)/dtau = -H[psi] + F.
enum class FeedbackLaw {
    Off,         ///< F = 0
    Literal,     ///< F = i mu psi, mu = alpha dN/dtau. Pure phase rotation.
    GaugeReal,   ///< F = mu psi, mu = alpha dN/dtau
    TargetNorm,  ///< F = (lambda + mu) psi, mu = alpha (N0 - N), lambda = Rayleigh quotient
};

[[nodiscard]] std::string_view to_string(FeedbackLaw law) noexcept;
[[nodiscard]] std::optional<FeedbackLaw> parse_feedback_law(std::string_view name) noexcept;

/// A run produced NaN/Inf. Carries the step at which it was first seen when known.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what, std::optional<std::size_t> step = std::nullopt)
        : std::runtime_error(what), step_(step) {}
    [[nodiscard]] std::optional<std::size_t> step() const noexcept { return step_; }

private:
    std::optional<std::size_t> step_;
};

/**
 * Controller memory for one simulation.
 *
 * `balance` is only used by TargetNorm: it holds Re<psi,H psi>/||psi||^2 for
 * the current step, which cancels the Hamiltonian's own norm drift so that
 * the proportional term alone sets dN/dtau = 2 mu N. Without it the
 * proportional law has no fixed point with N near N0 for small alpha.
 */
struct FeedbackState {
    double alpha = 0.5;
    std::optional<double> prev_norm_sq;
    double mu = 0.0;
    double target_norm_sq = 2.0;
    double balance = 0.0;
};

/**
 * Advances the controller by one outer step given the norm of the current
 * state. Derivative laws use a backward difference and report mu = 0 on the
 * first call. Throws std::invalid_argument for dtau <= 0 and DivergenceError
 * if the norm or resulting mu is not finite.
 */
[[nodiscard]] FeedbackState update_mu(FeedbackState state, double current_norm_sq, double dtau, FeedbackLaw law);

/// Recomputes `balance` from psi for TargetNorm; zero for every other law.
[[nodiscard]] FeedbackState refresh_balance(FeedbackState state, const Wavefunction& psi,
                                            const PhysicsParams& params, FeedbackLaw law);

/// Complex multiplier c such that the feedback term is c * psi.
[[nodiscard]] Complex feedback_coefficient(const FeedbackState& state, FeedbackLaw law) noexcept;

[[nodiscard]] Field feedback_term(const Wavefunction& psi, const FeedbackState& state, FeedbackLaw law);

}  // namespace normflow
