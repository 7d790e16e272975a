#include "normflow/control.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace normflow {

namespace {

constexpr std::array<std::pair<FeedbackLaw, std::string_view>, 4> kLawNames{{
    {FeedbackLaw::Off, "off"},
    {FeedbackLaw::Literal, "literal"},
    {FeedbackLaw::GaugeReal, "gauge_real"},
    {FeedbackLaw::TargetNorm, "target_norm"},
}};

}  // namespace

std::string_view to_string(FeedbackLaw law) noexcept {
    for (const auto& [value, name] : kLawNames) {
        if (value == law) return name;
    }
    return "unknown";
}

std::optional<FeedbackLaw> parse_feedback_law(std::string_view name) noexcept {
    for (const auto& [value, law_name] : kLawNames) {
        if (law_name == name) return value;
    }
    return std::nullopt;
}

FeedbackState update_mu(FeedbackState state, double current_norm_sq, double dtau, FeedbackLaw law) {
    if (!(dtau > 0.0)) throw std::invalid_argument("update_mu: dtau must be positive");
    if (!std::isfinite(current_norm_sq)) throw DivergenceError("update_mu: norm is not finite");

    switch (law) {
        case FeedbackLaw::Off:
            state.mu = 0.0;
            break;
        case FeedbackLaw::Literal:
        case FeedbackLaw::GaugeReal:
            state.mu = state.prev_norm_sq ? state.alpha * (current_norm_sq - *state.prev_norm_sq) / dtau : 0.0;
            state.prev_norm_sq = current_norm_sq;
            break;
        case FeedbackLaw::TargetNorm:
            state.mu = state.alpha * (state.target_norm_sq - current_norm_sq);
            break;
    }
    if (!std::isfinite(state.mu)) throw DivergenceError("update_mu: feedback signal is not finite");
    return state;
}

FeedbackState refresh_balance(FeedbackState state, const Wavefunction& psi, const PhysicsParams& params,
                              FeedbackLaw law) {
    state.balance = law == FeedbackLaw::TargetNorm ? chemical_potential_estimate(psi, params) : 0.0;
    if (!std::isfinite(state.balance)) throw DivergenceError("refresh_balance: Rayleigh quotient is not finite");
    return state;
}

Complex feedback_coefficient(const FeedbackState& state, FeedbackLaw law) noexcept {
    switch (law) {
        case FeedbackLaw::Off: return {0.0, 0.0};
        case FeedbackLaw::Literal: return {0.0, state.mu};
        case FeedbackLaw::GaugeReal: return {state.mu, 0.0};
        case FeedbackLaw::TargetNorm: return {state.balance + state.mu, 0.0};
    }
    return {0.0, 0.0};
}

Field feedback_term(const Wavefunction& psi, const FeedbackState& state, FeedbackLaw law) {
    Field out(psi.size());
    if (law == FeedbackLaw::Off) return out;
    const Complex c = feedback_coefficient(state, law);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = c * psi[j];
    return out;
}

}  // namespace normflow
