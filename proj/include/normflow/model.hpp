#pragma once

#include <span>
#include <stdexcept>

#include "normflow/grid.hpp"

namespace normflow {

/// Raised when a field that must stay finite carries NaN or Inf.
class NonFiniteError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PhysicsParams {
    double g = -1.0;  ///< cubic interaction strength; negative is focusing

    void validate() const;
};

/// Complex samples paired with the grid they live on. Always N values.
class Wavefunction {
public:
    explicit Wavefunction(GridSpec grid);  ///< zero field
    Wavefunction(GridSpec grid, Field values);

    [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const Complex> values() const noexcept { return values_; }
    [[nodiscard]] std::span<Complex> values() noexcept { return values_; }
    [[nodiscard]] const Field& field() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    const Complex& operator[](std::size_t j) const { return values_[j]; }
    Complex& operator[](std::size_t j) { return values_[j]; }

    [[nodiscard]] bool is_finite() const noexcept;

private:
    GridSpec grid_;
    Field values_;
};

[[nodiscard]] bool all_finite(std::span<const Complex> values) noexcept;

/// H[psi] = -1/2 lap(psi) + g |psi|^2 psi. Throws NonFiniteError on NaN/Inf input.
[[nodiscard]] Field apply_hamiltonian(const Wavefunction& psi, const PhysicsParams& params);

/// Unchecked kernel behind apply_hamiltonian; `out` must not alias `psi`.
void hamiltonian_into(std::span<const Complex> psi, const GridSpec& grid, const PhysicsParams& params,
                      std::span<Complex> out);

/// Discrete squared L2 norm, sum |psi_j|^2 dx.
[[nodiscard]] double norm_squared(std::span<const Complex> psi, const GridSpec& grid);
[[nodiscard]] double norm_squared(const Wavefunction& psi);

/// Re sum conj(u_j) v_j dx.
[[nodiscard]] double real_inner(std::span<const Complex> u, std::span<const Complex> v, const GridSpec& grid);

/**
 * E[psi] = sum (1/2 |D psi|_j^2 + g/2 |psi_j|^4) dx, with D the centered
 * periodic first difference. Deliberately not built from the evolution's
 * second-difference operator.
 */
[[nodiscard]] double energy(const Wavefunction& psi, const PhysicsParams& params);

/// L2 distance between |psi|/||psi|| and |ref|/||ref||. Insensitive to global phase and scale.
[[nodiscard]] double l2_error(const Wavefunction& psi, const Wavefunction& reference);

/// sech(x_j) sampled on the grid.
[[nodiscard]] Wavefunction soliton_reference(const GridSpec& grid);

/// Rayleigh quotient Re<psi, H psi> / ||psi||^2. Throws std::invalid_argument on a zero field.
[[nodiscard]] double chemical_potential_estimate(const Wavefunction& psi, const PhysicsParams& params);

}  // namespace normflow
