#include "normflow/model.hpp"

#include <cmath>
#include <string>

namespace normflow {

void PhysicsParams::validate() const {
    if (!std::isfinite(g)) throw std::invalid_argument("interaction strength g must be finite");
}

Wavefunction::Wavefunction(GridSpec grid) : grid_(grid), values_(grid.points()) {}

Wavefunction::Wavefunction(GridSpec grid, Field values) : grid_(grid), values_(std::move(values)) {
    require_shape(values_.size(), grid_);
}

bool all_finite(std::span<const Complex> values) noexcept {
    for (const Complex& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

bool Wavefunction::is_finite() const noexcept { return all_finite(values_); }

void hamiltonian_into(std::span<const Complex> psi, const GridSpec& grid, const PhysicsParams& params,
                      std::span<Complex> out) {
    laplacian_into(psi, grid, out);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        out[j] = -0.5 * out[j] + params.g * std::norm(psi[j]) * psi[j];
    }
}

Field apply_hamiltonian(const Wavefunction& psi, const PhysicsParams& params) {
    if (!psi.is_finite()) throw NonFiniteError("apply_hamiltonian: wavefunction has non-finite entries");
    Field out(psi.size());
    hamiltonian_into(psi.values(), psi.grid(), params, out);
    return out;
}

double norm_squared(std::span<const Complex> psi, const GridSpec& grid) {
    require_shape(psi.size(), grid);
    double sum = 0.0;
    for (const Complex& v : psi) sum += std::norm(v);
    return sum * quadrature_weight(grid);
}

double norm_squared(const Wavefunction& psi) { return norm_squared(psi.values(), psi.grid()); }

double real_inner(std::span<const Complex> u, std::span<const Complex> v, const GridSpec& grid) {
    require_shape(u.size(), grid);
    require_shape(v.size(), grid);
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) sum += (std::conj(u[j]) * v[j]).real();
    return sum * quadrature_weight(grid);
}

double energy(const Wavefunction& psi, const PhysicsParams& params) {
    const auto v = psi.values();
    const std::size_t n = v.size();
    const double inv_2dx = 0.5 / psi.grid().spacing();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex grad = (v[(j + 1) % n] - v[(j + n - 1) % n]) * inv_2dx;
        const double density = std::norm(v[j]);
        sum += 0.5 * std::norm(grad) + 0.5 * params.g * density * density;
    }
    return sum * quadrature_weight(psi.grid());
}

double l2_error(const Wavefunction& psi, const Wavefunction& reference) {
    if (!(psi.grid() == reference.grid())) throw ShapeError("l2_error: fields live on different grids");
    const double ref_norm = std::sqrt(norm_squared(reference));
    if (ref_norm == 0.0) throw std::invalid_argument("l2_error: reference has zero norm");
    const double psi_norm = std::sqrt(norm_squared(psi));
    if (psi_norm == 0.0) throw std::invalid_argument("l2_error: wavefunction has zero norm");

    double sum = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double d = std::abs(psi[j]) / psi_norm - std::abs(reference[j]) / ref_norm;
        sum += d * d;
    }
    return std::sqrt(sum * quadrature_weight(psi.grid()));
}

Wavefunction soliton_reference(const GridSpec& grid) {
    Field values(grid.points());
    for (std::size_t j = 0; j < values.size(); ++j) values[j] = 1.0 / std::cosh(grid.coordinate(j));
    return Wavefunction(grid, std::move(values));
}

double chemical_potential_estimate(const Wavefunction& psi, const PhysicsParams& params) {
    const double n2 = norm_squared(psi);
    if (n2 == 0.0) throw std::invalid_argument("chemical_potential_estimate: zero-norm wavefunction");
    const Field h = apply_hamiltonian(psi, params);
    return real_inner(psi.values(), h, psi.grid()) / n2;
}

}  // namespace normflow
