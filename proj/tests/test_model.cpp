#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "normflow/model.hpp"
#include "test_support.hpp"

using namespace normflow;
using normflow::testing::max_abs;
using normflow::testing::max_abs_diff;
using normflow::testing::sech;

namespace {

const GridSpec kGrid(40.0, 512);

Wavefunction constant(const GridSpec& grid, Complex c) { return Wavefunction(grid, Field(grid.points(), c)); }

// |H[sech] + sech/2| at g = -1, which vanishes in the continuum.
double stationarity_residual(const GridSpec& grid) {
    const Wavefunction s = soliton_reference(grid);
    const Field h = apply_hamiltonian(s, PhysicsParams{-1.0});
    double r = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) r = std::max(r, std::abs(h[j] + 0.5 * s[j]));
    return r;
}

// Leading truncation term of the stencil: -1/2 (dx^2/12) sech''''(x), largest at x = 0.
double stencil_error_bound(const GridSpec& grid) {
    const double dx = grid.spacing();
    return dx * dx / 24.0 * std::abs(testing::sech_d4(0.0));
}

}  // namespace

TEST_CASE("wavefunction shape") {
    CHECK_THROWS_AS(Wavefunction(kGrid, Field(511)), ShapeError);
    Wavefunction psi(kGrid);
    CHECK(psi.size() == 512);
    CHECK(psi.is_finite());
    psi[3] = Complex{std::numeric_limits<double>::infinity(), 0.0};
    CHECK_FALSE(psi.is_finite());
}

TEST_CASE("apply_hamiltonian") {
    SUBCASE("zero field") {
        for (const auto& v : apply_hamiltonian(Wavefunction(kGrid), PhysicsParams{3.0})) CHECK(v == Complex{});
    }
    SUBCASE("constant field sees only the cubic term") {
        const Complex c{0.6, -0.8};
        const Field h = apply_hamiltonian(constant(kGrid, c), PhysicsParams{1.0});
        for (const auto& v : h) CHECK(v == std::norm(c) * c);
    }
    SUBCASE("sech is stationary up to stencil truncation error") {
        const double residual = stationarity_residual(kGrid);
        const double bound = stencil_error_bound(kGrid);
        CHECK(residual <= 1.02 * bound);
        CHECK(residual >= 0.98 * bound);
        CHECK(stationarity_residual(GridSpec(40.0, 1024)) <= 5e-4);
    }
    SUBCASE("stationarity residual shrinks fourfold when N doubles") {
        const double ratio = stationarity_residual(GridSpec(40.0, 512)) / stationarity_residual(GridSpec(40.0, 1024));
        CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
    }
    SUBCASE("non-finite input is rejected") {
        Wavefunction psi = soliton_reference(kGrid);
        psi[10] = Complex{std::nan(""), 0.0};
        CHECK_THROWS_AS((void)apply_hamiltonian(psi, PhysicsParams{-1.0}), NonFiniteError);
    }
}

TEST_CASE("hamiltonian structure on random fields") {
    std::mt19937_64 rng(7);
    const GridSpec grid(12.0, 96);
    for (int trial = 0; trial < 25; ++trial) {
        const Wavefunction u(grid, testing::random_field(96, rng));
        const Wavefunction v(grid, testing::random_field(96, rng));
        const Complex a = testing::random_scalar(rng);

        // Linear when g = 0.
        Field sum(96);
        for (std::size_t j = 0; j < 96; ++j) sum[j] = u[j] + a * v[j];
        const Field hu = apply_hamiltonian(u, PhysicsParams{0.0});
        const Field hv = apply_hamiltonian(v, PhysicsParams{0.0});
        const Field hsum = apply_hamiltonian(Wavefunction(grid, sum), PhysicsParams{0.0});
        Field expected(96);
        for (std::size_t j = 0; j < 96; ++j) expected[j] = hu[j] + a * hv[j];
        CHECK(max_abs_diff(hsum, expected) <= 1e-12 * max_abs(expected));

        // Global phase passes straight through, nonlinear term included.
        const double theta = std::uniform_real_distribution<double>(0.0, 6.3)(rng);
        const Complex phase = std::polar(1.0, theta);
        Field rotated(96);
        for (std::size_t j = 0; j < 96; ++j) rotated[j] = phase * u[j];
        const PhysicsParams nonlinear{-1.7};
        const Field h_rot = apply_hamiltonian(Wavefunction(grid, rotated), nonlinear);
        const Field h_u = apply_hamiltonian(u, nonlinear);
        Field rotated_h(96);
        for (std::size_t j = 0; j < 96; ++j) rotated_h[j] = phase * h_u[j];
        CHECK(max_abs_diff(h_rot, rotated_h) <= 1e-12 * max_abs(h_u));

        // <psi, H psi> is real.
        Complex inner{};
        double magnitude = 0.0;
        for (std::size_t j = 0; j < 96; ++j) {
            inner += std::conj(u[j]) * h_u[j];
            magnitude += std::abs(u[j]) * std::abs(h_u[j]);
        }
        CHECK(std::abs(inner.imag()) <= 1e-12 * magnitude);
    }
}

TEST_CASE("norm_squared") {
    CHECK(norm_squared(Wavefunction(kGrid)) == 0.0);
    CHECK(norm_squared(constant(kGrid, Complex{0.0, 1.0})) == doctest::Approx(40.0).epsilon(1e-14));
    CHECK(std::abs(norm_squared(soliton_reference(kGrid)) - 2.0) <= 1e-8);
}

TEST_CASE("energy") {
    CHECK(energy(Wavefunction(kGrid), PhysicsParams{-1.0}) == 0.0);
    // 1/2 int sech'^2 = 1/3 and -1/2 int sech^4 = -2/3.
    CHECK(std::abs(energy(soliton_reference(kGrid), PhysicsParams{-1.0}) + 1.0 / 3.0) <= 2e-3);
    const Complex c{0.3, 0.4};
    const double expected = 0.5 * 2.0 * std::pow(std::abs(c), 4) * 40.0;
    CHECK(energy(constant(kGrid, c), PhysicsParams{2.0}) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("l2_error") {
    const Wavefunction ref = soliton_reference(kGrid);
    CHECK(l2_error(ref, ref) == 0.0);

    Wavefunction rotated = ref;
    for (auto& v : rotated.values()) v *= std::polar(1.0, 1.234);
    CHECK(l2_error(rotated, ref) <= 1e-15);

    Wavefunction doubled = ref;
    for (auto& v : doubled.values()) v *= 2.0;
    CHECK(l2_error(doubled, ref) <= 1e-15);

    CHECK_THROWS_AS((void)l2_error(ref, Wavefunction(kGrid)), std::invalid_argument);
    CHECK_THROWS_AS((void)l2_error(ref, soliton_reference(GridSpec(40.0, 256))), ShapeError);
}

TEST_CASE("soliton_reference") {
    const Wavefunction s = soliton_reference(kGrid);
    CHECK(s[256] == Complex{1.0, 0.0});
    // x = -L/2 = -20: sech(20) = 2 / (e^20 + e^-20).
    CHECK(s[0].real() == doctest::Approx(2.0 / (std::exp(20.0) + std::exp(-20.0))).epsilon(1e-12));
    CHECK(s[0].imag() == 0.0);
    for (std::size_t j = 1; j < 256; ++j) CHECK(s[256 - j] == s[256 + j]);
}

TEST_CASE("chemical_potential_estimate") {
    // Rayleigh quotient of sech at g = -1 is -1/2 plus the stencil bias
    // -(dx^2/24) int sech''^2 / int sech^2 = -(dx^2/24)(14/15)/2.
    const double dx = kGrid.spacing();
    const double predicted = -0.5 - dx * dx / 24.0 * (14.0 / 15.0) / 2.0;
    const double mu = chemical_potential_estimate(soliton_reference(kGrid), PhysicsParams{-1.0});
    CHECK(std::abs(mu - predicted) <= 1e-6);
    CHECK(std::abs(chemical_potential_estimate(soliton_reference(GridSpec(40.0, 1024)), PhysicsParams{-1.0}) + 0.5) <=
          1e-4);

    const Complex c{1.5, -0.5};
    CHECK(chemical_potential_estimate(constant(kGrid, c), PhysicsParams{0.0}) == 0.0);
    CHECK(chemical_potential_estimate(constant(kGrid, c), PhysicsParams{1.0}) ==
          doctest::Approx(std::norm(c)).epsilon(1e-14));
    CHECK_THROWS_AS((void)chemical_potential_estimate(Wavefunction(kGrid), PhysicsParams{1.0}), std::invalid_argument);
}
