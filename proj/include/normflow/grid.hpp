#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace normflow {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

/// Raised when a field's length does not match the grid it is used with.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Uniform periodic grid on [-L/2, L/2).
 *
 * Sample j sits at x_j = -L/2 + j*dx with dx = L/N, so for even N the
 * origin is sample N/2. The right endpoint L/2 is the periodic image of
 * sample 0 and is not stored.
 */
class GridSpec {
public:
    static constexpr double kDefaultLength = 40.0;
    static constexpr std::size_t kDefaultPoints = 512;
    static constexpr std::size_t kMinPoints = 4;

    /// Throws std::invalid_argument unless length > 0 (finite) and points >= 4.
    GridSpec(double length, std::size_t points);
    GridSpec() : GridSpec(kDefaultLength, kDefaultPoints) {}

    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] std::size_t points() const noexcept { return points_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }

    [[nodiscard]] double coordinate(std::size_t j) const noexcept {
        return -0.5 * length_ + static_cast<double>(j) * spacing_;
    }
    [[nodiscard]] std::vector<double> coordinates() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double length_;
    std::size_t points_;
    double spacing_;
};

/// (psi[j+1] - 2 psi[j] + psi[j-1]) / dx^2 with indices taken modulo N.
[[nodiscard]] Field laplacian(std::span<const Complex> psi, const GridSpec& grid);

/// Writes the periodic second difference of `psi` into `out`. No allocation.
void laplacian_into(std::span<const Complex> psi, const GridSpec& grid, std::span<Complex> out);

/// Weight of each sample in the periodic trapezoidal rule (equal to dx).
[[nodiscard]] inline double quadrature_weight(const GridSpec& grid) noexcept { return grid.spacing(); }

/// Trapezoidal integral of sampled real values.
[[nodiscard]] double integrate(std::span<const double> samples, const GridSpec& grid);

void require_shape(std::size_t size, const GridSpec& grid);

}  // namespace normflow
