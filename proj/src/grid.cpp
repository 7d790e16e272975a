#include "normflow/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace normflow {

GridSpec::GridSpec(double length, std::size_t points)
    : length_(length), points_(points), spacing_(length / static_cast<double>(points)) {
    if (!std::isfinite(length) || length <= 0.0) {
        throw std::invalid_argument("grid length must be positive and finite, got " + std::to_string(length));
    }
    if (points < kMinPoints) {
        throw std::invalid_argument("grid needs at least " + std::to_string(kMinPoints) + " points, got " +
                                    std::to_string(points));
    }
}

std::vector<double> GridSpec::coordinates() const {
    std::vector<double> x(points_);
    for (std::size_t j = 0; j < points_; ++j) x[j] = coordinate(j);
    return x;
}

void require_shape(std::size_t size, const GridSpec& grid) {
    if (size != grid.points()) {
        throw ShapeError("field has " + std::to_string(size) + " values but grid has " +
                         std::to_string(grid.points()) + " points");
    }
}

void laplacian_into(std::span<const Complex> psi, const GridSpec& grid, std::span<Complex> out) {
    require_shape(psi.size(), grid);
    require_shape(out.size(), grid);
    const std::size_t n = psi.size();
    const double inv_dx2 = 1.0 / (grid.spacing() * grid.spacing());

    out[0] = (psi[1] - 2.0 * psi[0] + psi[n - 1]) * inv_dx2;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        out[j] = (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) * inv_dx2;
    }
    out[n - 1] = (psi[0] - 2.0 * psi[n - 1] + psi[n - 2]) * inv_dx2;
}

Field laplacian(std::span<const Complex> psi, const GridSpec& grid) {
    Field out(psi.size());
    laplacian_into(psi, grid, out);
    return out;
}

double integrate(std::span<const double> samples, const GridSpec& grid) {
    require_shape(samples.size(), grid);
    // Periodic trapezoid: both end half-weights land on the same sample.
    return std::accumulate(samples.begin(), samples.end(), 0.0) * quadrature_weight(grid);
}

}  // namespace normflow
