#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frontlearn/matrix.hpp"

namespace frontlearn::numerics {

enum class Boundary { periodic };

/// Finite-difference stencil shape. Only length 5 is implemented: the
/// 4th-order central weights [1,-8,0,8,-1]/(12dx) and
/// [-1,16,-30,16,-1]/(12dx^2).
struct StencilConfig {
    std::size_t length = 5;
    double spacing = 1.0;

    void validate() const;
};

std::vector<double> fd_first_derivative(std::span<const double> field, const StencilConfig& cfg,
                                        Boundary boundary = Boundary::periodic);
std::vector<double> fd_second_derivative(std::span<const double> field, const StencilConfig& cfg,
                                         Boundary boundary = Boundary::periodic);

// In-place variants for hot loops; `out` must have the size of `field`.
void fd_first_derivative(std::span<const double> field, const StencilConfig& cfg, std::span<double> out);
void fd_second_derivative(std::span<const double> field, const StencilConfig& cfg, std::span<double> out);

/// Time derivative of equidistant snapshots (rows). Interior rows use the
/// 4th-order central stencil; the first two and last two rows use the
/// 4th-order one-sided 5-point stencils. Requires at least 5 rows.
Matrix fd_time_derivative(const Matrix& snapshots, double dt);

}  // namespace frontlearn::numerics
