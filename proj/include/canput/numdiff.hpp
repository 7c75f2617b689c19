#pragma once

#include <functional>

namespace canput {

/// Forward-difference derivative of f at x from the right, Richardson
/// extrapolated over the relative steps {1e-4, 5e-5, 2.5e-5} * |x|.
double right_derivative_richardson(const std::function<double(double)>& f, double x);

/// Central difference with step rel_step * |x|.
double central_derivative(const std::function<double(double)>& f, double x, double rel_step = 1e-4);

}  // namespace canput
