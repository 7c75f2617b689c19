#include "canput/numdiff.hpp"

#include <cmath>

namespace canput {

double right_derivative_richardson(const std::function<double(double)>& f, double x) {
    const double h0 = 1e-4 * std::abs(x);
    const double fx = f(x);
    auto forward = [&](double h) { return (f(x + h) - fx) / h; };
    const double d0 = forward(h0);
    const double d1 = forward(h0 / 2.0);
    const double d2 = forward(h0 / 4.0);
    // Error expansion c1 h + c2 h^2 + ...
    const double r0 = 2.0 * d1 - d0;
    const double r1 = 2.0 * d2 - d1;
    return (4.0 * r1 - r0) / 3.0;
}

double central_derivative(const std::function<double(double)>& f, double x, double rel_step) {
    const double h = rel_step * std::abs(x);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace canput
