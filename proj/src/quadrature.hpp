#pragma once

#include <functional>
#include <vector>

namespace stepwell::quad {

struct Rule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre polynomial.
const Rule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] split into equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order = 16);

// Adaptive panel bisection; error estimated from an embedded lower-order rule.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 40);

} // namespace stepwell::quad
