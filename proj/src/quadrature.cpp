#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "errors.hpp"

namespace stepwell::quad {

static Rule build_rule(int order) {
    Rule r;
    r.nodes.resize(order);
    r.weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[order - 1 - i] = w;
    }
    return r;
}

const Rule& gauss_legendre(int order) {
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

static double panel(const std::function<double(double)>& f, double a, double b, const Rule& r) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
    return h * s;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order) {
    if (panels < 1) fail(ErrorCode::invalid_argument, "integrate_panels: panels < 1");
    const Rule& r = gauss_legendre(order);
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) s += panel(f, a + i * h, a + (i + 1) * h, r);
    return s;
}

static double adapt(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, int depth, const Rule& lo, const Rule& hi) {
    const double coarse = panel(f, a, b, lo);
    const double fine = panel(f, a, 0.5 * (a + b), hi) + panel(f, 0.5 * (a + b), b, hi);
    if (depth <= 0 || std::abs(fine - coarse) <= abs_tol) return fine;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * abs_tol, depth - 1, lo, hi) +
           adapt(f, mid, b, 0.5 * abs_tol, depth - 1, lo, hi);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    const Rule& lo = gauss_legendre(7);
    const Rule& hi = gauss_legendre(15);
    return adapt(f, a, b, abs_tol, max_depth, lo, hi);
}

} // namespace stepwell::quad
