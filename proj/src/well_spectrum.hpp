#pragma once

#include <vector>

namespace stepwell {

// Barrier corridor geometry and knock-out intensity. The corridor (a, b) is
// the well interior in log-price units; v0 is the step intensity (well depth).
struct WellSpec {
    double a;
    double b;
    double v0;

    WellSpec(double a_, double b_, double v0_);

    double width() const { return b - a; }
    double center() const { return 0.5 * (a + b); }
};

enum class Parity {
    even_function, // cosine inside the well (odd level index n)
    odd_function,  // sine inside the well (even level index n)
};

// One bound state of the finite square well.
//
// a2 is the tail amplitude *at the barrier*, i.e. phi(b) = a2; the textbook
// outside coefficient A2 = a2 * e^{k2 (b-a)/2} overflows double for very deep
// wells, so the evaluator keeps the exponential factored into the tail:
// phi(x) = a2 e^{-k2 (x - b)} for x > b (mirrored, with the parity sign, below a).
struct EigenLevel {
    int n = 0;        // 1-based level index
    double k1 = 0.0;  // inside-well wavenumber
    double k2 = 0.0;  // outside decay wavenumber
    Parity parity = Parity::even_function;
    double a1 = 0.0;  // inside amplitude, sqrt(2 k2 / (k2 (b-a) + 2))
    double a2 = 0.0;  // tail amplitude at the barrier (signed)
};

struct Spectrum {
    WellSpec well;
    double sigma = 0.0;
    double beta = 0.0; // sqrt(2 v0) / sigma, the wavenumber bound
    std::vector<EigenLevel> levels;
};

// beta = sqrt(2 v0)/sigma. Domain error when sigma or v0 is not positive.
double compute_beta(const WellSpec& well, double sigma);

// Number of admissible bound states: floor(beta (b-a)/pi + 1), with levels
// whose root would sit within 1e-12*beta of k = beta excluded (k2 -> 0 gives a
// non-normalizable state).
int count_bound_states(const WellSpec& well, double sigma);

// Solve the level equation k (b-a)/2 + arcsin(k/beta) - n pi/2 = 0 on (0, beta)
// for the n-th level. The function is strictly increasing, so a guaranteed
// bisection bracket is polished by a few Newton steps; the residual of the
// returned root is below 1e-10.
EigenLevel solve_level(const WellSpec& well, double sigma, int n);

// Low-energy approximation beta n pi / (beta (b-a) + 2); no root-finding.
double approx_level_low_energy(const WellSpec& well, double sigma, int n);

// All bound states, strictly increasing in k1.
Spectrum solve_spectrum(const WellSpec& well, double sigma);

// Piecewise eigenfunction evaluation, defined on all real x.
double eval_wavefunction(const EigenLevel& level, const WellSpec& well, double x);

// Residual of the level equation at the level's k1 (diagnostic).
double level_equation_residual(const WellSpec& well, double beta, int n, double k1);

// L2 inner product <phi_m, phi_n> via panel quadrature inside the well plus
// analytic exponential tails. Orthonormality oracle for tests and validation.
double wavefunction_inner_product(const EigenLevel& lm, const EigenLevel& ln,
                                  const WellSpec& well, int panels = 8, int order = 16);

} // namespace stepwell
