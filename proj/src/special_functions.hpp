#pragma once

namespace stepwell {

// Digamma psi(z) for z > 0: recurrence shift above 10, then the asymptotic
// series through the B12 Bernoulli term. Relative error below 1e-12 for
// z >= 1e-3. Throws a domain error for z <= 0.
double digamma(double z);

// Trigamma psi'(z) for z > 0, same shift/series strategy and accuracy.
double trigamma(double z);

} // namespace stepwell
