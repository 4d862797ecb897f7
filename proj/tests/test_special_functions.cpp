#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "special_functions.hpp"

using namespace stepwell;

namespace {

// Independent oracle: plain asymptotic expansion at large z (first four
// correction terms are already ~1e-17 at z >= 60), then exact downward
// recurrence. Deliberately a different code path from the implementation.
double digamma_oracle(double z) {
    double shift = 0.0;
    while (z < 60.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    const double i2 = 1.0 / (z * z);
    return shift + std::log(z) - 0.5 / z -
           i2 * (1.0 / 12.0 - i2 * (1.0 / 120.0 - i2 / 252.0));
}

double trigamma_oracle(double z) {
    double shift = 0.0;
    while (z < 60.0) {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    const double i = 1.0 / z, i2 = i * i;
    return shift + i + 0.5 * i2 + i * i2 * (1.0 / 6.0 - i2 * (1.0 / 30.0 - i2 / 42.0));
}

} // namespace

TEST_CASE("digamma at 1 equals minus the Euler-Mascheroni constant") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
}

TEST_CASE("digamma recurrence step at z=1") {
    CHECK(digamma(2.0) - digamma(1.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("digamma matches the shifted-asymptotic oracle") {
    for (double z : {1e-3, 0.02, 0.5, 1.5, 3.25, 10.5, 42.0, 97.3, 5000.0}) {
        const double want = digamma_oracle(z);
        CHECK(std::abs(digamma(z) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("trigamma known values") {
    const double pi2_6 = M_PI * M_PI / 6.0;
    CHECK(trigamma(1.0) == doctest::Approx(pi2_6).epsilon(1e-13));
    CHECK(trigamma(2.0) == doctest::Approx(pi2_6 - 1.0).epsilon(1e-13));
}

TEST_CASE("trigamma matches the shifted-asymptotic oracle") {
    for (double z : {1e-3, 0.3, 2.5, 10.5, 77.0, 3000.0}) {
        const double want = trigamma_oracle(z);
        CHECK(std::abs(trigamma(z) - want) <= 1e-12 * std::max(1.0, want));
    }
}

TEST_CASE("trigamma finite-sum identity at z=6, N=100") {
    double direct = 0.0;
    for (int j = 0; j < 100; ++j) direct += 1.0 / ((6.0 + j) * (6.0 + j));
    CHECK(std::abs((trigamma(6.0) - trigamma(106.0)) - direct) < 1e-12);
}

TEST_CASE("recurrence identities hold across the domain") {
    std::mt19937_64 gen(20240809);
    std::uniform_real_distribution<double> dist(0.01, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = dist(gen);
        const double scale = std::max(1.0, std::abs(digamma(z)));
        CHECK(std::abs(digamma(z + 1.0) - digamma(z) - 1.0 / z) <= 1e-12 * scale);
        const double tscale = std::max(1.0, trigamma(z));
        CHECK(std::abs(trigamma(z) - trigamma(z + 1.0) - 1.0 / (z * z)) <= 1e-12 * tscale);
    }
}

TEST_CASE("finite-sum identity: sum 1/(z+j) = psi(z+N) - psi(z)") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> zdist(0.05, 50.0);
    std::uniform_int_distribution<int> ndist(1, 500);
    for (int i = 0; i < 200; ++i) {
        const double z = zdist(gen);
        const int n = ndist(gen);
        double direct = 0.0;
        for (int j = 0; j < n; ++j) direct += 1.0 / (z + j);
        CHECK(std::abs(digamma(z + n) - digamma(z) - direct) <=
              1e-11 * std::max(1.0, direct));
    }
}

TEST_CASE("nonpositive arguments are domain errors") {
    CHECK_THROWS_AS(digamma(0.0), Error);
    CHECK_THROWS_AS(digamma(-2.5), Error);
    CHECK_THROWS_AS(trigamma(0.0), Error);
    try {
        digamma(-1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::domain);
    }
}
