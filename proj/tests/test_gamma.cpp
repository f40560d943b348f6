#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eeebundle/gamma.hpp"

using namespace eeebundle;

TEST_CASE("Gamma(n, 0) equals (n-1)! for integer n") {
    double fact = 1.0;
    for (int n = 1; n <= 20; ++n) {
        if (n > 1) fact *= (n - 1);
        CHECK(gamma_upper(n, 0.0) == doctest::Approx(fact).epsilon(1e-12));
    }
}

TEST_CASE("Gamma(1, x) = e^-x") {
    for (double x : {0.1, 1.0, 5.0, 30.0, 56.0})
        CHECK(gamma_upper(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-13));
}

TEST_CASE("half-integer order against erfc") {
    // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
    for (double x : {0.01, 0.5, 1.0, 4.0, 25.0}) {
        const double expected = std::sqrt(M_PI) * std::erfc(std::sqrt(x));
        CHECK(gamma_upper(0.5, x) == doctest::Approx(expected).epsilon(1e-11));
    }
}

TEST_CASE("recurrence Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x") {
    for (double a : {0.7, 1.0, 2.5, 10.0, 20.0, 63.0}) {
        for (double x : {0.05, 1.0, 7.3, 20.0, 55.0}) {
            const double lhs = gamma_upper(a + 1.0, x);
            const double rhs = a * gamma_upper(a, x) + std::pow(x, a) * std::exp(-x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("regularized value is consistent and bounded") {
    for (double a : {1.0, 3.0, 20.5}) {
        for (double x : {0.2, 2.0, 40.0}) {
            const double q = gamma_upper_regularized(a, x);
            CHECK(q >= 0.0);
            CHECK(q <= 1.0);
            CHECK(q * std::tgamma(a) == doctest::Approx(gamma_upper(a, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(gamma_upper(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_upper(2.0, -1.0), std::invalid_argument);
}
