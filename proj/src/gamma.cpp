#include "eeebundle/gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eeebundle {

namespace {

constexpr double kRelTol = 1e-15;
constexpr int kMaxIter = 1000;

bool is_small_integer(double a) {
    return a == std::floor(a) && a >= 1.0 && a <= 170.0;
}

// Gamma(n, x) = (n-1)! e^{-x} sum_{k=0}^{n-1} x^k / k!  (all terms positive)
double upper_integer(int n, double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < n; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::tgamma(static_cast<double>(n)) * std::exp(-x) * sum;
}

// Regularized lower P(a, x) by series, valid for x < a + 1.
double lower_regularized_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kRelTol)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_upper: series failed to converge");
}

// Regularized upper Q(a, x) by modified Lentz continued fraction, x >= a + 1.
double upper_regularized_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kRelTol;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kRelTol)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_upper: continued fraction failed to converge");
}

}  // namespace

double gamma_upper_regularized(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_upper: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_upper: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (is_small_integer(a))
        return upper_integer(static_cast<int>(a), x) / std::tgamma(a);
    if (x < a + 1.0) return 1.0 - lower_regularized_series(a, x);
    return upper_regularized_cf(a, x);
}

double gamma_upper(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_upper: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_upper: x must be >= 0");
    if (x == 0.0) return std::tgamma(a);
    if (is_small_integer(a)) return upper_integer(static_cast<int>(a), x);
    if (x < a + 1.0) return (1.0 - lower_regularized_series(a, x)) * std::tgamma(a);
    return upper_regularized_cf(a, x) * std::tgamma(a);
}

}  // namespace eeebundle
