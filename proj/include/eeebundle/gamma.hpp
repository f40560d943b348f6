#pragma once

namespace eeebundle {

// Upper incomplete gamma function Gamma(a, x), unnormalized.
// Integer orders up to 170 take an exact finite-sum path; otherwise the
// standard series / continued-fraction split is used with 1e-15 relative
// convergence targets.
double gamma_upper(double a, double x);

// Regularized Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_upper_regularized(double a, double x);

}  // namespace eeebundle
