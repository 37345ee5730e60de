#pragma once

#include <functional>

namespace sepmix::profiles {

// Closed-form separation limit profiles.
double gumbel(double c);            // 1 - e^{-e^{-c}}
double half_poisson(double c);      // 1 - exp(-e^{-c}/2)
double sparse_ktop(double c);       // 1 - e^{-e^{-c}}(1 + e^{-c}) = P[Poisson(e^{-c}) >= 2]
double gaussian_profile(double c);  // 1 - Phi_G(c)

// Cutoff constants of the uniformly driven shuffle, together with the
// independent quadrature / series verification of the two integrals
// mu = int_0^1 log h(u) du and v = int_0^1 (log h(u) - mu)^2 du,
// h(u) = u^2 + (1-u)^2.
struct GaussianWindowConstants {
  double a = 0, b = 0;
  double mu = 0, v = 0;
  double catalan = 0;
  double mu_quadrature = 0, v_quadrature = 0;
  double mu_error = 0, v_error = 0;
};

// Throws numeric_error when a verification mismatch exceeds 1e-8.
GaussianWindowConstants gaussian_window_constants();

// Adaptive bisection with an embedded Gauss 7/15 pair; nodes are generated
// at runtime by Newton iteration on Legendre polynomials.
double adaptive_quadrature(const std::function<double(double)>& f, double lo,
                           double hi, double tol);

// Catalan's constant from its alternating series, accelerated so that the
// requested tolerance is met in far fewer than 10^4 terms.
double catalan_constant();

}  // namespace sepmix::profiles
