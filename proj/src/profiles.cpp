#include <sepmix/profiles.hpp>

#include <sepmix/exact.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace sepmix::profiles {

double gumbel(double c) { return -std::expm1(-std::exp(-c)); }

double half_poisson(double c) { return -std::expm1(-0.5 * std::exp(-c)); }

double sparse_ktop(double c) {
  double u = std::exp(-c);
  return -std::expm1(-u) - u * std::exp(-u);
}

double gaussian_profile(double c) { return 0.5 * std::erfc(c / std::numbers::sqrt2); }

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
template <int N>
struct GaussRule {
  std::array<double, N> node{}, weight{};
  GaussRule() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= N; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      node[i] = -x;
      node[N - 1 - i] = x;
      double w = 2.0 / ((1 - x * x) * dp * dp);
      weight[i] = w;
      weight[N - 1 - i] = w;
    }
  }
};

template <int N>
double gauss_eval(const GaussRule<N>& rule, const std::function<double(double)>& f,
                  double lo, double hi) {
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double total = 0;
  for (int i = 0; i < N; ++i) total += rule.weight[i] * f(mid + half * rule.node[i]);
  return half * total;
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double lo,
                           double hi, double tol) {
  static const GaussRule<7> g7;
  static const GaussRule<15> g15;
  auto rec = [&](auto&& self, double a, double b, double local_tol, int depth) -> double {
    double coarse = gauss_eval(g7, f, a, b);
    double fine = gauss_eval(g15, f, a, b);
    if (std::abs(fine - coarse) <= local_tol) return fine;
    if (depth >= 60) throw numeric_error("adaptive_quadrature: did not converge");
    double mid = 0.5 * (a + b);
    return self(self, a, mid, 0.5 * local_tol, depth + 1) +
           self(self, mid, b, 0.5 * local_tol, depth + 1);
  };
  return rec(rec, lo, hi, tol, 0);
}

double catalan_constant() {
  // Cohen-Villegas-Zagier acceleration of sum (-1)^l / (2l+1)^2.
  constexpr int kTerms = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), kTerms);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < kTerms; ++k) {
    c = b - c;
    s += c / ((2.0 * k + 1) * (2.0 * k + 1));
    b *= (k + kTerms) * (k - kTerms) / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

GaussianWindowConstants gaussian_window_constants() {
  using std::numbers::pi;
  GaussianWindowConstants out;
  out.catalan = catalan_constant();
  out.mu = pi / 2 - 2;
  out.v = 4 + pi * std::log(2.0) - 4 * out.catalan - pi * pi / 4;
  out.a = 4 / (4 - pi);
  out.b = 4 * std::sqrt(out.v) / std::pow(4 - pi, 1.5);

  auto log_h = [](double u) { return std::log(u * u + (1 - u) * (1 - u)); };
  out.mu_quadrature = adaptive_quadrature(log_h, 0.0, 1.0, 1e-10);
  double mu = out.mu;
  out.v_quadrature = adaptive_quadrature(
      [&](double u) {
        double d = log_h(u) - mu;
        return d * d;
      },
      0.0, 1.0, 1e-10);
  out.mu_error = std::abs(out.mu - out.mu_quadrature);
  out.v_error = std::abs(out.v - out.v_quadrature);
  if (out.mu_error > 1e-8 || out.v_error > 1e-8)
    throw numeric_error("gaussian_window_constants: quadrature verification failed");
  return out;
}

}  // namespace sepmix::profiles
