#include "irp/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "irp/error.hpp"

namespace irp {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
struct LegendrePair {
  double p;
  double dp;
};

LegendrePair legendre_pair(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  double dp;
  if (std::abs(std::abs(x) - 1.0) < 1e-15) {
    // P_n'(1) = n(n+1)/2, P_n'(-1) = (-1)^(n+1) n(n+1)/2.
    dp = 0.5 * n * (n + 1.0);
    if (x < 0 && n % 2 == 0) dp = -dp;
  } else {
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  }
  return {p1, dp};
}

}  // namespace

std::vector<double> Quadrature::normalized_weights() const {
  std::vector<double> w(weights);
  for (auto& x : w) x *= 0.5;
  return w;
}

double legendre(int m, double xi) { return legendre_pair(m, xi).p; }

double legendre_derivative(int m, double xi, int order) {
  switch (order) {
    case 0: return legendre(m, xi);
    case 1:
      switch (m) {
        case 0: return 0.0;
        case 1: return 1.0;
        case 2: return 3.0 * xi;
        case 3: return 7.5 * xi * xi - 1.5;
        default: return legendre_pair(m, xi).dp;
      }
    case 2:
      switch (m) {
        case 0:
        case 1: return 0.0;
        case 2: return 3.0;
        case 3: return 15.0 * xi;
        default: {
          // (1-x^2) P'' = 2x P' - m(m+1) P, away from the endpoints.
          const auto [p, dp] = legendre_pair(m, xi);
          const double den = 1.0 - xi * xi;
          if (std::abs(den) > 1e-12) return (2.0 * xi * dp - m * (m + 1.0) * p) / den;
          const double end = (m - 1.0) * m * (m + 1.0) * (m + 2.0) / 8.0;
          return xi > 0 ? end : ((m % 2 == 0) ? end : -end);
        }
      }
    default: throw Error(ErrorCode::InvalidOrder, "derivative order " + std::to_string(order));
  }
}

Quadrature gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidOrder, "Gauss-Legendre needs n >= 1");
  Quadrature q{QuadratureKind::GaussLegendre, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_pair(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre_pair(n, x);
    q.nodes[i] = x;
    q.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

Quadrature gauss_lobatto(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidOrder, "Gauss-Lobatto needs n >= 2");
  Quadrature q{QuadratureKind::GaussLobatto, std::vector<double>(n), std::vector<double>(n)};
  const double end_weight = 2.0 / (n * (n - 1.0));
  q.nodes.front() = -1.0;
  q.nodes.back() = 1.0;
  q.weights.front() = q.weights.back() = end_weight;
  // Interior nodes are the roots of P'_{n-1}; Newton on P'_{n-1} with
  // P''_{n-1} from the Legendre ODE.
  const int m = n - 1;
  for (int i = 1; i < n - 1; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_pair(m, x);
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = legendre_pair(m, x).p;
    q.nodes[i] = x;
    q.weights[i] = end_weight / (p * p);
  }
  return q;
}

}  // namespace irp
