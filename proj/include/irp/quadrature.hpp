#pragma once

#include <vector>

namespace irp {

enum class QuadratureKind { GaussLegendre, GaussLobatto };

/// Quadrature rule on the reference cell [-1, 1]. Weights sum to 2.
struct Quadrature {
  QuadratureKind kind = QuadratureKind::GaussLegendre;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  /// Weights rescaled to sum to 1 (cell-average weights).
  std::vector<double> normalized_weights() const;
};

/// n-point Gauss-Legendre rule, exact to degree 2n-1.
Quadrature gauss_legendre(int n);
/// n-point Gauss-Lobatto rule including both endpoints, exact to degree 2n-3.
Quadrature gauss_lobatto(int n);

/// Legendre polynomial P_m(xi).
double legendre(int m, double xi);
/// d^order/dxi^order P_m(xi) for order in {0, 1, 2}.
double legendre_derivative(int m, double xi, int order);

}  // namespace irp
