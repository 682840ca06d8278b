#include <doctest.h>

#include <cmath>
#include <numeric>

#include "irp/error.hpp"
#include "irp/quadrature.hpp"

using namespace irp;

namespace {

double monomial_integral(int m) { return m % 2 ? 0.0 : 2.0 / (m + 1); }

double apply(const Quadrature& q, int m) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], m);
  return s;
}

}  // namespace

TEST_CASE("gauss-legendre exactness") {
  for (int n = 1; n <= 8; ++n) {
    auto q = gauss_legendre(n);
    REQUIRE(q.size() == static_cast<std::size_t>(n));
    for (double w : q.weights) CHECK(w > 0.0);
    for (int m = 0; m <= 2 * n - 1; ++m) CHECK(std::abs(apply(q, m) - monomial_integral(m)) <= 1e-13);
    CHECK(std::abs(apply(q, 2 * n) - monomial_integral(2 * n)) > 1e-8);
  }
}

TEST_CASE("gauss-lobatto exactness") {
  for (int n = 2; n <= 8; ++n) {
    auto q = gauss_lobatto(n);
    CHECK(q.nodes.front() == -1.0);
    CHECK(q.nodes.back() == 1.0);
    for (double w : q.weights) CHECK(w > 0.0);
    for (int m = 0; m <= 2 * n - 3; ++m) CHECK(std::abs(apply(q, m) - monomial_integral(m)) <= 1e-13);
    auto nw = q.normalized_weights();
    CHECK(std::accumulate(nw.begin(), nw.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nw.front() == doctest::Approx(1.0 / (n * (n - 1))).epsilon(1e-14));
    CHECK(nw.back() == doctest::Approx(1.0 / (n * (n - 1))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gauss_lobatto(1), Error);
}

TEST_CASE("small lobatto rules") {
  auto q2 = gauss_lobatto(2).normalized_weights();
  CHECK(q2[0] == doctest::Approx(0.5));
  CHECK(q2[1] == doctest::Approx(0.5));
  auto q3 = gauss_lobatto(3);
  CHECK(q3.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  auto w3 = q3.normalized_weights();
  CHECK(w3[0] == doctest::Approx(1.0 / 6));
  CHECK(w3[1] == doctest::Approx(2.0 / 3));
  CHECK(w3[2] == doctest::Approx(1.0 / 6));
  CHECK(gauss_lobatto(4).normalized_weights()[0] == doctest::Approx(1.0 / 12));
}

TEST_CASE("legendre polynomials") {
  for (double x : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
    CHECK(legendre(0, x) == 1.0);
    CHECK(legendre(1, x) == x);
    CHECK(legendre(2, x) == doctest::Approx(1.5 * x * x - 0.5));
    CHECK(legendre_derivative(2, x, 1) == doctest::Approx(3 * x));
    CHECK(legendre_derivative(2, x, 2) == doctest::Approx(3.0));
    CHECK(legendre_derivative(1, x, 2) == 0.0);
  }
  auto q = gauss_legendre(6);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * legendre(a, q.nodes[i]) * legendre(b, q.nodes[i]);
      CHECK(std::abs(s - (a == b ? 2.0 / (2 * a + 1) : 0.0)) < 1e-14);
    }
}
