#include "irp/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "irp/quadrature.hpp"

namespace irp {

Mesh::Mesh(double x_min_, double x_max_, std::size_t n_cells_)
    : x_min(x_min_), x_max(x_max_), n_cells(n_cells_) {
  if (!(x_max > x_min)) throw Error(ErrorCode::InvalidConfig, "mesh needs x_max > x_min");
  if (n_cells == 0) throw Error(ErrorCode::InvalidConfig, "mesh needs at least one cell");
}

std::pair<std::size_t, double> Mesh::locate(double x) const {
  double t = std::fmod(x - x_min, length());
  if (t < 0) t += length();
  auto j = static_cast<std::size_t>(t / dx());
  if (j >= n_cells) j = n_cells - 1;
  const double xi = std::clamp(2.0 * (t - (static_cast<double>(j) + 0.5) * dx()) / dx(), -1.0, 1.0);
  return {j, xi};
}

State CellPolynomial::evaluate(double xi) const {
  State w{};
  for (std::size_t m = 0; m < c1.size(); ++m) {
    const double p = legendre(static_cast<int>(m), xi);
    w.c1 += c1[m] * p;
    w.c2 += c2[m] * p;
  }
  return w;
}

DGField::DGField(Mesh mesh, int degree) : mesh_(mesh), degree_(degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidOrder, "negative degree");
  coeffs_.assign(mesh_.n_cells * 2 * n_modes(), 0.0);
}

CellPolynomial DGField::cell(std::size_t j) const {
  CellPolynomial p{std::vector<double>(n_modes()), std::vector<double>(n_modes())};
  for (std::size_t m = 0; m < n_modes(); ++m) {
    p.c1[m] = coeff(j, 0, m);
    p.c2[m] = coeff(j, 1, m);
  }
  return p;
}

void DGField::set_cell(std::size_t j, const CellPolynomial& poly) {
  for (std::size_t m = 0; m < n_modes(); ++m) {
    coeff(j, 0, m) = poly.c1[m];
    coeff(j, 1, m) = poly.c2[m];
  }
}

State DGField::evaluate(std::size_t j, double xi) const {
  if (!(xi >= -1.0 && xi <= 1.0)) throw Error(ErrorCode::XiOutOfRange, "xi = " + std::to_string(xi));
  return derivative(j, xi, 0);
}

State DGField::derivative(std::size_t j, double xi, int order) const {
  const double scale = std::pow(2.0 / mesh_.dx(), order);
  State w{};
  for (std::size_t m = 0; m < n_modes(); ++m) {
    const double p = legendre_derivative(static_cast<int>(m), xi, order);
    w.c1 += coeff(j, 0, m) * p;
    w.c2 += coeff(j, 1, m) * p;
  }
  return scale * w;
}

State DGField::evaluate_at(double x) const {
  const auto [j, xi] = mesh_.locate(x);
  return evaluate(j, xi);
}

State DGField::total() const {
  State sum{};
  for (std::size_t j = 0; j < n_cells(); ++j) sum += cell_average(j);
  return mesh_.dx() * sum;
}

DGField project_initial(const Mesh& mesh, int degree, const InitialCondition& w0) {
  DGField field(mesh, degree);
  const Quadrature q = gauss_legendre(degree + 3);
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      const State w = w0(mesh.position(j, q.nodes[i]));
      for (int m = 0; m <= degree; ++m) {
        const double f = 0.5 * (2.0 * m + 1.0) * q.weights[i] * legendre(m, q.nodes[i]);
        field.coeff(j, 0, m) += f * w.c1;
        field.coeff(j, 1, m) += f * w.c2;
      }
    }
  }
  return field;
}

WeightedPoints decomposition_points(const DecompositionRule& rule, int degree) {
  if (rule.kind == DecompositionRule::Kind::Lobatto) {
    if (rule.n < 2 || 2 * rule.n - 3 < degree) {
      throw Error(ErrorCode::InvalidDecomposition,
                  "Lobatto(" + std::to_string(rule.n) + ") is not exact for degree " + std::to_string(degree));
    }
    const Quadrature q = gauss_lobatto(rule.n);
    return {q.nodes, q.normalized_weights()};
  }
  const double g = rule.gamma_t;
  if (degree > 2 || std::abs(g) > 1.0 / 3.0 + 1e-15) {
    throw Error(ErrorCode::InvalidDecomposition,
                "Interior3 needs degree <= 2 and |gamma_t| <= 1/3, got gamma_t = " + std::to_string(g));
  }
  return {{-1.0, g, 1.0},
          {(1.0 + 3.0 * g) / (6.0 * (1.0 + g)), 2.0 / (3.0 * (1.0 - g * g)),
           (1.0 - 3.0 * g) / (6.0 * (1.0 - g))}};
}

std::vector<std::pair<double, State>> cell_average_decomposition(const DGField& field, std::size_t j,
                                                                 const DecompositionRule& rule) {
  const WeightedPoints pts = decomposition_points(rule, field.degree());
  std::vector<std::pair<double, State>> out;
  out.reserve(pts.abscissae.size());
  for (std::size_t i = 0; i < pts.abscissae.size(); ++i) {
    out.emplace_back(pts.weights[i], field.evaluate(j, pts.abscissae[i]));
  }
  return out;
}

void write_field(std::ostream& os, const DGField& field) {
  char buf[64];
  const Mesh& mesh = field.mesh();
  std::snprintf(buf, sizeof buf, "%.17g", mesh.x_min);
  os << mesh.n_cells << ' ' << field.degree() << ' ' << buf;
  std::snprintf(buf, sizeof buf, "%.17g", mesh.x_max);
  os << ' ' << buf << '\n';
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    for (int c = 0; c < 2; ++c) {
      for (std::size_t m = 0; m < field.n_modes(); ++m) {
        std::snprintf(buf, sizeof buf, "%.17g", field.coeff(j, c, m));
        os << (c == 0 && m == 0 ? "" : " ") << buf;
      }
    }
    os << '\n';
  }
}

DGField read_field(std::istream& is) {
  std::size_t n_cells = 0;
  int degree = 0;
  double x_min = 0, x_max = 0;
  if (!(is >> n_cells >> degree >> x_min >> x_max)) throw Error(ErrorCode::Io, "bad field header");
  DGField field(Mesh(x_min, x_max, n_cells), degree);
  for (auto& c : field.coeffs()) {
    if (!(is >> c)) throw Error(ErrorCode::Io, "truncated field body");
  }
  return field;
}

}  // namespace irp
