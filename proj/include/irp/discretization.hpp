#pragma once

// Periodic uniform 1-D mesh and the modal DG space on it.
//
// Each cell carries, per component, Legendre coefficients c_0..c_k on the
// reference coordinate xi in [-1, 1]:  w(xi) = sum_m c_m P_m(xi).
// P_0 = 1 and the higher modes have zero mean, so c_0 is the cell average
// and the limiter rescaling only touches c_1..c_k.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irp/model.hpp"

namespace irp {

struct Mesh {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_cells = 1;

  Mesh() = default;
  Mesh(double x_min, double x_max, std::size_t n_cells);

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n_cells); }
  double center(std::size_t j) const { return x_min + (static_cast<double>(j) + 0.5) * dx(); }
  double position(std::size_t j, double xi) const { return center(j) + 0.5 * dx() * xi; }
  std::size_t left(std::size_t j) const { return j == 0 ? n_cells - 1 : j - 1; }
  std::size_t right(std::size_t j) const { return j + 1 == n_cells ? 0 : j + 1; }
  /// Cell containing x (periodic wrap) and the reference coordinate in it.
  std::pair<std::size_t, double> locate(double x) const;
};

/// Per-component polynomial of one cell, in Legendre coefficients.
struct CellPolynomial {
  std::vector<double> c1;
  std::vector<double> c2;

  int degree() const { return static_cast<int>(c1.size()) - 1; }
  State average() const { return {c1[0], c2[0]}; }
  State evaluate(double xi) const;
};

class DGField {
 public:
  DGField() = default;
  DGField(Mesh mesh, int degree);

  const Mesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  std::size_t n_modes() const { return static_cast<std::size_t>(degree_) + 1; }
  std::size_t n_cells() const { return mesh_.n_cells; }

  /// Layout: ((cell * 2 + component) * n_modes + mode).
  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }

  double& coeff(std::size_t cell, int component, std::size_t mode) {
    return coeffs_[(cell * 2 + component) * n_modes() + mode];
  }
  double coeff(std::size_t cell, int component, std::size_t mode) const {
    return coeffs_[(cell * 2 + component) * n_modes() + mode];
  }

  State cell_average(std::size_t j) const { return {coeff(j, 0, 0), coeff(j, 1, 0)}; }
  CellPolynomial cell(std::size_t j) const;
  void set_cell(std::size_t j, const CellPolynomial& poly);

  /// Point value at reference coordinate xi of cell j. xi = +1 / -1 give the
  /// traces w^-_{j+1/2} / w^+_{j-1/2}.
  State evaluate(std::size_t j, double xi) const;
  /// Physical x-derivative of the given order (0, 1, 2) at xi.
  State derivative(std::size_t j, double xi, int order) const;
  /// Point value at a physical coordinate (periodic).
  State evaluate_at(double x) const;

  /// Total of each component over the domain (sum of averages times dx).
  State total() const;

 private:
  Mesh mesh_{};
  int degree_ = 0;
  std::vector<double> coeffs_;
};

using InitialCondition = std::function<State(double)>;

/// Piecewise L2 projection with a (k+3)-point Gauss-Legendre rule per cell.
DGField project_initial(const Mesh& mesh, int degree, const InitialCondition& w0);

/// A convex decomposition of the cell average into point values.
struct DecompositionRule {
  enum class Kind { Lobatto, Interior3 };
  Kind kind = Kind::Lobatto;
  int n = 2;
  double gamma_t = 0.0;

  static DecompositionRule lobatto(int n) { return {Kind::Lobatto, n, 0.0}; }
  static DecompositionRule interior3(double gamma_t) { return {Kind::Interior3, 3, gamma_t}; }
};

struct WeightedPoints {
  std::vector<double> abscissae;
  std::vector<double> weights;
};

/// Abscissae/weights of a rule, validated against the polynomial degree.
WeightedPoints decomposition_points(const DecompositionRule& rule, int degree);

std::vector<std::pair<double, State>> cell_average_decomposition(const DGField& field, std::size_t j,
                                                                 const DecompositionRule& rule);

/// Text checkpoint: header "n_cells degree x_min x_max", one line per cell.
void write_field(std::ostream& os, const DGField& field);
DGField read_field(std::istream& is);

}  // namespace irp
