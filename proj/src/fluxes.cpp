#include "irp/fluxes.hpp"

#include <algorithm>

namespace irp {

State lax_friedrichs(const PressureLaw& law, const State& wl, const State& wr, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::DegenerateSigma, "negative sigma");
  return 0.5 * (physical_flux(law, wl) + physical_flux(law, wr) - sigma * (wr - wl));
}

double sigma_for_interface(const PressureLaw& law, std::span<const State> stencil) {
  if (stencil.empty()) throw Error(ErrorCode::EmptyStencil, "sigma needs at least one state");
  double sigma = 0.0;
  for (const auto& w : stencil) sigma = std::max(sigma, wave_speed(law, w));
  return sigma;
}

std::vector<State> interface_stencil(const DGField& field, std::size_t face, SigmaPolicy policy) {
  const Mesh& mesh = field.mesh();
  const std::size_t jl = face;
  const std::size_t jr = mesh.right(face);
  switch (policy) {
    case SigmaPolicy::Interface:
      return {field.evaluate(jl, 1.0), field.evaluate(jr, -1.0)};
    case SigmaPolicy::FirstOrderStencil:
      return {field.cell_average(mesh.left(jl)), field.cell_average(jl), field.cell_average(jr),
              field.cell_average(mesh.right(jr))};
    case SigmaPolicy::TheoremStencil:
      return {field.evaluate(mesh.left(jl), 1.0), field.evaluate(jl, -1.0), field.evaluate(jl, 1.0),
              field.evaluate(jr, -1.0),           field.evaluate(jr, 1.0),  field.evaluate(mesh.right(jr), -1.0)};
  }
  return {};
}

std::vector<double> face_sigmas(const PressureLaw& law, const DGField& field, SigmaPolicy policy) {
  std::vector<double> out(field.n_cells());
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = sigma_for_interface(law, interface_stencil(field, f, policy));
  return out;
}

double global_sigma(const PressureLaw& law, const DGField& field) {
  double sigma = 0.0;
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    sigma = std::max({sigma, wave_speed(law, field.evaluate(j, -1.0)), wave_speed(law, field.evaluate(j, 1.0))});
  }
  return sigma;
}

State ddg_flux(const DGField& field, std::size_t face, const FluxParams& params) {
  const double dx = field.mesh().dx();
  const std::size_t jl = face;
  const std::size_t jr = field.mesh().right(face);
  const State jump = field.evaluate(jr, -1.0) - field.evaluate(jl, 1.0);
  State out = (params.beta0 / dx) * jump;
  if (field.degree() >= 1) out += 0.5 * (field.derivative(jl, 1.0, 1) + field.derivative(jr, -1.0, 1));
  if (field.degree() >= 2) {
    out += (params.beta1 * dx) * (field.derivative(jr, -1.0, 2) - field.derivative(jl, 1.0, 2));
  }
  return out;
}

}  // namespace irp
