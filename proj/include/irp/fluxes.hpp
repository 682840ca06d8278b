#pragma once

#include <span>
#include <vector>

#include "irp/discretization.hpp"
#include "irp/model.hpp"

namespace irp {

/// Which states bound the Lax-Friedrichs dissipation sigma at face j+1/2.
enum class SigmaPolicy {
  /// The two traces w^-_{j+1/2}, w^+_{j+1/2}.
  Interface,
  /// Cell averages j-1 .. j+2 (first-order finite volume certificate).
  FirstOrderStencil,
  /// All traces of cells j and j+1, i.e. both sides of faces j-1/2, j+1/2, j+3/2.
  TheoremStencil,
};

struct FluxParams {
  SigmaPolicy sigma_policy = SigmaPolicy::TheoremStencil;
  /// Use one sigma (max over faces) for the whole step instead of per-face values.
  bool global_sigma = true;
  double beta0 = 2.0;
  double beta1 = 0.25;
  double epsilon = 0.0;
};

/// F^(wl, wr) = (F(wl) + F(wr) - sigma (wr - wl)) / 2.
State lax_friedrichs(const PressureLaw& law, const State& wl, const State& wr, double sigma);

/// Maximum wave speed over the stencil. Throws EmptyStencil for an empty span.
double sigma_for_interface(const PressureLaw& law, std::span<const State> stencil);

/// States entering sigma at face (face, face+1) under the policy.
std::vector<State> interface_stencil(const DGField& field, std::size_t face, SigmaPolicy policy);

/// sigma per face, face f sitting between cells f and f+1 (periodic).
std::vector<double> face_sigmas(const PressureLaw& law, const DGField& field, SigmaPolicy policy);

/// Global wave-speed bound max_j max{lambda(w^-_{j+1/2}), lambda(w^+_{j+1/2})}.
double global_sigma(const PressureLaw& law, const DGField& field);

/// Direct-DG numerical derivative at face (face, face+1):
///   beta0 [w]/dx + {w_x} + beta1 dx [w_xx],  [.] = right trace - left trace.
/// The beta1 term vanishes identically for degree < 2.
State ddg_flux(const DGField& field, std::size_t face, const FluxParams& params);

}  // namespace irp
