// Coefficients <-> grid samples, the resolvent, and the boundary trace check.
#pragma once

#include "curlgs/grid_field.hpp"
#include "curlgs/modes.hpp"
#include "curlgs/state.hpp"

namespace curlgs {

// Sum of coefficient * mode-field at every grid node. Linear in the state.
GridField synthesize(const StateVector& state, const ModeBasis& basis, const GridSpec& grid);

// Quadrature inner products against each basis field. Inverse of synthesize
// up to quadrature tolerance when the grid resolves degree-2 products.
StateVector project(const GridField& field, const ModeBasis& basis);

// Diagonal resolvent (curl curl + 1)^{-1} on the divfree block.
Eigen::VectorXd resolvent_apply(const Eigen::VectorXd& divfree_coeffs, const ModeBasis& basis);

// Max of |nu x E| over face samples for the synthesized state.
double boundary_trace_residual(const StateVector& state, const ModeBasis& basis,
                               int samples_per_face);

}  // namespace curlgs
