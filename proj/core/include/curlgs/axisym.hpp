#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "curlgs/grid_field.hpp"
#include "curlgs/nehari.hpp"
#include "curlgs/nonlinearity.hpp"

namespace curlgs {

// Meridian rectangle (0,R) x (0,H) for the azimuthal ansatz
// E(x) = alpha(r, x3) (-x2, x1, 0). Nodes are cell-centered in r
// (r_i = (i+1/2) dr, none on the axis) and vertex-centered in z; alpha
// vanishes at r = R and z in {0, H}, so the unknowns are the nr*(nz-1)
// nodes with j = 1..nz-1. No condition is imposed at the axis.
struct MeridianGrid {
  double radius = 0.0;
  double height = 0.0;
  int nr = 0;
  int nz = 0;

  double dr() const { return radius / nr; }
  double dz() const { return height / nz; }
  double r(int i) const { return (i + 0.5) * dr(); }
  double z(int j) const { return j * dz(); }
  int unknowns() const { return nr * (nz - 1); }
  int index(int i, int j) const { return (j - 1) * nr + i; }
};

MeridianGrid make_meridian_grid(const CylinderDomain& domain, int nr, int nz);

// Discrete profile over the meridian unknowns, MeridianGrid::index order.
struct AxisymState {
  Eigen::VectorXd alpha;

  static AxisymState zero(const MeridianGrid& grid) {
    return AxisymState{Eigen::VectorXd::Zero(grid.unknowns())};
  }
};

// Parity sector with respect to the reflection z -> H - z.
enum class Sector { all, even_z, odd_z };

// Prebuilt operators of the reduced energy
//   J(alpha) = 1/2 alpha' quad alpha - sum_ij weight_ij F(x_ij, r_i |alpha_ij|)
// where quad collects the curl terms and lambda times the r^2-weighted mass,
// all scaled by the azimuthal factor 2 pi. Building the context requires a
// nonlinearity that is radial in u and whose coefficients are axisymmetric.
struct AxisymContext {
  MeridianGrid grid;
  double lambda = 0.0;
  NonlinearitySpec nonlinearity;
  Eigen::SparseMatrix<double> quad;
  Eigen::VectorXd weight;      // 2 pi r_i dr dz per unknown
  Eigen::VectorXd radius_at;   // r_i per unknown
  std::vector<Vec3> node_x;    // (r_i, 0, z_j) per unknown
  bool gamma_z_symmetric = false;
};

AxisymContext make_axisym_context(const MeridianGrid& grid, double lambda,
                                  NonlinearitySpec nonlinearity);

// Reduced energy of a profile and its exact discrete gradient.
double reduced_energy(const AxisymState& state, const AxisymContext& ctx);
AxisymState reduced_gradient(const AxisymState& state,
                             const AxisymContext& ctx);

// Result of one sector-constrained ground-state solve.
struct SectorReport {
  Sector sector = Sector::all;
  double value = 0.0;
  AxisymState state;
  double outer_residual = 0.0;
  std::vector<PsRecord> ps_history;
  double multistart_spread = 0.0;
  double el_residual = 0.0;
  int converged_restarts = 0;
  std::vector<std::string> warnings;
};

// Sector ground state by the classical Nehari reduction: every direction on
// the unit sphere of the quadratic norm is scaled onto the constraint set by
// the 1D ray equation, and the reduced value is minimized by multistart
// Riemannian descent in the quadratic metric. Requires the quadratic form to
// be positive definite on the sector; parity sectors additionally require
// z-symmetric coefficients.
SectorReport solve_symmetric(const AxisymContext& ctx, Sector sector,
                             const SolverConfig& cfg);

// Bilinear interpolation of the profile at meridian coordinates (r, z):
// even across the axis, linear to zero at the wall and caps, zero outside.
double profile_at(const AxisymState& state, const MeridianGrid& grid, double r,
                  double z);

// Samples E(x) = alpha(r, x3) (-x2, x1, 0) at the nodes of grid3d. The
// cylinder axis runs through the midpoint of the grid's node range in x1 and
// x2; points outside the cylinder get zero.
GridField lift_to_3d(const AxisymState& state, const MeridianGrid& grid,
                     const GridSpec& grid3d);

}  // namespace curlgs
