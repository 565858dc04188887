// Coefficient representation of a field E = v + grad w: one coefficient per
// divergence-free mode and one per gradient mode, in basis order. The
// plus/tilde/kernel views of the divfree block are defined by a SpaceSplit.
#pragma once

#include <Eigen/Dense>

#include "curlgs/modes.hpp"

namespace curlgs {

struct StateVector {
  Eigen::VectorXd divfree;
  Eigen::VectorXd gradient;

  static StateVector zero(const ModeBasis& basis) {
    return StateVector{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.divfree.size())),
                       Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.gradient.size()))};
  }
};

// Throws StructuralError when the state's block sizes do not match the basis.
void require_compatible(const StateVector& state, const ModeBasis& basis, const char* operation);

// Gather/scatter between a full divfree coefficient vector and an index set.
Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& indices);
void scatter_add(Eigen::VectorXd& full, const std::vector<int>& indices,
                 const Eigen::VectorXd& values);

}  // namespace curlgs
