#include "curlgs/state.hpp"

#include <string>

#include "curlgs/errors.hpp"

namespace curlgs {

void require_compatible(const StateVector& state, const ModeBasis& basis, const char* operation) {
  if (state.divfree.size() != static_cast<Eigen::Index>(basis.divfree.size()) ||
      state.gradient.size() != static_cast<Eigen::Index>(basis.gradient.size())) {
    throw StructuralError(std::string(operation) + ": state blocks (" +
                          std::to_string(state.divfree.size()) + ", " +
                          std::to_string(state.gradient.size()) +
                          ") do not match basis sizes (" + std::to_string(basis.divfree.size()) +
                          ", " + std::to_string(basis.gradient.size()) + ")");
  }
}

Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& indices) {
  Eigen::VectorXd out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out[i] = full[indices[i]];
  return out;
}

void scatter_add(Eigen::VectorXd& full, const std::vector<int>& indices,
                 const Eigen::VectorXd& values) {
  for (std::size_t i = 0; i < indices.size(); ++i) full[indices[i]] += values[i];
}

}  // namespace curlgs
