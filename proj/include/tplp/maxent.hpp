#ifndef TPLP_MAXENT_HPP
#define TPLP_MAXENT_HPP

#include <cstddef>
#include <optional>

#include "tplp/psat.hpp"
#include "tplp/world.hpp"

namespace tplp {

struct MaxEntResult {
  WorldDistribution distribution;
  double entropy = 0;  // nats
  Branch branch;
  std::size_t sweeps = 0;
  /// False when the floating-point optimum could not be snapped onto the
  /// polytope and was blended toward an exact LP vertex instead.
  bool exact_projection = true;
};

/// Maximum-entropy distribution over the polytope of one branch. The result
/// satisfies every bound of `c` exactly. Returns nullopt if c is infeasible;
/// throws NonConvergence after opts.max_entropy_iterations sweeps.
std::optional<MaxEntResult> max_entropy_on(const PsatEngine& engine, const BranchConstraints& c);

/// The model of pp with the greatest entropy, taken over every feasible
/// branch. Throws InconsistentProgram and NonConvergence.
MaxEntResult max_entropy_model(const PProgram& pp, const SolveOptions& opts = {});

}  // namespace tplp

#endif
