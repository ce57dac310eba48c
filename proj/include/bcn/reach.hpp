#ifndef BCN_REACH_HPP
#define BCN_REACH_HPP

// Equilibria under constant inputs, global attractivity and attractor
// enumeration on the functional graph of a transition block.

#include <optional>
#include <vector>

#include "bcn/network.hpp"

namespace bcn {

/// States i with L_k delta^i = delta^i, ascending.
std::vector<Index> equilibria(const Bcn& b, Index k);

/// True iff every column of L_k^N equals delta^e. Throws if e is not an
/// equilibrium for k.
bool is_globally_attractive(const Bcn& b, Index k, Index e);

/// Least T <= N with all columns of L_k^T equal, if any.
std::optional<Index> convergence_horizon(const Bcn& b, Index k);

struct Attractor {
  std::vector<Index> cycle;  // starts at its smallest state, follows L_k
  Index basin_size = 0;      // includes the cycle states
};

struct AttractorReport {
  Index input = 0;
  std::vector<Attractor> attractors;  // ordered by smallest cycle state
  std::vector<Index> basin_of;        // basin_of[x-1] = attractor position (0-based)
  std::vector<Index> equilibria;      // states of length-1 cycles
  bool globally_attractive = false;   // a single attractor which is a fixed point

  bool has_limit_cycle() const;
};

/// Cycle/basin decomposition by pointer chasing with visitation marks, O(N).
AttractorReport attractors(const Bcn& b, Index k);

// Two-stage equilibrium tables for a cascade.

struct EquilibriumPair {
  Index upstream = 0;
  Index downstream = 0;
  Index upstream_output = 0;    // the induced constant upstream-output factor
  Index output = 0;             // downstream output at the equilibrium
  bool globally_attractive = false;

  friend bool operator==(const EquilibriumPair&, const EquilibriumPair&) = default;
};

struct EquilibriumRow {
  InputRow inputs;  // constant external values
  std::vector<EquilibriumPair> pairs;
  std::vector<Index> outputs;  // distinct, ascending
};

struct EquilibriumTable {
  std::vector<EquilibriumRow> rows;  // mixed-radix order of the external inputs
};

EquilibriumTable equilibrium_table(const Cascade& c);

/// Rows merged by their constant output set.
struct EquilibriumGroup {
  /// Per external channel: the admitted values, or nullopt if all values
  /// are admitted. Only meaningful when `is_product` is true.
  std::vector<std::optional<std::vector<Index>>> constraints;
  bool is_product = false;
  std::vector<InputRow> inputs;
  std::vector<std::pair<Index, Index>> pairs;  // union over the rows, ascending
  std::vector<Index> outputs;
};

/// Groups in order: cartesian-product groups first, then the rest, each by
/// first occurrence.
std::vector<EquilibriumGroup> group_by_output(const Cascade& c, const EquilibriumTable& t);

/// Per-component equilibria, as in a component-wise analysis of the cascade.
struct ComponentGroup {
  std::vector<Index> inputs;  // upstream: input indices; downstream: relevant-factor combos
  std::vector<Index> equilibria;
  bool globally_attractive = false;
};

struct ComponentTable {
  std::vector<ComponentGroup> upstream;
  /// Positions in downstream_inputs the downstream transition depends on.
  std::vector<std::size_t> relevant_factors;
  std::vector<ComponentGroup> downstream;  // inputs indexed over relevant factors
};

ComponentTable component_table(const Cascade& c);

/// Positions of input factors that change some transition block.
std::vector<std::size_t> transition_relevant_factors(const Bcn& b,
                                                     const std::vector<InputFactor>& factors);

}  // namespace bcn

#endif  // BCN_REACH_HPP
