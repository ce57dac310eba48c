#ifndef BCN_OBSERVABILITY_HPP
#define BCN_OBSERVABILITY_HPP

// Observability (strong and weak) and reconstructibility of proper control
// networks, with brute-force enumeration oracles.
//
// Strong observability quantifies over every input sequence: the network is
// observable iff no pair of distinct initial states admits an infinite input
// sequence producing equal outputs. Weak observability only asks for some
// distinguishing input sequence per pair. The observer refines by the
// current output before stepping, since y(t) depends on u(t).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcn/network.hpp"

namespace bcn {

/// Unordered state pair, canonicalized as (min, max).
using StatePair = std::pair<Index, Index>;
inline StatePair make_pair_canonical(Index a, Index b) {
  return a < b ? StatePair{a, b} : StatePair{b, a};
}

enum class Verdict { yes, no, undetermined };
const char* to_string(Verdict v);

/// An input sequence under which two initial states produce the same outputs.
struct Witness {
  StatePair pair;
  std::vector<Index> inputs;
  std::vector<Index> outputs;
};

struct IndistinguishabilityResult {
  std::vector<StatePair> pairs;  // ascending
  std::optional<Witness> witness;

  bool observable() const { return pairs.empty(); }
  bool contains(StatePair p) const;
};

/// Greatest set S of pairs {i, j} such that some input keeps the outputs
/// equal and maps the pair into S or onto one state. The witness is built
/// for the smallest pair in S.
IndistinguishabilityResult indistinguishable_pairs(const Bcn& b, Index witness_length = 12);

/// Input sequence of `length` keeping the outputs from `pair` equal, taken
/// from the given indistinguishable set. Constant inputs are tried first,
/// `preferred` before the others.
std::optional<Witness> confusing_witness(const Bcn& b, const IndistinguishabilityResult& s,
                                         StatePair pair, Index length,
                                         std::optional<Index> preferred = std::nullopt);

/// Constant inputs u for which u, u, u, ... never separates the pair.
std::vector<Index> confusing_constant_inputs(const Bcn& b, StatePair pair);

struct WeakObservability {
  Verdict verdict = Verdict::undetermined;
  std::vector<StatePair> undistinguished;  // pairs not separated within the cap
  Index longest = 0;                       // longest shortest-distinguishing length found
};

/// Least fixpoint over pairs, bounded by `max_horizon` sequence length.
WeakObservability weak_observability(const Bcn& b, Index max_horizon);

struct ReconstructibilityVerdict {
  Verdict reconstructible = Verdict::undetermined;
  std::optional<Index> horizon;
  std::vector<StatePair> confusable;  // greatest set S' witnessing failure
  std::size_t nodes = 0;              // uncertainty sets expanded
  std::vector<std::pair<Index, Index>> slowest;  // longest (input, output) history left ambiguous
  std::string certificate;
};

/// Greatest-fixpoint test plus a breadth-first search over uncertainty sets
/// for the least horizon, bounded by `max_horizon` and `node_budget`.
ReconstructibilityVerdict is_reconstructible(const Bcn& b, Index max_horizon,
                                             std::size_t node_budget = 1u << 20);

// Oracles. Plain enumeration of input sequences; failures are memoized per
// (pair, remaining length), which does not change the outcome.

/// Shortest input sequence (length <= max_len) whose outputs from i and j
/// differ, lexicographically first among the shortest.
std::optional<std::vector<Index>> brute_force_distinguish(const Bcn& b, Index i, Index j,
                                                          Index max_len);

/// An input sequence of exactly `len` steps with equal outputs from i and j.
std::optional<std::vector<Index>> brute_force_confuse(const Bcn& b, Index i, Index j,
                                                      Index len);

/// For every input sequence of length T and every consistent output
/// sequence, all matching initial states end in the same state. Enumerates
/// sequences while tracking each initial state separately.
bool brute_force_reconstructible_at(const Bcn& b, Index horizon);

/// Least T <= max_horizon with brute_force_reconstructible_at(b, T).
std::optional<Index> brute_force_horizon(const Bcn& b, Index max_horizon);

}  // namespace bcn

#endif  // BCN_OBSERVABILITY_HPP
