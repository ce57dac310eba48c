#ifndef BCN_FAULT_HPP
#define BCN_FAULT_HPP

// Stuck-at faults on one stage of a cascade, the input-driven set observer,
// residual-based detection and identification by replaying single-fault
// hypotheses. "context" is the upstream stage, "functional" the downstream.

#include <optional>
#include <vector>

#include "bcn/network.hpp"

namespace bcn {

enum class Component { context, functional };
const char* to_string(Component c);

struct FaultSpec {
  Component component = Component::context;
  Index onset = 0;
  /// nullopt: the stage freezes at its own state at `onset`;
  /// otherwise it is forced to this value from `onset` on.
  std::optional<Index> stuck_value;
};

Trace inject_stuck_fault(const Cascade& c, Index x0_up, Index x0_down,
                         const std::vector<InputRow>& inputs, const FaultSpec& f);

/// Observed outputs contradict every state in an observer set.
class InconsistentObservation : public Error {
 public:
  using Error::Error;
};

struct ObserverState {
  Index time = 0;
  std::vector<Index> context_set;     // ascending, non-empty
  std::vector<Index> functional_set;  // ascending, non-empty
  std::optional<Index> context_exact_from;
  std::optional<Index> functional_exact_from;

  bool exact() const { return context_set.size() == 1 && functional_set.size() == 1; }

  static ObserverState unknown(const Cascade& c);
  static ObserverState known(const Cascade& c, Index x0_up, Index x0_down);
};

/// Maps both sets forward under the known inputs; the functional set is
/// stepped for every context-output value the context set can produce.
/// With `use_outputs`, both sets are first restricted to states consistent
/// with `observed`.
ObserverState observer_step(const Cascade& c, const ObserverState& s, const InputRow& inputs,
                            std::optional<Index> observed = std::nullopt,
                            bool use_outputs = false);

/// Every downstream output reachable from the observer sets, ascending.
std::vector<Index> predict_output(const Cascade& c, const ObserverState& s,
                                  const InputRow& inputs);

struct FaultHypothesis {
  Component component = Component::context;
  Index stuck_value = 0;
  Index onset = 0;

  friend bool operator==(const FaultHypothesis&, const FaultHypothesis&) = default;
};

enum class Identification { context, functional, ambiguous, unmodeled };
const char* to_string(Identification i);

struct DetectionVerdict {
  enum class Status { consistent, fault_detected };
  Status status = Status::consistent;
  std::optional<Index> detection_time;
  std::optional<Index> predicted;  // at detection_time
  std::optional<Index> observed;
  std::optional<Identification> identified;
  std::vector<FaultHypothesis> matching;  // distinct (component, value, onset)
};

struct DetectOptions {
  /// Known initial states; unknown stages start from the full state set.
  std::optional<Index> context_initial;
  std::optional<Index> functional_initial;
};

/// Runs the input-only observer and compares its prediction with the
/// observed output whenever both sets are singletons; the first mismatch is
/// a detection. Identification replays freeze faults on each stage at
/// every onset and initial state.
DetectionVerdict detect(const Cascade& c, const std::vector<InputRow>& inputs,
                        const std::vector<Index>& observed, const DetectOptions& opts = {});

}  // namespace bcn

#endif  // BCN_FAULT_HPP
