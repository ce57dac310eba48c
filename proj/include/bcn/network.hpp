#ifndef BCN_NETWORK_HPP
#define BCN_NETWORK_HPP

// Multi-valued control networks in algebraic form
//
//   x(t+1) = L_{u(t)} x(t),    y(t) = H_{u(t)} x(t)
//
// and two-stage cascades in which the upstream output is one factor of the
// downstream input.

#include <optional>
#include <string>
#include <vector>

#include "bcn/stp.hpp"

namespace bcn {

/// Proper control network: one N x N transition block and one P x N output
/// block per input value.
struct Bcn {
  Index n_states = 0;
  Index n_inputs = 0;
  Index n_outputs = 0;
  std::vector<LogicalMatrix> transition;
  std::vector<LogicalMatrix> output;

  const LogicalMatrix& L(Index u) const { return transition.at(u - 1); }
  const LogicalMatrix& H(Index u) const { return output.at(u - 1); }

  /// The stacked matrices [L_1 ... L_M] and [H_1 ... H_M].
  LogicalMatrix transition_matrix() const;
  LogicalMatrix output_matrix() const;

  friend bool operator==(const Bcn&, const Bcn&) = default;
};

/// Builds a Bcn from stacked matrices L (N x NM) and H (P x NM).
Bcn from_stacked(const LogicalMatrix& l, const LogicalMatrix& h);

struct Violation {
  enum class Kind { arity, block_shape, column_range };
  Kind kind;
  std::string matrix;  // "L" or "H"
  Index block = 0;     // 1-based, 0 when not applicable
  Index column = 0;    // 1-based, 0 when not applicable
  std::string message;
};

/// Empty iff the Bcn invariants hold.
std::vector<Violation> validate(const Bcn& b);
/// Throws DimensionError carrying the first violation.
void require_valid(const Bcn& b);

Index step(const Bcn& b, Index x, Index u);
Index output(const Bcn& b, Index x, Index u);
CanonicalVector step(const Bcn& b, const CanonicalVector& x, Index u);
CanonicalVector output(const Bcn& b, const CanonicalVector& x, Index u);

struct BcnTrace {
  std::vector<Index> states;   // x(0), ..., x(T)
  std::vector<Index> outputs;  // y(0), ..., y(T-1)
};

BcnTrace simulate(const Bcn& b, Index x0, const std::vector<Index>& inputs);

struct InputFactor {
  enum class Kind { external, upstream_output };
  Kind kind = Kind::external;
  std::string name;
  Index dim = 0;  // for upstream_output: equals upstream.n_outputs

  static InputFactor external(std::string name, Index dim) {
    return {Kind::external, std::move(name), dim};
  }
  static InputFactor upstream_output(Index dim) { return {Kind::upstream_output, "", dim}; }

  friend bool operator==(const InputFactor&, const InputFactor&) = default;
};

struct Cascade {
  Bcn upstream;
  Bcn downstream;
  std::vector<InputFactor> upstream_inputs;
  std::vector<InputFactor> downstream_inputs;

  friend bool operator==(const Cascade&, const Cascade&) = default;
};

/// Wiring diagnostics; empty iff the cascade and both networks are valid.
std::vector<std::string> validate(const Cascade& c);
void require_valid(const Cascade& c);

/// External channels in input-row order: upstream factors, then the
/// downstream external factors.
std::vector<InputFactor> external_channels(const Cascade& c);
MixedRadixShape external_shape(const Cascade& c);

/// One value per external channel (1-based), in external_channels order.
using InputRow = std::vector<Index>;

Index upstream_input(const Cascade& c, const InputRow& row);
/// Packs the downstream external values of `row` together with the upstream
/// output value in declared factor order.
Index pack_external_inputs(const Cascade& c, const InputRow& row, Index upstream_output);
/// Flat external input index (mixed radix over all channels) and its inverse.
Index pack_row(const Cascade& c, const InputRow& row);
InputRow unpack_row(const Cascade& c, Index k);

struct TraceRow {
  InputRow inputs;
  Index upstream_state = 0;
  Index downstream_state = 0;
  Index upstream_output = 0;
  Index downstream_output = 0;
  std::optional<Index> observed;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// rows[t] holds the values at time t; the final states are those at t = T.
struct Trace {
  std::vector<TraceRow> rows;
  Index final_upstream_state = 0;
  Index final_downstream_state = 0;

  std::vector<Index> downstream_outputs() const;
  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Cold start: every counter at zero.
inline constexpr Index kDefaultInitialState = 1;

Trace simulate_cascade(const Cascade& c, Index x0_up, Index x0_down,
                       const std::vector<InputRow>& inputs);

/// Product-state network with state (x_up, x_down) packed upstream-major
/// and input the flat external index.
Bcn flatten(const Cascade& c);
inline Index pack_state(const Cascade& c, Index x_up, Index x_down) {
  return (x_up - 1) * c.downstream.n_states + x_down;
}

}  // namespace bcn

#endif  // BCN_NETWORK_HPP
