#include "bcn/avalanche.hpp"

#include <algorithm>
#include <array>

namespace bcn::avalanche {

void check(const Params& p) {
  if (p.ctx_threshold < 1 || p.acc_threshold < 1)
    throw DimensionError("counter thresholds must be at least 1");
}

Alert classify(const Params& p, Index temp, Index snow, Index acc_state, Index acc, Index ctx) {
  if (temp == kLow && snow == kLow) return Alert::normal;
  const bool counter_full = acc_state - 1 >= p.acc_threshold;
  if (temp == kHigh && snow == kHigh && counter_full && acc == kHigh && ctx == kDanger)
    return Alert::alarm;
  return Alert::attention;
}

Bcn build_context(const Params& p) {
  check(p);
  const Index n = p.ctx_threshold + 1;
  Bcn b{n, 4, 2, {}, {}};
  std::vector<Index> out(n, kQuiet);
  out[n - 1] = kDanger;
  for (Index u = 1; u <= 4; ++u) {
    std::vector<Index> next(n);
    for (Index i = 1; i <= n; ++i) {
      if (u == kBothAlerts)
        next[i - 1] = std::min(i + 1, n);
      else if (p.reset_policy == ResetPolicy::decrement)
        next[i - 1] = std::max<Index>(i - 1, 1);
      else
        next[i - 1] = 1;
    }
    b.transition.emplace_back(n, std::move(next));
    b.output.emplace_back(2, out);
  }
  return b;
}

Bcn build_functional(const Params& p) {
  check(p);
  const Index n = p.acc_threshold + 1;
  const MixedRadixShape shape{{2, 2, 2, 2}};
  Bcn b{n, 16, 3, {}, {}};
  for (Index v = 1; v <= 16; ++v) {
    const auto f = decode(delta(16, v), shape);
    std::vector<Index> next(n), out(n);
    for (Index a = 1; a <= n; ++a) {
      next[a - 1] = f[2] == kHigh ? std::min(a + 1, n) : 1;
      out[a - 1] = static_cast<Index>(classify(p, f[0], f[1], a, f[2], f[3]));
    }
    b.transition.emplace_back(n, std::move(next));
    b.output.emplace_back(3, std::move(out));
  }
  return b;
}

Cascade build_cascade(const Params& p) {
  Cascade c;
  c.upstream = build_context(p);
  c.downstream = build_functional(p);
  c.upstream_inputs = {InputFactor::external("u", 4)};
  c.downstream_inputs = {InputFactor::external("v1", 2), InputFactor::external("v2", 2),
                         InputFactor::external("v3", 2), InputFactor::upstream_output(2)};
  return c;
}

const char* to_string(ResetPolicy r) {
  return r == ResetPolicy::decrement ? "decrement" : "reset";
}

const char* alert_name(Index m) {
  static constexpr std::array<const char*, 3> names{"ALARM", "ATTENTION", "NORMAL"};
  return m >= 1 && m <= 3 ? names[m - 1] : "?";
}

}  // namespace bcn::avalanche
