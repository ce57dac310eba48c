#include "bcn/fault.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace bcn {
namespace {

std::vector<Index> iota_set(Index n) {
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{1});
  return v;
}

void check_state(Index x, Index n, const char* what) {
  if (x == 0 || x > n) {
    std::ostringstream os;
    os << what << " " << x << " outside [1, " << n << "]";
    throw DimensionError(os.str());
  }
}

std::vector<Index> sorted_unique(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const char* to_string(Component c) {
  return c == Component::context ? "context" : "functional";
}

const char* to_string(Identification i) {
  switch (i) {
    case Identification::context: return "context";
    case Identification::functional: return "functional";
    case Identification::ambiguous: return "ambiguous";
    case Identification::unmodeled: return "unmodeled";
  }
  return "?";
}

Trace inject_stuck_fault(const Cascade& c, Index x0_up, Index x0_down,
                         const std::vector<InputRow>& inputs, const FaultSpec& f) {
  require_valid(c);
  check_state(x0_up, c.upstream.n_states, "upstream initial state");
  check_state(x0_down, c.downstream.n_states, "downstream initial state");
  const Index n_faulted =
      f.component == Component::context ? c.upstream.n_states : c.downstream.n_states;
  if (f.stuck_value) check_state(*f.stuck_value, n_faulted, "stuck value");

  Trace tr;
  Index xu = x0_up, xd = x0_down;
  Index frozen = 0;
  auto apply_fault = [&](Index t) {
    if (t < f.onset) return;
    Index& x = f.component == Component::context ? xu : xd;
    if (t == f.onset) frozen = f.stuck_value.value_or(x);
    x = frozen;
  };
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    apply_fault(t);
    TraceRow r;
    r.inputs = inputs[t];
    r.upstream_state = xu;
    r.downstream_state = xd;
    const Index uu = upstream_input(c, inputs[t]);
    r.upstream_output = c.upstream.H(uu)(xu);
    const Index ud = pack_external_inputs(c, inputs[t], r.upstream_output);
    r.downstream_output = c.downstream.H(ud)(xd);
    xu = c.upstream.L(uu)(xu);
    xd = c.downstream.L(ud)(xd);
    tr.rows.push_back(std::move(r));
  }
  apply_fault(inputs.size());
  tr.final_upstream_state = xu;
  tr.final_downstream_state = xd;
  return tr;
}

ObserverState ObserverState::unknown(const Cascade& c) {
  ObserverState s;
  s.context_set = iota_set(c.upstream.n_states);
  s.functional_set = iota_set(c.downstream.n_states);
  if (s.context_set.size() == 1) s.context_exact_from = 0;
  if (s.functional_set.size() == 1) s.functional_exact_from = 0;
  return s;
}

ObserverState ObserverState::known(const Cascade& c, Index x0_up, Index x0_down) {
  check_state(x0_up, c.upstream.n_states, "upstream initial state");
  check_state(x0_down, c.downstream.n_states, "downstream initial state");
  return {0, {x0_up}, {x0_down}, 0, 0};
}

ObserverState observer_step(const Cascade& c, const ObserverState& s, const InputRow& inputs,
                            std::optional<Index> observed, bool use_outputs) {
  const Index uu = upstream_input(c, inputs);
  std::vector<Index> ctx = s.context_set;
  std::vector<Index> fun = s.functional_set;

  if (use_outputs && observed) {
    std::set<Index> keep_c, keep_a;
    for (Index ci : ctx) {
      const Index ud = pack_external_inputs(c, inputs, c.upstream.H(uu)(ci));
      for (Index ai : fun) {
        if (c.downstream.H(ud)(ai) == *observed) {
          keep_c.insert(ci);
          keep_a.insert(ai);
        }
      }
    }
    if (keep_c.empty()) {
      std::ostringstream os;
      os << "t=" << s.time << ": observed output " << *observed
         << " is not produced by any state in the observer sets";
      throw InconsistentObservation(os.str());
    }
    ctx.assign(keep_c.begin(), keep_c.end());
    fun.assign(keep_a.begin(), keep_a.end());
  }

  ObserverState n;
  n.time = s.time + 1;
  std::vector<Index> nc, na;
  std::set<Index> v4;
  for (Index ci : ctx) {
    nc.push_back(c.upstream.L(uu)(ci));
    v4.insert(c.upstream.H(uu)(ci));
  }
  for (Index y : v4) {
    const Index ud = pack_external_inputs(c, inputs, y);
    for (Index ai : fun) na.push_back(c.downstream.L(ud)(ai));
  }
  n.context_set = sorted_unique(std::move(nc));
  n.functional_set = sorted_unique(std::move(na));

  auto exact_from = [&](const std::vector<Index>& set, std::optional<Index> prev) {
    if (set.size() != 1) return std::optional<Index>{};
    return prev ? prev : std::optional<Index>{n.time};
  };
  n.context_exact_from = exact_from(n.context_set, s.context_exact_from);
  n.functional_exact_from = exact_from(n.functional_set, s.functional_exact_from);
  return n;
}

std::vector<Index> predict_output(const Cascade& c, const ObserverState& s,
                                  const InputRow& inputs) {
  const Index uu = upstream_input(c, inputs);
  std::set<Index> out;
  for (Index ci : s.context_set) {
    const Index ud = pack_external_inputs(c, inputs, c.upstream.H(uu)(ci));
    for (Index ai : s.functional_set) out.insert(c.downstream.H(ud)(ai));
  }
  return {out.begin(), out.end()};
}

DetectionVerdict detect(const Cascade& c, const std::vector<InputRow>& inputs,
                        const std::vector<Index>& observed, const DetectOptions& opts) {
  require_valid(c);
  if (inputs.size() != observed.size())
    throw DimensionError("input and observed-output sequences differ in length");

  ObserverState s = ObserverState::unknown(c);
  if (opts.context_initial) {
    check_state(*opts.context_initial, c.upstream.n_states, "context initial state");
    s.context_set = {*opts.context_initial};
    s.context_exact_from = 0;
  }
  if (opts.functional_initial) {
    check_state(*opts.functional_initial, c.downstream.n_states, "functional initial state");
    s.functional_set = {*opts.functional_initial};
    s.functional_exact_from = 0;
  }

  DetectionVerdict v;
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    if (s.exact()) {
      const auto pred = predict_output(c, s, inputs[t]);
      if (pred.front() != observed[t]) {
        v.status = DetectionVerdict::Status::fault_detected;
        v.detection_time = t;
        v.predicted = pred.front();
        v.observed = observed[t];
        break;
      }
    }
    s = observer_step(c, s, inputs[t]);
  }
  if (v.status == DetectionVerdict::Status::consistent) return v;

  const auto initial = [&](std::optional<Index> known, Index n) {
    return known ? std::vector<Index>{*known} : iota_set(n);
  };
  const auto c0s = initial(opts.context_initial, c.upstream.n_states);
  const auto a0s = initial(opts.functional_initial, c.downstream.n_states);
  bool ctx = false, fun = false;
  for (Component comp : {Component::context, Component::functional}) {
    for (Index onset = 0; onset < inputs.size(); ++onset) {
      for (Index c0 : c0s) {
        for (Index a0 : a0s) {
          const Trace tr = inject_stuck_fault(c, c0, a0, inputs, {comp, onset, std::nullopt});
          if (tr.downstream_outputs() != observed) continue;
          const auto& row = tr.rows[onset];
          FaultHypothesis h{comp,
                            comp == Component::context ? row.upstream_state
                                                       : row.downstream_state,
                            onset};
          if (std::find(v.matching.begin(), v.matching.end(), h) == v.matching.end())
            v.matching.push_back(h);
          (comp == Component::context ? ctx : fun) = true;
        }
      }
    }
  }
  v.identified = ctx && fun ? Identification::ambiguous
                 : ctx      ? Identification::context
                 : fun      ? Identification::functional
                            : Identification::unmodeled;
  return v;
}

}  // namespace bcn
