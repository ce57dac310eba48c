#include "bcn/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

#include "bcn/avalanche.hpp"
#include "bcn/fault.hpp"
#include "bcn/io.hpp"
#include "bcn/observability.hpp"
#include "bcn/reach.hpp"
#include "bcn/report.hpp"

namespace bcn {
namespace {

// Thrown from subcommand handlers to select an exit code without an error.
struct ExitWith {
  int code;
};

std::string pair_str(StatePair p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

std::string seq_str(const std::vector<Index>& v) {
  std::string s;
  for (Index x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

struct Options {
  // gen avalanche
  avalanche::Params params;
  std::string out_dir;
  // shared
  std::string model, cascade, trace, out;
  Index input = 0;
  bool all = false;
  bool weak = false;
  bool json = false;
  Index max_horizon = 8;
  std::optional<Index> c0, a0;
  // fault
  std::string component;
  Index onset = 0;
  std::optional<Index> value;
};

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

int cmd_gen(const Options& o, std::ostream& out) {
  avalanche::check(o.params);
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  const Cascade c = avalanche::build_cascade(o.params);
  write_file(dir / "context.bcn", print_model(c.upstream));
  write_file(dir / "functional.bcn", print_model(c.downstream));
  write_file(dir / "system.cascade", print_cascade(c, "context.bcn", "functional.bcn"));
  out << "wrote " << (dir / "context.bcn").string() << ", " << (dir / "functional.bcn").string()
      << ", " << (dir / "system.cascade").string() << '\n';
  return kExitOk;
}

void check_input(const Bcn& b, Index k) {
  if (k == 0 || k > b.n_inputs)
    throw DimensionError("input " + std::to_string(k) + " outside [1, " +
                         std::to_string(b.n_inputs) + "]");
}

int cmd_equilibria(const Options& o, std::ostream& out) {
  const Bcn b = load_model(o.model);
  std::vector<Index> ks;
  if (o.all) {
    for (Index k = 1; k <= b.n_inputs; ++k) ks.push_back(k);
  } else {
    check_input(b, o.input);
    ks.push_back(o.input);
  }
  for (Index k : ks) {
    out << "input " << delta_str(k, b.n_inputs) << ":";
    const auto eq = equilibria(b, k);
    if (eq.empty()) out << " none";
    for (Index e : eq) {
      out << ' ' << delta_str(e, b.n_states);
      if (is_globally_attractive(b, k, e)) out << " (globally attractive)";
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_attractors(const Options& o, std::ostream& out) {
  const Bcn b = load_model(o.model);
  check_input(b, o.input);
  const auto rep = attractors(b, o.input);
  for (const auto& a : rep.attractors) {
    out << (a.cycle.size() == 1 ? "fixed point" : "cycle") << " (" << seq_str(a.cycle)
        << ") basin " << a.basin_size << '\n';
  }
  out << (rep.has_limit_cycle() ? "limit cycles present" : "no limit cycles") << '\n';
  return kExitOk;
}

int cmd_observability(const Options& o, std::ostream& out) {
  const Bcn b = load_model(o.model);
  if (o.weak) {
    const auto w = weak_observability(b, o.max_horizon);
    switch (w.verdict) {
      case Verdict::yes:
        out << "weakly observable (every pair separated within " << w.longest << " steps)\n";
        return kExitOk;
      case Verdict::no:
        out << "not weakly observable;";
        break;
      case Verdict::undetermined:
        out << "undetermined at cap " << o.max_horizon << ";";
        break;
    }
    out << " undistinguished pairs:";
    for (auto p : w.undistinguished) out << ' ' << pair_str(p);
    out << '\n';
    return w.verdict == Verdict::undetermined ? kExitUndetermined : kExitOk;
  }
  const auto s = indistinguishable_pairs(b);
  if (s.observable()) {
    out << "observable\n";
    return kExitOk;
  }
  out << "not observable; indistinguishable pairs:";
  for (auto p : s.pairs) out << ' ' << pair_str(p);
  out << '\n';
  if (s.witness) {
    out << "witness " << pair_str(s.witness->pair) << ": inputs " << seq_str(s.witness->inputs)
        << " give outputs " << seq_str(s.witness->outputs) << " from both states\n";
  }
  return kExitOk;
}

int cmd_reconstructibility(const Options& o, std::ostream& out) {
  const Bcn b = o.model.empty() ? flatten(load_cascade(o.cascade)) : load_model(o.model);
  const auto v = is_reconstructible(b, o.max_horizon);
  switch (v.reconstructible) {
    case Verdict::yes:
      out << "reconstructible, horizon ≤ " << *v.horizon << '\n';
      return kExitOk;
    case Verdict::no:
      out << "not reconstructible; confusable pairs:";
      for (auto p : v.confusable) out << ' ' << pair_str(p);
      out << '\n';
      return kExitOk;
    case Verdict::undetermined:
      out << "reconstructible, horizon undetermined at cap " << o.max_horizon << '\n';
      return kExitUndetermined;
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Cascade c = load_cascade(o.cascade);
  const auto in = parse_trace_csv(read_file(o.trace), c);
  Trace tr = simulate_cascade(c, o.c0.value_or(kDefaultInitialState),
                              o.a0.value_or(kDefaultInitialState), in.inputs);
  if (in.observed)
    for (std::size_t t = 0; t < tr.rows.size(); ++t) tr.rows[t].observed = (*in.observed)[t];
  write_or_print(o.out, print_trace_csv(c, tr), out);
  return kExitOk;
}

Component parse_component(const std::string& s) {
  return s == "context" ? Component::context : Component::functional;
}

int cmd_fault_inject(const Options& o, std::ostream& out) {
  const Cascade c = load_cascade(o.cascade);
  const auto in = parse_trace_csv(read_file(o.trace), c);
  const Trace tr = inject_stuck_fault(c, o.c0.value_or(kDefaultInitialState),
                                      o.a0.value_or(kDefaultInitialState), in.inputs,
                                      {parse_component(o.component), o.onset, o.value});
  write_or_print(o.out, print_trace_csv(c, tr), out);
  return kExitOk;
}

int cmd_fault_detect(const Options& o, std::ostream& out) {
  const Cascade c = load_cascade(o.cascade);
  const auto in = parse_trace_csv(read_file(o.trace), c);
  if (!in.observed) throw Error("trace has no observed-output column (m_obs or m)");
  const auto v = detect(c, in.inputs, *in.observed, {o.c0, o.a0});
  if (v.status == DetectionVerdict::Status::consistent) {
    out << "consistent: no fault detected over " << in.inputs.size() << " steps\n";
    return kExitOk;
  }
  out << "fault detected at t=" << *v.detection_time << " (predicted m=" << *v.predicted
      << ", observed m=" << *v.observed << "); component: " << to_string(*v.identified) << '\n';
  for (const auto& h : v.matching) {
    out << "  consistent with " << to_string(h.component) << " frozen at " << h.stuck_value
        << " from t=" << h.onset << '\n';
  }
  return kExitFaultDetected;
}

int cmd_report(const Options& o, std::ostream& out) {
  const Cascade c = load_cascade(o.cascade);
  const auto r = report_json(c, {o.max_horizon});
  if (o.json)
    out << r.dump(2) << '\n';
  else
    out << report_text(r);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis of cascaded multi-valued control networks", "bcnkit"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;
  auto bind = [&](CLI::App* sub, int (*fn)(const Options&, std::ostream&)) {
    sub->callback([&, fn] { action = [&, fn] { return fn(o, out); }; });
  };
  auto model_opt = [&](CLI::App* sub) {
    return sub->add_option("--model", o.model, "model file (.bcn)")->check(CLI::ExistingFile);
  };
  auto cascade_opt = [&](CLI::App* sub) {
    return sub->add_option("--cascade", o.cascade, "cascade file")->check(CLI::ExistingFile);
  };
  auto trace_opt = [&](CLI::App* sub) {
    sub->add_option("--trace", o.trace, "input trace CSV")->required()->check(CLI::ExistingFile);
  };
  auto initial_opts = [&](CLI::App* sub) {
    sub->add_option("--c0", o.c0, "initial context state");
    sub->add_option("--a0", o.a0, "initial functional state");
  };

  auto* gen = app.add_subcommand("gen", "generate model files");
  gen->require_subcommand(1);
  auto* gen_av = gen->add_subcommand("avalanche", "the avalanche alert cascade");
  gen_av->add_option("--ctx-threshold", o.params.ctx_threshold)->check(CLI::PositiveNumber);
  gen_av->add_option("--acc-threshold", o.params.acc_threshold)->check(CLI::PositiveNumber);
  gen_av->add_option("--reset-policy", o.params.reset_policy)
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, avalanche::ResetPolicy>{
              {"reset", avalanche::ResetPolicy::reset_to_zero},
              {"decrement", avalanche::ResetPolicy::decrement}},
          CLI::ignore_case));
  gen_av->add_option("--out", o.out_dir, "output directory")->required();
  bind(gen_av, cmd_gen);

  auto* eq = app.add_subcommand("equilibria", "equilibria under constant inputs");
  model_opt(eq)->required();
  auto* eq_in = eq->add_option("--input", o.input, "input index");
  auto* eq_all = eq->add_flag("--all", o.all, "every input");
  eq_in->excludes(eq_all);
  eq->callback([&] {
    if (eq_in->count() == 0 && !o.all) throw CLI::RequiredError("--input or --all");
    action = [&] { return cmd_equilibria(o, out); };
  });

  auto* at = app.add_subcommand("attractors", "cycles and basins under a constant input");
  model_opt(at)->required();
  at->add_option("--input", o.input, "input index")->required();
  bind(at, cmd_attractors);

  auto* obs = app.add_subcommand("observability", "strong or weak observability");
  model_opt(obs)->required();
  obs->add_flag("--weak", o.weak, "weak observability");
  obs->add_option("--max-horizon", o.max_horizon)->check(CLI::PositiveNumber);
  bind(obs, cmd_observability);

  auto* rec = app.add_subcommand("reconstructibility", "reconstructibility and horizon");
  auto* rec_model = model_opt(rec);
  auto* rec_cascade = cascade_opt(rec);
  rec_model->excludes(rec_cascade);
  rec->add_option("--max-horizon", o.max_horizon)->check(CLI::PositiveNumber);
  rec->callback([&] {
    if (o.model.empty() && o.cascade.empty()) throw CLI::RequiredError("--model or --cascade");
    action = [&] { return cmd_reconstructibility(o, out); };
  });

  auto* sim = app.add_subcommand("simulate", "simulate a cascade on an input trace");
  cascade_opt(sim)->required();
  trace_opt(sim);
  initial_opts(sim);
  sim->add_option("--out", o.out, "output CSV (default: standard output)");
  bind(sim, cmd_simulate);

  auto* fault = app.add_subcommand("fault", "stuck-at faults");
  fault->require_subcommand(1);
  auto* inj = fault->add_subcommand("inject", "simulate with a stuck stage");
  cascade_opt(inj)->required();
  trace_opt(inj);
  initial_opts(inj);
  inj->add_option("--component", o.component)
      ->required()
      ->check(CLI::IsMember({"context", "functional"}));
  inj->add_option("--onset", o.onset)->required();
  inj->add_option("--value", o.value, "forced state (default: freeze)");
  inj->add_option("--out", o.out, "output CSV")->required();
  bind(inj, cmd_fault_inject);
  auto* det = fault->add_subcommand("detect", "residual-based detection on an observed trace");
  cascade_opt(det)->required();
  trace_opt(det);
  initial_opts(det);
  bind(det, cmd_fault_detect);

  auto* rep = app.add_subcommand("report", "equilibrium tables and verdicts");
  cascade_opt(rep)->required();
  rep->add_flag("--json", o.json, "machine-readable output");
  rep->add_option("--max-horizon", o.max_horizon)->check(CLI::PositiveNumber);
  bind(rep, cmd_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  try {
    return action ? action() : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace bcn
