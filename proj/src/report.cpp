#include "bcn/report.hpp"

#include <sstream>

#include "bcn/observability.hpp"
#include "bcn/reach.hpp"

namespace bcn {
namespace {

using nlohmann::ordered_json;

std::string factor_name(const InputFactor& f) {
  return f.kind == InputFactor::Kind::upstream_output ? "upstream_output" : f.name;
}

ordered_json dims(const Bcn& b) {
  return ordered_json{{"N", b.n_states}, {"M", b.n_inputs}, {"P", b.n_outputs}};
}

ordered_json observability_json(const Bcn& b, Index max_horizon) {
  const auto s = indistinguishable_pairs(b);
  ordered_json pairs = ordered_json::array();
  for (auto [i, j] : s.pairs) pairs.push_back({i, j});
  ordered_json witness = nullptr;
  if (s.witness) {
    witness = ordered_json{{"pair", {s.witness->pair.first, s.witness->pair.second}},
                           {"inputs", s.witness->inputs},
                           {"outputs", s.witness->outputs}};
  }
  const auto weak = weak_observability(b, max_horizon);
  ordered_json undist = ordered_json::array();
  for (auto [i, j] : weak.undistinguished) undist.push_back({i, j});
  return ordered_json{{"observable", s.observable()},
                      {"indistinguishable_pairs", pairs},
                      {"witness", witness},
                      {"weakly_observable", to_string(weak.verdict)},
                      {"longest_distinguishing_sequence", weak.longest},
                      {"undistinguished_pairs", undist}};
}

ordered_json reconstructibility_json(const Bcn& b, Index max_horizon) {
  const auto v = is_reconstructible(b, max_horizon);
  return ordered_json{{"verdict", to_string(v.reconstructible)},
                      {"horizon", v.horizon ? ordered_json(*v.horizon) : ordered_json(nullptr)},
                      {"certificate", v.certificate}};
}

}  // namespace

std::string delta_str(Index i, Index n) {
  std::ostringstream os;
  os << "δ^" << i << "_" << n;
  return os.str();
}

ordered_json report_json(const Cascade& c, const ReportOptions& opts) {
  require_valid(c);
  const Bcn flat = flatten(c);
  const auto channels = external_channels(c);

  ordered_json r;
  r["format_version"] = kReportFormatVersion;
  r["models"] = {{"upstream", dims(c.upstream)},
                 {"downstream", dims(c.downstream)},
                 {"flattened", dims(flat)}};
  ordered_json chans = ordered_json::array();
  for (const auto& ch : channels) chans.push_back({{"name", ch.name}, {"dim", ch.dim}});
  r["channels"] = chans;

  // Component-wise equilibria.
  const auto ct = component_table(c);
  ordered_json up = ordered_json::array();
  for (const auto& g : ct.upstream)
    up.push_back({{"inputs", g.inputs},
                  {"equilibria", g.equilibria},
                  {"globally_attractive", g.globally_attractive}});
  MixedRadixShape rel;
  ordered_json rel_names = ordered_json::array();
  for (auto f : ct.relevant_factors) {
    rel.dims.push_back(c.downstream_inputs[f].dim);
    rel_names.push_back(factor_name(c.downstream_inputs[f]));
  }
  ordered_json down = ordered_json::array();
  for (const auto& g : ct.downstream) {
    ordered_json values = ordered_json::array();
    for (Index combo : g.inputs)
      values.push_back(rel.dims.empty() ? std::vector<Index>{}
                                        : decode(delta(rel.size(), combo), rel));
    down.push_back({{"values", values},
                    {"equilibria", g.equilibria},
                    {"globally_attractive", g.globally_attractive}});
  }
  ordered_json rows = ordered_json::array();
  for (std::size_t a = 0; a < ct.upstream.size(); ++a)
    for (std::size_t b = 0; b < ct.downstream.size(); ++b)
      rows.push_back({{"upstream_group", a},
                      {"downstream_group", b},
                      {"upstream_equilibria", ct.upstream[a].equilibria},
                      {"downstream_equilibria", ct.downstream[b].equilibria}});
  r["component_equilibria"] = {
      {"upstream", up},
      {"downstream", {{"relevant_factors", rel_names}, {"groups", down}}},
      {"rows", rows}};

  // Combined table.
  const auto table = equilibrium_table(c);
  ordered_json combined = ordered_json::array();
  for (const auto& g : group_by_output(c, table)) {
    ordered_json constraint = nullptr;
    if (g.is_product) {
      constraint = ordered_json::object();
      for (std::size_t ch = 0; ch < channels.size(); ++ch)
        constraint[channels[ch].name] =
            g.constraints[ch] ? ordered_json(*g.constraints[ch]) : ordered_json("*");
    }
    ordered_json pairs = ordered_json::array();
    for (auto [x, y] : g.pairs) pairs.push_back({x, y});
    combined.push_back({{"constant_input", constraint},
                        {"input_count", g.inputs.size()},
                        {"equilibria", pairs},
                        {"outputs", g.outputs}});
  }
  r["combined_table"] = combined;

  // Attractors of the flattened network under every constant input.
  ordered_json cyc_inputs = ordered_json::array();
  std::size_t longest = 0;
  for (Index k = 1; k <= flat.n_inputs; ++k) {
    const auto rep = attractors(flat, k);
    for (const auto& a : rep.attractors) longest = std::max(longest, a.cycle.size());
    if (rep.has_limit_cycle()) cyc_inputs.push_back(k);
  }
  r["limit_cycles"] = {{"inputs_checked", flat.n_inputs},
                       {"longest_cycle", longest},
                       {"inputs_with_limit_cycles", cyc_inputs}};

  r["observability"] = {{"upstream", observability_json(c.upstream, opts.max_horizon)},
                        {"downstream", observability_json(c.downstream, opts.max_horizon)},
                        {"flattened", observability_json(flat, opts.max_horizon)}};
  r["reconstructibility"] = {
      {"upstream", reconstructibility_json(c.upstream, opts.max_horizon)},
      {"downstream", reconstructibility_json(c.downstream, opts.max_horizon)},
      {"flattened", reconstructibility_json(flat, opts.max_horizon)}};
  return r;
}

std::string report_text(const ordered_json& r) {
  std::ostringstream os;
  const auto& models = r["models"];
  auto model_line = [&](const char* name) {
    const auto& m = models[name];
    os << "  " << name << ": N=" << m["N"].get<Index>() << " M=" << m["M"].get<Index>()
       << " P=" << m["P"].get<Index>() << '\n';
  };
  const Index n_up = models["upstream"]["N"].get<Index>();
  const Index n_down = models["downstream"]["N"].get<Index>();
  const Index p_down = models["downstream"]["P"].get<Index>();
  const Index m_up = models["upstream"]["M"].get<Index>();

  os << "Cascade report (format " << r["format_version"].get<int>() << ")\n\nModels\n";
  model_line("upstream");
  model_line("downstream");
  model_line("flattened");

  auto value_set = [](const std::string& name, const std::vector<Index>& vals, Index dim) {
    std::ostringstream s;
    if (vals.size() == 1) {
      s << name << " = " << delta_str(vals[0], dim);
    } else {
      s << name << " ∈ {";
      for (std::size_t k = 0; k < vals.size(); ++k) s << (k ? ", " : "") << delta_str(vals[k], dim);
      s << "}";
    }
    return s.str();
  };
  auto state_set = [&](const char* name, const std::vector<Index>& vals, Index dim) {
    return value_set(name, vals, dim);
  };

  // Channel dims by name.
  std::map<std::string, Index> dim_of;
  for (const auto& ch : r["channels"]) dim_of[ch["name"].get<std::string>()] = ch["dim"];
  dim_of["upstream_output"] = models["upstream"]["P"].get<Index>();

  os << "\nComponent equilibria (constant input | equilibria)\n";
  const auto& ce = r["component_equilibria"];
  const auto& rel = ce["downstream"]["relevant_factors"];
  const auto up_name = r["channels"][0]["name"].get<std::string>();
  for (const auto& row : ce["rows"]) {
    const auto& ug = ce["upstream"][row["upstream_group"].get<std::size_t>()];
    const auto& dg = ce["downstream"]["groups"][row["downstream_group"].get<std::size_t>()];
    std::string input = value_set("u", ug["inputs"].get<std::vector<Index>>(), m_up);
    for (std::size_t f = 0; f < rel.size(); ++f) {
      std::vector<Index> vals;
      for (const auto& combo : dg["values"]) vals.push_back(combo[f].get<Index>());
      const auto name = rel[f].get<std::string>();
      input += ", " + value_set(name, vals, dim_of[name]);
    }
    os << "  " << input << " | "
       << state_set("c_e", row["upstream_equilibria"].get<std::vector<Index>>(), n_up) << ", "
       << state_set("a_e", row["downstream_equilibria"].get<std::vector<Index>>(), n_down);
    const bool ga = ug["globally_attractive"].get<bool>() && dg["globally_attractive"].get<bool>();
    os << (ga ? " (globally attractive)" : "") << '\n';
  }

  os << "\nCombined equilibria (constant input | equilibria (c_e, a_e) | constant output)\n";
  for (const auto& g : r["combined_table"]) {
    std::string input;
    if (g["constant_input"].is_null()) {
      input = "all other choices (" + std::to_string(g["input_count"].get<std::size_t>()) +
              " inputs)";
    } else {
      std::string fixed, free;
      for (const auto& [name, v] : g["constant_input"].items()) {
        if (v.is_string()) {
          free += (free.empty() ? "" : ", ") + name;
        } else {
          fixed += (fixed.empty() ? "" : ", ") +
                   value_set(name, v.get<std::vector<Index>>(), dim_of[name]);
        }
      }
      input = fixed;
      if (!free.empty()) input += (input.empty() ? "" : "; ") + free + " arbitrary";
    }
    std::string pairs;
    for (const auto& p : g["equilibria"])
      pairs += (pairs.empty() ? "" : ", ") + std::string("(") +
               delta_str(p[0].get<Index>(), n_up) + ", " + delta_str(p[1].get<Index>(), n_down) +
               ")";
    std::string outs;
    for (const auto& y : g["outputs"])
      outs += (outs.empty() ? "" : ", ") + delta_str(y.get<Index>(), p_down);
    os << "  " << input << " | " << pairs << " | " << outs << '\n';
  }

  const auto& lc = r["limit_cycles"];
  os << "\nLimit cycles: " << lc["inputs_with_limit_cycles"].size() << " of "
     << lc["inputs_checked"].get<Index>()
     << " constant inputs admit a cycle of length > 1 (longest cycle "
     << lc["longest_cycle"].get<Index>() << ")\n";

  os << "\nObservability\n";
  for (const char* name : {"upstream", "downstream", "flattened"}) {
    const auto& o = r["observability"][name];
    os << "  " << name << ": " << (o["observable"].get<bool>() ? "observable" : "not observable");
    if (!o["witness"].is_null()) {
      const auto& w = o["witness"];
      os << " (states " << w["pair"][0].get<Index>() << " and " << w["pair"][1].get<Index>()
         << " share outputs under inputs";
      for (const auto& u : w["inputs"]) os << ' ' << u.get<Index>();
      os << ")";
    }
    os << "; weakly observable: " << o["weakly_observable"].get<std::string>() << '\n';
  }

  os << "\nReconstructibility\n";
  for (const char* name : {"upstream", "downstream", "flattened"}) {
    const auto& v = r["reconstructibility"][name];
    os << "  " << name << ": ";
    const auto verdict = v["verdict"].get<std::string>();
    if (verdict == "yes")
      os << "reconstructible, horizon ≤ " << v["horizon"].get<Index>();
    else if (verdict == "no")
      os << "not reconstructible";
    else
      os << "undetermined at cap";
    os << '\n';
  }
  return os.str();
}

}  // namespace bcn
