#include "bcn/reach.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bcn {
namespace {

void check_input(const Bcn& b, Index k) {
  if (k == 0 || k > b.n_inputs) {
    std::ostringstream os;
    os << "input " << k << " outside [1, " << b.n_inputs << "]";
    throw DimensionError(os.str());
  }
}

MixedRadixShape shape_of(const std::vector<InputFactor>& factors) {
  MixedRadixShape s;
  for (const auto& f : factors) s.dims.push_back(f.dim);
  return s;
}

}  // namespace

std::vector<Index> equilibria(const Bcn& b, Index k) {
  check_input(b, k);
  std::vector<Index> out;
  const auto& l = b.L(k);
  for (Index i = 1; i <= b.n_states; ++i)
    if (l(i) == i) out.push_back(i);
  return out;
}

bool is_globally_attractive(const Bcn& b, Index k, Index e) {
  check_input(b, k);
  if (e == 0 || e > b.n_states || b.L(k)(e) != e) {
    std::ostringstream os;
    os << "state " << e << " is not an equilibrium for input " << k;
    throw DimensionError(os.str());
  }
  const auto p = mat_pow(b.L(k), b.n_states);
  return std::all_of(p.col_index().begin(), p.col_index().end(),
                     [e](Index r) { return r == e; });
}

std::optional<Index> convergence_horizon(const Bcn& b, Index k) {
  check_input(b, k);
  auto p = LogicalMatrix::identity(b.n_states);
  for (Index t = 0; t <= b.n_states; ++t) {
    const auto c = p.col_index();
    if (std::all_of(c.begin(), c.end(), [&](Index r) { return r == c.front(); })) return t;
    p = compose(b.L(k), p);
  }
  return std::nullopt;
}

bool AttractorReport::has_limit_cycle() const {
  return std::any_of(attractors.begin(), attractors.end(),
                     [](const Attractor& a) { return a.cycle.size() > 1; });
}

AttractorReport attractors(const Bcn& b, Index k) {
  check_input(b, k);
  const auto& l = b.L(k);
  const Index n = b.n_states;
  constexpr Index kUnseen = static_cast<Index>(-1);
  constexpr Index kOnPath = static_cast<Index>(-2);

  AttractorReport rep;
  rep.input = k;
  rep.basin_of.assign(n, kUnseen);
  std::vector<Index> path;
  for (Index s = 1; s <= n; ++s) {
    if (rep.basin_of[s - 1] != kUnseen) continue;
    path.clear();
    Index x = s;
    while (rep.basin_of[x - 1] == kUnseen) {
      rep.basin_of[x - 1] = kOnPath;
      path.push_back(x);
      x = l(x);
    }
    Index id;
    if (rep.basin_of[x - 1] == kOnPath) {
      // x closes a new cycle
      Attractor a;
      Index y = x;
      do {
        a.cycle.push_back(y);
        y = l(y);
      } while (y != x);
      std::rotate(a.cycle.begin(), std::min_element(a.cycle.begin(), a.cycle.end()),
                  a.cycle.end());
      id = rep.attractors.size();
      rep.attractors.push_back(std::move(a));
    } else {
      id = rep.basin_of[x - 1];
    }
    for (Index y : path) rep.basin_of[y - 1] = id;
    rep.attractors[id].basin_size += path.size();
  }

  // Renumber by smallest cycle state.
  std::vector<Index> order(rep.attractors.size());
  for (Index i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index c) {
    return rep.attractors[a].cycle.front() < rep.attractors[c].cycle.front();
  });
  std::vector<Index> rank(order.size());
  std::vector<Attractor> sorted;
  for (Index i = 0; i < order.size(); ++i) {
    rank[order[i]] = i;
    sorted.push_back(std::move(rep.attractors[order[i]]));
  }
  rep.attractors = std::move(sorted);
  for (auto& id : rep.basin_of) id = rank[id];

  for (const auto& a : rep.attractors)
    if (a.cycle.size() == 1) rep.equilibria.push_back(a.cycle.front());
  rep.globally_attractive =
      rep.attractors.size() == 1 && rep.attractors.front().cycle.size() == 1;
  return rep;
}

EquilibriumTable equilibrium_table(const Cascade& c) {
  require_valid(c);
  const Index m = external_shape(c).size();
  EquilibriumTable table;
  table.rows.reserve(m);
  for (Index k = 1; k <= m; ++k) {
    EquilibriumRow row;
    row.inputs = unpack_row(c, k);
    const Index uu = upstream_input(c, row.inputs);
    const bool up_global = attractors(c.upstream, uu).globally_attractive;
    std::set<Index> outs;
    for (Index ce : equilibria(c.upstream, uu)) {
      const Index v4 = c.upstream.H(uu)(ce);
      const Index ud = pack_external_inputs(c, row.inputs, v4);
      const bool down_global = attractors(c.downstream, ud).globally_attractive;
      for (Index ae : equilibria(c.downstream, ud)) {
        const Index y = c.downstream.H(ud)(ae);
        row.pairs.push_back({ce, ae, v4, y, up_global && down_global});
        outs.insert(y);
      }
    }
    row.outputs.assign(outs.begin(), outs.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<EquilibriumGroup> group_by_output(const Cascade& c, const EquilibriumTable& t) {
  const auto channels = external_channels(c);
  std::vector<EquilibriumGroup> groups;
  std::map<std::vector<Index>, std::size_t> by_outputs;
  for (const auto& row : t.rows) {
    auto [it, fresh] = by_outputs.try_emplace(row.outputs, groups.size());
    if (fresh) {
      groups.emplace_back();
      groups.back().outputs = row.outputs;
    }
    auto& g = groups[it->second];
    g.inputs.push_back(row.inputs);
    for (const auto& p : row.pairs) g.pairs.emplace_back(p.upstream, p.downstream);
  }

  for (auto& g : groups) {
    std::sort(g.pairs.begin(), g.pairs.end());
    g.pairs.erase(std::unique(g.pairs.begin(), g.pairs.end()), g.pairs.end());

    // A group is a cartesian product iff its size equals the product of
    // the per-channel value counts.
    std::vector<std::set<Index>> seen(channels.size());
    for (const auto& in : g.inputs)
      for (std::size_t ch = 0; ch < in.size(); ++ch) seen[ch].insert(in[ch]);
    Index product = 1;
    for (const auto& s : seen) product *= s.size();
    g.is_product = product == g.inputs.size();
    for (std::size_t ch = 0; ch < channels.size(); ++ch) {
      if (seen[ch].size() == channels[ch].dim)
        g.constraints.emplace_back(std::nullopt);
      else
        g.constraints.emplace_back(std::vector<Index>(seen[ch].begin(), seen[ch].end()));
    }
  }
  std::stable_partition(groups.begin(), groups.end(),
                        [](const EquilibriumGroup& g) { return g.is_product; });
  return groups;
}

std::vector<std::size_t> transition_relevant_factors(const Bcn& b,
                                                     const std::vector<InputFactor>& factors) {
  const auto shape = shape_of(factors);
  if (shape.size() != b.n_inputs) throw DimensionError("factor dims do not match M");
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    bool relevant = false;
    for (Index k = 1; k <= b.n_inputs && !relevant; ++k) {
      auto idx = decode(delta(b.n_inputs, k), shape);
      for (Index v = 1; v <= factors[f].dim && !relevant; ++v) {
        idx[f] = v;
        relevant = b.L(pack(idx, shape).index) != b.L(k);
      }
    }
    if (relevant) out.push_back(f);
  }
  return out;
}

namespace {

std::vector<ComponentGroup> group_equilibria(const Bcn& b,
                                             const std::vector<std::pair<Index, Index>>& keys) {
  // keys: (label, input index)
  std::vector<ComponentGroup> out;
  std::map<std::vector<Index>, std::size_t> idx;
  for (const auto& [label, k] : keys) {
    auto eq = equilibria(b, k);
    auto [it, fresh] = idx.try_emplace(eq, out.size());
    if (fresh) out.push_back({{}, eq, true});
    auto& g = out[it->second];
    g.inputs.push_back(label);
    g.globally_attractive = g.globally_attractive && attractors(b, k).globally_attractive;
  }
  return out;
}

}  // namespace

ComponentTable component_table(const Cascade& c) {
  require_valid(c);
  ComponentTable t;
  std::vector<std::pair<Index, Index>> up;
  for (Index k = 1; k <= c.upstream.n_inputs; ++k) up.emplace_back(k, k);
  t.upstream = group_equilibria(c.upstream, up);

  t.relevant_factors = transition_relevant_factors(c.downstream, c.downstream_inputs);
  const auto full = shape_of(c.downstream_inputs);
  MixedRadixShape rel;
  for (auto f : t.relevant_factors) rel.dims.push_back(c.downstream_inputs[f].dim);
  std::vector<std::pair<Index, Index>> down;
  const Index combos = rel.dims.empty() ? 1 : rel.size();
  for (Index r = 1; r <= combos; ++r) {
    std::vector<Index> idx(full.dims.size(), 1);
    if (!rel.dims.empty()) {
      const auto vals = decode(delta(combos, r), rel);
      for (std::size_t i = 0; i < vals.size(); ++i) idx[t.relevant_factors[i]] = vals[i];
    }
    down.emplace_back(r, pack(idx, full).index);
  }
  t.downstream = group_equilibria(c.downstream, down);
  return t;
}

}  // namespace bcn
