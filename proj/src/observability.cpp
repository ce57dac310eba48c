#include "bcn/observability.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bcn {
namespace {

/// Symmetric N x N flag matrix over unordered pairs.
class PairFlags {
 public:
  explicit PairFlags(Index n, char init = 0) : n_(n), bits_(n * n, init) {}
  char& operator()(Index a, Index b) { return bits_[(a - 1) * n_ + (b - 1)]; }
  char operator()(Index a, Index b) const { return bits_[(a - 1) * n_ + (b - 1)]; }
  void set(Index a, Index b, char v) { (*this)(a, b) = v, (*this)(b, a) = v; }

 private:
  Index n_;
  std::vector<char> bits_;
};

/// Greatest set of pairs {i, j} with some input giving equal outputs and a
/// successor pair inside the set; merged successors count iff `allow_merge`.
PairFlags greatest_pair_fixpoint(const Bcn& b, bool allow_merge) {
  const Index n = b.n_states;
  PairFlags in(n);
  for (Index i = 1; i <= n; ++i)
    for (Index j = i + 1; j <= n; ++j) in.set(i, j, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (Index i = 1; i <= n; ++i) {
      for (Index j = i + 1; j <= n; ++j) {
        if (!in(i, j)) continue;
        bool keep = false;
        for (Index u = 1; u <= b.n_inputs && !keep; ++u) {
          if (b.H(u)(i) != b.H(u)(j)) continue;
          const Index a = b.L(u)(i), c = b.L(u)(j);
          keep = a == c ? allow_merge : in(a, c) != 0;
        }
        if (!keep) {
          in.set(i, j, 0);
          changed = true;
        }
      }
    }
  }
  return in;
}

std::vector<StatePair> collect(const PairFlags& f, Index n) {
  std::vector<StatePair> out;
  for (Index i = 1; i <= n; ++i)
    for (Index j = i + 1; j <= n; ++j)
      if (f(i, j)) out.emplace_back(i, j);
  return out;
}

std::string format_pairs(const std::vector<StatePair>& pairs, std::size_t limit = 6) {
  std::ostringstream os;
  for (std::size_t k = 0; k < pairs.size() && k < limit; ++k)
    os << (k ? ", " : "") << "(" << pairs[k].first << "," << pairs[k].second << ")";
  if (pairs.size() > limit) os << ", ...";
  return os.str();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

bool IndistinguishabilityResult::contains(StatePair p) const {
  return std::binary_search(pairs.begin(), pairs.end(), make_pair_canonical(p.first, p.second));
}

IndistinguishabilityResult indistinguishable_pairs(const Bcn& b, Index witness_length) {
  require_valid(b);
  IndistinguishabilityResult r;
  r.pairs = collect(greatest_pair_fixpoint(b, true), b.n_states);
  if (!r.pairs.empty()) r.witness = confusing_witness(b, r, r.pairs.front(), witness_length);
  return r;
}

std::vector<Index> confusing_constant_inputs(const Bcn& b, StatePair pair) {
  std::vector<Index> out;
  for (Index u = 1; u <= b.n_inputs; ++u) {
    Index x = pair.first, y = pair.second;
    std::set<StatePair> seen;
    bool ok = true;
    while (x != y && seen.insert(make_pair_canonical(x, y)).second) {
      if (b.H(u)(x) != b.H(u)(y)) {
        ok = false;
        break;
      }
      x = b.L(u)(x);
      y = b.L(u)(y);
    }
    if (ok) out.push_back(u);
  }
  return out;
}

std::optional<Witness> confusing_witness(const Bcn& b, const IndistinguishabilityResult& s,
                                         StatePair pair, Index length,
                                         std::optional<Index> preferred) {
  pair = make_pair_canonical(pair.first, pair.second);
  if (!s.contains(pair)) return std::nullopt;

  Witness w{pair, {}, {}};
  auto constants = confusing_constant_inputs(b, pair);
  if (preferred && std::find(constants.begin(), constants.end(), *preferred) != constants.end())
    constants.insert(constants.begin(), *preferred);
  if (!constants.empty()) {
    w.inputs.assign(length, constants.front());
  } else {
    Index x = pair.first, y = pair.second;
    for (Index t = 0; t < length; ++t) {
      Index pick = 1;
      if (x != y) {
        for (Index u = 1; u <= b.n_inputs; ++u) {
          if (b.H(u)(x) != b.H(u)(y)) continue;
          const Index a = b.L(u)(x), c = b.L(u)(y);
          if (a == c || s.contains(make_pair_canonical(a, c))) {
            pick = u;
            break;
          }
        }
      }
      w.inputs.push_back(pick);
      x = b.L(pick)(x);
      y = b.L(pick)(y);
    }
  }
  w.outputs = simulate(b, pair.first, w.inputs).outputs;
  return w;
}

WeakObservability weak_observability(const Bcn& b, Index max_horizon) {
  require_valid(b);
  if (max_horizon == 0) throw DimensionError("max horizon must be at least 1");
  const Index n = b.n_states;
  // dist(i, j): length of the shortest distinguishing sequence, 0 if none yet.
  std::vector<Index> dist(n * n, 0);
  auto d = [&](Index i, Index j) -> Index& { return dist[(i - 1) * n + (j - 1)]; };
  Index remaining = n * (n - 1) / 2;

  WeakObservability res;
  bool fixpoint = false;
  for (Index level = 1; level <= max_horizon + 1; ++level) {
    std::vector<StatePair> fresh;
    for (Index i = 1; i <= n; ++i) {
      for (Index j = i + 1; j <= n; ++j) {
        if (d(i, j) != 0) continue;
        for (Index u = 1; u <= b.n_inputs; ++u) {
          const bool hit =
              level == 1 ? b.H(u)(i) != b.H(u)(j)
                         : b.H(u)(i) == b.H(u)(j) && b.L(u)(i) != b.L(u)(j) &&
                               d(b.L(u)(i), b.L(u)(j)) != 0 && d(b.L(u)(i), b.L(u)(j)) < level;
          if (hit) {
            fresh.emplace_back(i, j);
            break;
          }
        }
      }
    }
    if (fresh.empty()) {
      fixpoint = true;
      break;
    }
    if (level == max_horizon + 1) break;  // would need a longer sequence
    for (auto [i, j] : fresh) d(i, j) = d(j, i) = level;
    remaining -= fresh.size();
    res.longest = level;
    if (remaining == 0) break;
  }

  for (Index i = 1; i <= n; ++i)
    for (Index j = i + 1; j <= n; ++j)
      if (d(i, j) == 0) res.undistinguished.emplace_back(i, j);
  if (res.undistinguished.empty())
    res.verdict = Verdict::yes;
  else
    res.verdict = fixpoint ? Verdict::no : Verdict::undetermined;
  return res;
}

ReconstructibilityVerdict is_reconstructible(const Bcn& b, Index max_horizon,
                                             std::size_t node_budget) {
  require_valid(b);
  if (max_horizon == 0) throw DimensionError("max horizon must be at least 1");
  ReconstructibilityVerdict v;
  v.confusable = collect(greatest_pair_fixpoint(b, false), b.n_states);
  if (!v.confusable.empty()) {
    v.reconstructible = Verdict::no;
    v.certificate = "state pairs kept distinct with equal outputs forever: " +
                    format_pairs(v.confusable);
    return v;
  }

  using Path = std::vector<std::pair<Index, Index>>;
  std::map<std::vector<Index>, Path> frontier;
  std::vector<Index> all(b.n_states);
  for (Index i = 0; i < b.n_states; ++i) all[i] = i + 1;
  if (all.size() > 1) frontier.emplace(all, Path{});

  Index depth = 0;
  std::size_t distinct = 0;
  std::set<std::vector<Index>> ever;
  Path last;
  std::vector<char> mark(b.n_states + 1);
  while (!frontier.empty()) {
    if (depth == max_horizon || v.nodes + frontier.size() > node_budget) {
      v.reconstructible = Verdict::undetermined;
      std::ostringstream os;
      os << frontier.size() << " uncertainty sets still ambiguous at depth " << depth
         << " after expanding " << v.nodes << " sets";
      v.certificate = os.str();
      return v;
    }
    last = frontier.begin()->second;
    std::map<std::vector<Index>, Path> next;
    for (const auto& [set, path] : frontier) {
      ++v.nodes;
      if (ever.insert(set).second) ++distinct;
      for (Index u = 1; u <= b.n_inputs; ++u) {
        for (Index y = 1; y <= b.n_outputs; ++y) {
          std::vector<Index> succ;
          for (Index x : set)
            if (b.H(u)(x) == y) succ.push_back(b.L(u)(x));
          std::sort(succ.begin(), succ.end());
          succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
          if (succ.size() > 1 && !next.contains(succ)) {
            Path p = path;
            p.emplace_back(u, y);
            next.emplace(std::move(succ), std::move(p));
          }
        }
      }
    }
    frontier = std::move(next);
    ++depth;
  }

  v.reconstructible = Verdict::yes;
  v.horizon = depth;
  v.slowest = std::move(last);
  std::ostringstream os;
  os << distinct << " distinct ambiguous uncertainty sets; every (input, output) history of "
     << depth << " steps leaves a single state";
  if (!v.slowest.empty()) {
    os << "; longest history still ambiguous:";
    for (auto [u, y] : v.slowest) os << " (u=" << u << ",y=" << y << ")";
  }
  v.certificate = os.str();
  return v;
}

namespace {

struct PairSearch {
  const Bcn& b;
  std::set<std::tuple<Index, Index, Index>> failed;
};

bool distinguish_dfs(PairSearch& s, Index x, Index y, Index rem, std::vector<Index>& seq) {
  if (x == y || rem == 0) return false;
  const auto key = std::make_tuple(std::min(x, y), std::max(x, y), rem);
  if (s.failed.contains(key)) return false;
  for (Index u = 1; u <= s.b.n_inputs; ++u) {
    seq.push_back(u);
    if (s.b.H(u)(x) != s.b.H(u)(y)) return true;
    if (distinguish_dfs(s, s.b.L(u)(x), s.b.L(u)(y), rem - 1, seq)) return true;
    seq.pop_back();
  }
  s.failed.insert(key);
  return false;
}

bool confuse_dfs(PairSearch& s, Index x, Index y, Index rem, std::vector<Index>& seq) {
  if (rem == 0) return true;
  if (x == y) {
    seq.insert(seq.end(), rem, 1);
    return true;
  }
  const auto key = std::make_tuple(std::min(x, y), std::max(x, y), rem);
  if (s.failed.contains(key)) return false;
  for (Index u = 1; u <= s.b.n_inputs; ++u) {
    if (s.b.H(u)(x) != s.b.H(u)(y)) continue;
    seq.push_back(u);
    if (confuse_dfs(s, s.b.L(u)(x), s.b.L(u)(y), rem - 1, seq)) return true;
    seq.pop_back();
  }
  s.failed.insert(key);
  return false;
}

}  // namespace

std::optional<std::vector<Index>> brute_force_distinguish(const Bcn& b, Index i, Index j,
                                                          Index max_len) {
  require_valid(b);
  if (i == j) throw DimensionError("brute_force_distinguish needs two distinct states");
  for (Index len = 1; len <= max_len; ++len) {
    PairSearch s{b, {}};
    std::vector<Index> seq;
    if (distinguish_dfs(s, i, j, len, seq)) return seq;
  }
  return std::nullopt;
}

std::optional<std::vector<Index>> brute_force_confuse(const Bcn& b, Index i, Index j,
                                                      Index len) {
  require_valid(b);
  PairSearch s{b, {}};
  std::vector<Index> seq;
  if (confuse_dfs(s, i, j, len, seq)) return seq;
  return std::nullopt;
}

namespace {

// states[k] / cls[k]: current state and output-history class of the k-th
// initial state.
bool reconstruct_dfs(const Bcn& b, Index rem, const std::vector<Index>& states,
                     const std::vector<Index>& cls) {
  const Index n = b.n_states;
  // class -> common state, or 0 if the class disagrees
  std::vector<Index> common(n, static_cast<Index>(-1));
  bool settled = true;
  for (Index k = 0; k < n; ++k) {
    Index& c = common[cls[k]];
    if (c == static_cast<Index>(-1))
      c = states[k];
    else if (c != states[k])
      settled = false;
  }
  if (settled) return true;  // equal states stay equal under equal inputs
  if (rem == 0) return false;

  std::vector<Index> next(n), ncls(n), relabel(n * b.n_outputs);
  for (Index u = 1; u <= b.n_inputs; ++u) {
    std::fill(relabel.begin(), relabel.end(), static_cast<Index>(-1));
    Index fresh = 0;
    for (Index k = 0; k < n; ++k) {
      Index& r = relabel[cls[k] * b.n_outputs + b.H(u)(states[k]) - 1];
      if (r == static_cast<Index>(-1)) r = fresh++;
      ncls[k] = r;
      next[k] = b.L(u)(states[k]);
    }
    if (!reconstruct_dfs(b, rem - 1, next, ncls)) return false;
  }
  return true;
}

}  // namespace

bool brute_force_reconstructible_at(const Bcn& b, Index horizon) {
  require_valid(b);
  std::vector<Index> states(b.n_states), cls(b.n_states, 0);
  for (Index k = 0; k < b.n_states; ++k) states[k] = k + 1;
  return reconstruct_dfs(b, horizon, states, cls);
}

std::optional<Index> brute_force_horizon(const Bcn& b, Index max_horizon) {
  for (Index t = 0; t <= max_horizon; ++t)
    if (brute_force_reconstructible_at(b, t)) return t;
  return std::nullopt;
}

}  // namespace bcn
