#include <gtest/gtest.h>

#include <numeric>

#include "bcn/avalanche.hpp"
#include "bcn/reach.hpp"
#include "support.hpp"

namespace bcn {
namespace {

using avalanche::build_cascade;
using avalanche::build_context;
using avalanche::build_functional;

Bcn single_block(LogicalMatrix l) {
  const Index n = l.rows();
  return Bcn{n, 1, 1, {std::move(l)}, {LogicalMatrix(1, std::vector<Index>(n, 1))}};
}

TEST(Equilibria, Paper) {
  const Bcn c = build_context();
  EXPECT_EQ(equilibria(c, 1), std::vector<Index>{5});
  for (Index u = 2; u <= 4; ++u) EXPECT_EQ(equilibria(c, u), std::vector<Index>{1});
  const Bcn a = build_functional();
  for (Index k = 1; k <= 16; ++k) {
    const Index v3 = decode(delta(16, k), {{2, 2, 2, 2}})[2];
    EXPECT_EQ(equilibria(a, k), std::vector<Index>{v3 == 1 ? Index{3} : Index{1}});
  }
  EXPECT_THROW(equilibria(c, 5), DimensionError);
}

TEST(Attractivity, Paper) {
  const Bcn c = build_context();
  EXPECT_TRUE(is_globally_attractive(c, 1, 5));
  EXPECT_TRUE(is_globally_attractive(c, 4, 1));
  EXPECT_THROW(is_globally_attractive(c, 1, 1), Error);
  EXPECT_EQ(convergence_horizon(c, 1), Index{4});
  EXPECT_EQ(convergence_horizon(c, 2), Index{1});
}

TEST(Attractivity, Trivial) {
  const Bcn swap = single_block(LogicalMatrix(2, {2, 1}));
  EXPECT_TRUE(equilibria(swap, 1).empty());
  EXPECT_FALSE(convergence_horizon(swap, 1).has_value());
  const Bcn konst = single_block(LogicalMatrix(2, {1, 1}));
  EXPECT_TRUE(is_globally_attractive(konst, 1, 1));
}

TEST(Attractors, ContextIncrement) {
  const auto r = attractors(build_context(), 1);
  ASSERT_EQ(r.attractors.size(), 1u);
  EXPECT_EQ(r.attractors[0].cycle, std::vector<Index>{5});
  EXPECT_EQ(r.attractors[0].basin_size, 5u);
  EXPECT_TRUE(r.globally_attractive);
  EXPECT_FALSE(r.has_limit_cycle());
}

TEST(Attractors, Swap) {
  const auto r = attractors(single_block(LogicalMatrix(2, {2, 1})), 1);
  ASSERT_EQ(r.attractors.size(), 1u);
  EXPECT_EQ(r.attractors[0].cycle, (std::vector<Index>{1, 2}));
  EXPECT_EQ(r.attractors[0].basin_size, 2u);
  EXPECT_TRUE(r.equilibria.empty());
  EXPECT_TRUE(r.has_limit_cycle());
}

// Brute-force decomposition: iterate each state N times to land on its
// cycle, then name the cycle by its smallest state.
void check_against_iteration(const Bcn& b, Index k) {
  const auto r = attractors(b, k);
  const auto& l = b.L(k);
  Index total = 0;
  for (const auto& a : r.attractors) {
    total += a.basin_size;
    ASSERT_EQ(a.cycle.front(), *std::min_element(a.cycle.begin(), a.cycle.end()));
    for (std::size_t i = 0; i < a.cycle.size(); ++i)
      ASSERT_EQ(l(a.cycle[i]), a.cycle[(i + 1) % a.cycle.size()]);
  }
  ASSERT_EQ(total, b.n_states);
  std::vector<Index> fixed;
  for (Index x = 1; x <= b.n_states; ++x) {
    Index y = x;
    for (Index s = 0; s < b.n_states; ++s) y = l(y);
    Index lo = y;
    for (Index z = l(y); z != y; z = l(z)) lo = std::min(lo, z);
    ASSERT_EQ(r.attractors[r.basin_of[x - 1]].cycle.front(), lo);
    if (l(x) == x) fixed.push_back(x);
  }
  ASSERT_EQ(r.equilibria, fixed);
  ASSERT_EQ(equilibria(b, k), fixed);
}

TEST(Attractors, RandomAgainstIteration) {
  std::mt19937 rng(41);
  for (int n = 0; n < 300; ++n) {
    const Bcn b = test::random_bcn(rng, test::uniform(rng, 1, 12), 2, 1);
    check_against_iteration(b, 1);
    check_against_iteration(b, 2);
  }
}

TEST(Attractivity, MatchesSimulation) {
  std::mt19937 rng(43);
  for (int n = 0; n < 300; ++n) {
    const Bcn b = test::random_bcn(rng, test::uniform(rng, 1, 6), 1, 1);
    for (Index e : equilibria(b, 1)) {
      bool all = true;
      for (Index x = 1; x <= b.n_states; ++x) {
        const auto tr = simulate(b, x, std::vector<Index>(b.n_states, 1));
        all = all && tr.states.back() == e;
      }
      ASSERT_EQ(is_globally_attractive(b, 1, e), all);
    }
  }
}

TEST(EquilibriumTable, PaperRows) {
  const Cascade c = build_cascade();
  const auto t = equilibrium_table(c);
  ASSERT_EQ(t.rows.size(), 32u);
  const auto& r0 = t.rows[0];
  EXPECT_EQ(r0.inputs, (InputRow{1, 1, 1, 1}));
  ASSERT_EQ(r0.pairs.size(), 1u);
  EXPECT_EQ(r0.pairs[0].upstream, 5u);
  EXPECT_EQ(r0.pairs[0].downstream, 3u);
  EXPECT_EQ(r0.outputs, std::vector<Index>{1});
  for (const auto& r : t.rows) {
    // One globally attractive pair per constant input.
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_TRUE(r.pairs[0].globally_attractive);
    const auto& p = r.pairs[0];
    const Index u = r.inputs[0];
    EXPECT_EQ(p.upstream, u == 1 ? 5u : 1u);
    EXPECT_EQ(p.downstream, r.inputs[3] == 1 ? 3u : 1u);
    const Index expect = r.inputs[1] == 2 && r.inputs[2] == 2 ? 3u
                         : r.inputs == InputRow{1, 1, 1, 1} ? 1u
                                                            : 2u;
    EXPECT_EQ(r.outputs, std::vector<Index>{expect});
  }
}

TEST(EquilibriumTable, AgreesWithFlattened) {
  const Cascade c = build_cascade();
  const Bcn f = flatten(c);
  for (const auto& r : equilibrium_table(c).rows) {
    const Index k = pack_row(c, r.inputs);
    std::vector<Index> eq;
    for (const auto& p : r.pairs) eq.push_back(pack_state(c, p.upstream, p.downstream));
    EXPECT_EQ(equilibria(f, k), eq);
    for (const auto& p : r.pairs) {
      EXPECT_EQ(output(f, pack_state(c, p.upstream, p.downstream), k), p.output);
      EXPECT_EQ(is_globally_attractive(f, k, pack_state(c, p.upstream, p.downstream)),
                p.globally_attractive);
    }
  }
}

TEST(GroupByOutput, ThreeCases) {
  const Cascade c = build_cascade();
  const auto g = group_by_output(c, equilibrium_table(c));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_TRUE(g[0].is_product);
  EXPECT_EQ(g[0].inputs.size(), 1u);
  EXPECT_EQ(g[0].outputs, std::vector<Index>{1});
  using P = std::pair<Index, Index>;
  EXPECT_EQ(g[0].pairs, (std::vector<P>{{5, 3}}));
  EXPECT_TRUE(g[1].is_product);
  EXPECT_EQ(g[1].inputs.size(), 8u);
  EXPECT_EQ(g[1].outputs, std::vector<Index>{3});
  EXPECT_FALSE(g[1].constraints[0].has_value());
  EXPECT_EQ(g[1].constraints[1], std::vector<Index>{2});
  EXPECT_EQ(g[1].constraints[2], std::vector<Index>{2});
  EXPECT_FALSE(g[1].constraints[3].has_value());
  const std::vector<P> four{{1, 1}, {1, 3}, {5, 1}, {5, 3}};
  EXPECT_EQ(g[1].pairs, four);
  EXPECT_FALSE(g[2].is_product);
  EXPECT_EQ(g[2].inputs.size(), 23u);
  EXPECT_EQ(g[2].outputs, std::vector<Index>{2});
  EXPECT_EQ(g[2].pairs, four);
}

TEST(ComponentTable, Paper) {
  const Cascade c = build_cascade();
  const auto t = component_table(c);
  ASSERT_EQ(t.upstream.size(), 2u);
  EXPECT_EQ(t.upstream[0].inputs, std::vector<Index>{1});
  EXPECT_EQ(t.upstream[0].equilibria, std::vector<Index>{5});
  EXPECT_EQ(t.upstream[1].inputs, (std::vector<Index>{2, 3, 4}));
  EXPECT_EQ(t.upstream[1].equilibria, std::vector<Index>{1});
  EXPECT_EQ(t.relevant_factors, std::vector<std::size_t>{2});
  ASSERT_EQ(t.downstream.size(), 2u);
  EXPECT_EQ(t.downstream[0].equilibria, std::vector<Index>{3});
  EXPECT_EQ(t.downstream[1].equilibria, std::vector<Index>{1});
  for (const auto& g : t.upstream) EXPECT_TRUE(g.globally_attractive);
  for (const auto& g : t.downstream) EXPECT_TRUE(g.globally_attractive);
}

TEST(NoLimitCycles, FlattenedPaperCascade) {
  const Bcn f = flatten(build_cascade());
  for (Index k = 1; k <= f.n_inputs; ++k) {
    const auto r = attractors(f, k);
    EXPECT_FALSE(r.has_limit_cycle()) << "input " << k;
    for (const auto& a : r.attractors) EXPECT_EQ(a.cycle.size(), 1u);
  }
}

}  // namespace
}  // namespace bcn
