#include <gtest/gtest.h>

#include "bcn/avalanche.hpp"
#include "bcn/network.hpp"
#include "support.hpp"

namespace bcn {
namespace {

using avalanche::build_cascade;
using avalanche::build_context;
using avalanche::build_functional;

TEST(Validate, PaperContextIsValid) { EXPECT_TRUE(validate(build_context()).empty()); }

TEST(Validate, ColumnOutOfRange) {
  Bcn b = build_context();
  // A 6-row block cannot be built as a LogicalMatrix with rows 5, so the bad
  // index comes in through a 6-row block.
  b.transition[0] = LogicalMatrix(6, {2, 3, 6, 5, 5});
  const auto v = validate(b);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::column_range);
  EXPECT_EQ(v[0].matrix, "L");
  EXPECT_EQ(v[0].block, 1u);
  EXPECT_EQ(v[0].column, 3u);
}

TEST(Validate, BlockCount) {
  Bcn b = build_context();
  b.transition.pop_back();
  const auto v = validate(b);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, Violation::Kind::arity);
  EXPECT_THROW(require_valid(b), DimensionError);
}

TEST(Validate, BlockShape) {
  Bcn b = build_context();
  b.output[2] = LogicalMatrix(2, {1, 1, 1, 1});
  const auto v = validate(b);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::block_shape);
  EXPECT_EQ(v[0].matrix, "H");
  EXPECT_EQ(v[0].block, 3u);
}

TEST(Step, ContextAndFunctional) {
  const Bcn c = build_context();
  EXPECT_EQ(step(c, delta(5, 4), 1), delta(5, 5));
  EXPECT_EQ(step(c, delta(5, 5), 3), delta(5, 1));
  const Bcn a = build_functional();
  // v3 low: any block with the third factor at 2, e.g. (1,1,2,1) = 3.
  EXPECT_EQ(step(a, delta(3, 3), 3), delta(3, 1));
  EXPECT_THROW(step(c, delta(4, 1), 1), DimensionError);
  EXPECT_THROW(step(c, 1, 5), DimensionError);
}

TEST(Output, ContextAndFunctional) {
  const Bcn c = build_context();
  for (Index u = 1; u <= 4; ++u) EXPECT_EQ(output(c, delta(5, 5), u), delta(2, 1));
  const Bcn a = build_functional();
  EXPECT_EQ(output(a, delta(3, 3), 1), delta(3, 1));
  EXPECT_EQ(output(a, delta(3, 1), 13), delta(3, 3));
}

TEST(Output, ContextOutputIgnoresInput) {
  const Bcn c = build_context();
  for (Index u = 2; u <= 4; ++u) EXPECT_EQ(c.H(u), c.H(1));
}

TEST(Output, FunctionalIsProper) {
  // Same state, different input at the same instant, different output.
  const Bcn a = build_functional();
  EXPECT_NE(output(a, 3, 1), output(a, 3, 2));
}

TEST(Simulate, ContextCountsUp) {
  const auto tr = simulate(build_context(), 1, {1, 1, 1, 1});
  EXPECT_EQ(tr.states, (std::vector<Index>{1, 2, 3, 4, 5}));
  EXPECT_EQ(tr.outputs, (std::vector<Index>{2, 2, 2, 2}));
  EXPECT_EQ(output(build_context(), 5, 1), avalanche::kDanger);
}

TEST(Simulate, ContextResets) {
  EXPECT_EQ(simulate(build_context(), 3, {1, 2, 1}).states, (std::vector<Index>{3, 4, 1, 2}));
}

TEST(Simulate, EmptyInput) {
  const auto tr = simulate(build_context(), 4, {});
  EXPECT_EQ(tr.states, std::vector<Index>{4});
  EXPECT_TRUE(tr.outputs.empty());
}

TEST(Simulate, ErrorNamesTime) {
  try {
    simulate(build_context(), 1, {1, 1, 9});
    FAIL();
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("t=2"), std::string::npos) << e.what();
  }
}

TEST(Cascade, PackExternalInputs) {
  const Cascade c = build_cascade();
  EXPECT_EQ(pack_external_inputs(c, {1, 1, 1, 1}, 1), 1u);
  EXPECT_EQ(pack_external_inputs(c, {1, 2, 2, 2}, 2), 16u);
  EXPECT_EQ(pack_external_inputs(c, {1, 1, 1, 1}, 2), 2u);
  EXPECT_THROW(pack_external_inputs(c, {1, 3, 1, 1}, 1), DimensionError);
}

TEST(Cascade, WiringValidation) {
  Cascade c = build_cascade();
  EXPECT_TRUE(validate(c).empty());
  c.downstream_inputs.pop_back();
  EXPECT_FALSE(validate(c).empty());
  c = build_cascade();
  c.downstream_inputs[0].dim = 3;
  const auto v = validate(c);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v[0].find("24"), std::string::npos) << v[0];
  EXPECT_NE(v[0].find("16"), std::string::npos) << v[0];
}

TEST(Cascade, SimulateFromColdStart) {
  const Cascade c = build_cascade();
  const std::vector<InputRow> in(8, InputRow{1, 1, 1, 1});
  const auto out = simulate_cascade(c, 1, 1, in).downstream_outputs();
  EXPECT_EQ(out, (std::vector<Index>{2, 2, 2, 2, 1, 1, 1, 1}));
}

TEST(Cascade, SimulateFromEquilibrium) {
  const Cascade c = build_cascade();
  const std::vector<InputRow> in(6, InputRow{1, 1, 1, 1});
  for (Index m : simulate_cascade(c, 5, 3, in).downstream_outputs()) EXPECT_EQ(m, 1u);
}

TEST(Cascade, TempAndSnowLowIsNormal) {
  const Cascade c = build_cascade();
  std::mt19937 rng(2);
  for (Index x0u = 1; x0u <= 5; ++x0u) {
    for (Index x0d = 1; x0d <= 3; ++x0d) {
      std::vector<InputRow> in;
      for (int t = 0; t < 8; ++t) in.push_back({test::uniform(rng, 1, 4), 2, 2, test::uniform(rng, 1, 2)});
      for (Index m : simulate_cascade(c, x0u, x0d, in).downstream_outputs())
        EXPECT_EQ(m, avalanche::kNormal);
    }
  }
}

TEST(Cascade, Determinism) {
  const Cascade c = build_cascade();
  std::mt19937 rng(4);
  std::vector<InputRow> in;
  for (int t = 0; t < 30; ++t) in.push_back(unpack_row(c, test::uniform(rng, 1, 32)));
  EXPECT_EQ(simulate_cascade(c, 2, 2, in), simulate_cascade(c, 2, 2, in));
}

TEST(Flatten, Dimensions) {
  const Bcn f = flatten(build_cascade());
  EXPECT_EQ(f.n_states, 15u);
  EXPECT_EQ(f.n_inputs, 32u);
  EXPECT_EQ(f.n_outputs, 3u);
  EXPECT_TRUE(validate(f).empty());
}

TEST(Flatten, DegenerateUpstream) {
  Cascade c = build_cascade();
  c.upstream = Bcn{1, 4, 2, {}, {}};
  for (int k = 0; k < 4; ++k) {
    c.upstream.transition.push_back(LogicalMatrix(1, {1}));
    c.upstream.output.push_back(LogicalMatrix(2, {2}));
  }
  const Bcn f = flatten(c);
  ASSERT_EQ(f.n_states, 3u);
  for (Index k = 1; k <= 32; ++k) {
    const auto row = unpack_row(c, k);
    const Index ud = pack_external_inputs(c, row, 2);
    EXPECT_EQ(f.L(k), c.downstream.L(ud));
    EXPECT_EQ(f.H(k), c.downstream.H(ud));
  }
}

void expect_flat_matches(const Cascade& c, const Bcn& f, Index xu, Index xd,
                         const std::vector<InputRow>& in) {
  std::vector<Index> flat_in;
  for (const auto& r : in) flat_in.push_back(pack_row(c, r));
  const auto a = simulate_cascade(c, xu, xd, in);
  const auto b = simulate(f, pack_state(c, xu, xd), flat_in);
  ASSERT_EQ(a.downstream_outputs(), b.outputs);
  for (std::size_t t = 0; t < in.size(); ++t)
    ASSERT_EQ(pack_state(c, a.rows[t].upstream_state, a.rows[t].downstream_state), b.states[t]);
  ASSERT_EQ(pack_state(c, a.final_upstream_state, a.final_downstream_state), b.states.back());
}

TEST(Flatten, RandomEquivalence) {
  const Cascade c = build_cascade();
  const Bcn f = flatten(c);
  std::mt19937 rng(99);
  for (int n = 0; n < 500; ++n) {
    std::vector<InputRow> in;
    for (int t = 0; t < 10; ++t) in.push_back(unpack_row(c, test::uniform(rng, 1, 32)));
    expect_flat_matches(c, f, test::uniform(rng, 1, 5), test::uniform(rng, 1, 3), in);
  }
}

TEST(Flatten, ExhaustiveUpToLengthFour) {
  // One step from every state, then every sequence from the cold start.
  const Cascade c = build_cascade();
  const Bcn f = flatten(c);
  for (Index xu = 1; xu <= 5; ++xu)
    for (Index xd = 1; xd <= 3; ++xd)
      for (Index k = 1; k <= 32; ++k)
        expect_flat_matches(c, f, xu, xd, {unpack_row(c, k)});
  std::vector<InputRow> in;
  std::function<void(Index)> rec = [&](Index len) {
    if (in.size() == len) {
      expect_flat_matches(c, f, 1, 1, in);
      return;
    }
    for (Index k = 1; k <= 32; ++k) {
      in.push_back(unpack_row(c, k));
      rec(len);
      in.pop_back();
    }
  };
  for (Index len = 0; len <= 4; ++len) rec(len);
}

TEST(Flatten, RandomCascades) {
  std::mt19937 rng(8);
  for (int n = 0; n < 100; ++n) {
    const Index pu = test::uniform(rng, 1, 3), eu = test::uniform(rng, 2, 3),
                ed = test::uniform(rng, 2, 3);
    Cascade c{test::random_bcn(rng, test::uniform(rng, 1, 4), eu, pu),
              test::random_bcn(rng, test::uniform(rng, 1, 4), ed * pu, test::uniform(rng, 1, 3)),
              {InputFactor::external("x", eu)},
              {InputFactor::upstream_output(pu), InputFactor::external("y", ed)}};
    ASSERT_TRUE(validate(c).empty());
    const Bcn f = flatten(c);
    std::vector<InputRow> in;
    for (int t = 0; t < 8; ++t) in.push_back(unpack_row(c, test::uniform(rng, 1, eu * ed)));
    expect_flat_matches(c, f, 1, 1, in);
  }
}

}  // namespace
}  // namespace bcn
