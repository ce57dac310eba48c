#include "bcn/network.hpp"

#include <sstream>

namespace bcn {
namespace {

std::string at_time(std::size_t t, const std::string& what) {
  std::ostringstream os;
  os << "t=" << t << ": " << what;
  return os.str();
}

void check_range(Index v, Index dim, const char* what) {
  if (v == 0 || v > dim) {
    std::ostringstream os;
    os << what << " " << v << " outside [1, " << dim << "]";
    throw DimensionError(os.str());
  }
}

void check_blocks(const std::vector<LogicalMatrix>& blocks, const char* name, Index rows,
                  Index n, Index m, std::vector<Violation>& out) {
  if (blocks.size() != m) {
    std::ostringstream os;
    os << name << " has " << blocks.size() << " blocks, expected " << m;
    out.push_back({Violation::Kind::arity, name, 0, 0, os.str()});
  }
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& blk = blocks[k];
    bool range_error = false;
    for (std::size_t j = 0; j < blk.cols(); ++j) {
      const Index r = blk.col_index()[j];
      if (r > rows) {
        std::ostringstream os;
        os << name << "_" << k + 1 << " column " << j + 1 << " has index " << r
           << " outside [1, " << rows << "]";
        out.push_back({Violation::Kind::column_range, name, k + 1, j + 1, os.str()});
        range_error = true;
      }
    }
    if (blk.cols() != n || (blk.rows() != rows && !range_error)) {
      std::ostringstream os;
      os << name << "_" << k + 1 << " is " << blk.rows() << "x" << blk.cols() << ", expected "
         << rows << "x" << n;
      out.push_back({Violation::Kind::block_shape, name, k + 1, 0, os.str()});
    }
  }
}

MixedRadixShape shape_of(const std::vector<InputFactor>& factors) {
  MixedRadixShape s;
  for (const auto& f : factors) s.dims.push_back(f.dim);
  return s;
}

}  // namespace

LogicalMatrix Bcn::transition_matrix() const { return hconcat(transition); }
LogicalMatrix Bcn::output_matrix() const { return hconcat(output); }

Bcn from_stacked(const LogicalMatrix& l, const LogicalMatrix& h) {
  const Index n = l.rows();
  if (l.cols() % n != 0 || h.cols() != l.cols())
    throw DimensionError("stacked L and H must both be N x NM");
  Bcn b{n, l.cols() / n, h.rows(), {}, {}};
  for (Index k = 1; k <= b.n_inputs; ++k) {
    b.transition.push_back(block(l, k, n));
    b.output.push_back(block(h, k, n));
  }
  return b;
}

std::vector<Violation> validate(const Bcn& b) {
  std::vector<Violation> out;
  if (b.n_states == 0 || b.n_inputs == 0 || b.n_outputs == 0) {
    out.push_back({Violation::Kind::arity, "", 0, 0, "N, M and P must be positive"});
    return out;
  }
  check_blocks(b.transition, "L", b.n_states, b.n_states, b.n_inputs, out);
  check_blocks(b.output, "H", b.n_outputs, b.n_states, b.n_inputs, out);
  return out;
}

void require_valid(const Bcn& b) {
  const auto v = validate(b);
  if (!v.empty()) throw DimensionError("invalid network: " + v.front().message);
}

Index step(const Bcn& b, Index x, Index u) {
  check_range(x, b.n_states, "state");
  check_range(u, b.n_inputs, "input");
  return b.L(u)(x);
}

Index output(const Bcn& b, Index x, Index u) {
  check_range(x, b.n_states, "state");
  check_range(u, b.n_inputs, "input");
  return b.H(u)(x);
}

CanonicalVector step(const Bcn& b, const CanonicalVector& x, Index u) {
  if (x.dim != b.n_states) throw DimensionError("state vector dimension differs from N");
  return {b.n_states, step(b, x.index, u)};
}

CanonicalVector output(const Bcn& b, const CanonicalVector& x, Index u) {
  if (x.dim != b.n_states) throw DimensionError("state vector dimension differs from N");
  return {b.n_outputs, output(b, x.index, u)};
}

BcnTrace simulate(const Bcn& b, Index x0, const std::vector<Index>& inputs) {
  check_range(x0, b.n_states, "initial state");
  BcnTrace tr;
  tr.states.reserve(inputs.size() + 1);
  tr.outputs.reserve(inputs.size());
  tr.states.push_back(x0);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    try {
      tr.outputs.push_back(output(b, tr.states.back(), inputs[t]));
      tr.states.push_back(step(b, tr.states.back(), inputs[t]));
    } catch (const DimensionError& e) {
      throw DimensionError(at_time(t, e.what()));
    }
  }
  return tr;
}

std::vector<std::string> validate(const Cascade& c) {
  std::vector<std::string> out;
  for (const auto& v : validate(c.upstream)) out.push_back("upstream: " + v.message);
  for (const auto& v : validate(c.downstream)) out.push_back("downstream: " + v.message);
  if (!out.empty()) return out;

  Index up = 1;
  for (const auto& f : c.upstream_inputs) {
    if (f.kind != InputFactor::Kind::external)
      out.push_back("upstream input factors must all be external");
    else if (f.dim < 2)
      out.push_back("external channel '" + f.name + "' must have dimension >= 2");
    up = checked_mul(up, f.dim == 0 ? 1 : f.dim);
  }
  if (c.upstream_inputs.empty()) out.push_back("upstream has no input factors");
  if (up != c.upstream.n_inputs) {
    std::ostringstream os;
    os << "upstream input factors multiply to " << up << ", model expects M = "
       << c.upstream.n_inputs;
    out.push_back(os.str());
  }

  Index down = 1;
  int links = 0;
  for (const auto& f : c.downstream_inputs) {
    if (f.kind == InputFactor::Kind::upstream_output) {
      ++links;
      if (f.dim != c.upstream.n_outputs) {
        std::ostringstream os;
        os << "upstream_output factor declared with dimension " << f.dim
           << ", upstream model has P = " << c.upstream.n_outputs;
        out.push_back(os.str());
      }
    } else if (f.dim < 2) {
      out.push_back("external channel '" + f.name + "' must have dimension >= 2");
    }
    down = checked_mul(down, f.dim == 0 ? 1 : f.dim);
  }
  if (links != 1) {
    std::ostringstream os;
    os << "downstream inputs must contain exactly one upstream_output factor, found " << links;
    out.push_back(os.str());
  }
  if (down != c.downstream.n_inputs) {
    std::ostringstream os;
    os << "downstream input factors multiply to " << down << ", model expects M = "
       << c.downstream.n_inputs;
    out.push_back(os.str());
  }
  return out;
}

void require_valid(const Cascade& c) {
  const auto v = validate(c);
  if (!v.empty()) throw DimensionError("invalid cascade: " + v.front());
}

std::vector<InputFactor> external_channels(const Cascade& c) {
  std::vector<InputFactor> out = c.upstream_inputs;
  for (const auto& f : c.downstream_inputs)
    if (f.kind == InputFactor::Kind::external) out.push_back(f);
  return out;
}

MixedRadixShape external_shape(const Cascade& c) { return shape_of(external_channels(c)); }

Index upstream_input(const Cascade& c, const InputRow& row) {
  const std::size_t n = c.upstream_inputs.size();
  if (row.size() < n) throw DimensionError("input row shorter than the upstream channels");
  for (std::size_t k = 0; k < n; ++k)
    check_range(row[k], c.upstream_inputs[k].dim, ("channel " + c.upstream_inputs[k].name).c_str());
  return pack(std::span(row).first(n), shape_of(c.upstream_inputs)).index;
}

Index pack_external_inputs(const Cascade& c, const InputRow& row, Index upstream_out) {
  const auto channels = external_channels(c);
  if (row.size() != channels.size()) {
    std::ostringstream os;
    os << "input row has " << row.size() << " values, cascade declares " << channels.size()
       << " channels";
    throw DimensionError(os.str());
  }
  std::vector<Index> values;
  values.reserve(c.downstream_inputs.size());
  std::size_t next = c.upstream_inputs.size();
  for (const auto& f : c.downstream_inputs) {
    if (f.kind == InputFactor::Kind::upstream_output) {
      check_range(upstream_out, f.dim, "upstream output");
      values.push_back(upstream_out);
    } else {
      check_range(row[next], f.dim, ("channel " + f.name).c_str());
      values.push_back(row[next++]);
    }
  }
  return pack(values, shape_of(c.downstream_inputs)).index;
}

Index pack_row(const Cascade& c, const InputRow& row) {
  const auto channels = external_channels(c);
  if (row.size() != channels.size()) throw DimensionError("input row arity mismatch");
  for (std::size_t k = 0; k < row.size(); ++k)
    check_range(row[k], channels[k].dim, ("channel " + channels[k].name).c_str());
  return pack(row, shape_of(channels)).index;
}

InputRow unpack_row(const Cascade& c, Index k) {
  const auto shape = external_shape(c);
  return decode(delta(shape.size(), k), shape);
}

std::vector<Index> Trace::downstream_outputs() const {
  std::vector<Index> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.downstream_output);
  return out;
}

Trace simulate_cascade(const Cascade& c, Index x0_up, Index x0_down,
                       const std::vector<InputRow>& inputs) {
  require_valid(c);
  check_range(x0_up, c.upstream.n_states, "upstream initial state");
  check_range(x0_down, c.downstream.n_states, "downstream initial state");
  Trace tr;
  tr.rows.reserve(inputs.size());
  Index xu = x0_up, xd = x0_down;
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    try {
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
    } catch (const DimensionError& e) {
      throw DimensionError(at_time(t, e.what()));
    }
  }
  tr.final_upstream_state = xu;
  tr.final_downstream_state = xd;
  return tr;
}

Bcn flatten(const Cascade& c) {
  require_valid(c);
  const Index nu = c.upstream.n_states;
  const Index nd = c.downstream.n_states;
  const Index n = checked_mul(nu, nd);
  const Index m = external_shape(c).size();

  Bcn flat{n, m, c.downstream.n_outputs, {}, {}};
  flat.transition.reserve(m);
  flat.output.reserve(m);
  for (Index k = 1; k <= m; ++k) {
    const InputRow row = unpack_row(c, k);
    const Index uu = upstream_input(c, row);
    std::vector<Index> next(n), out(n);
    for (Index i = 1; i <= nu; ++i) {
      const Index ud = pack_external_inputs(c, row, c.upstream.H(uu)(i));
      const Index inext = c.upstream.L(uu)(i);
      for (Index j = 1; j <= nd; ++j) {
        const Index x = (i - 1) * nd + j;
        next[x - 1] = (inext - 1) * nd + c.downstream.L(ud)(j);
        out[x - 1] = c.downstream.H(ud)(j);
      }
    }
    flat.transition.emplace_back(n, std::move(next));
    flat.output.emplace_back(flat.n_outputs, std::move(out));
  }
  return flat;
}

}  // namespace bcn
