#include "bcn/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace bcn {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::string_view text;  // comment stripped, not trimmed
};

std::vector<Line> split_lines(std::string_view text, bool strip_comments) {
  std::vector<Line> out;
  std::size_t n = 1, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (strip_comments) {
      if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
    }
    out.push_back({n++, l});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view s, std::size_t offset = 0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back({s.substr(start, i - start), offset + start + 1});
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<Index> to_index(std::string_view s) {
  Index v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

Index expect_index(const Token& t, std::size_t line, const char* what) {
  auto v = to_index(t.text);
  if (!v)
    throw ParseError(line, t.column,
                     std::string("expected ") + what + ", got '" + std::string(t.text) + "'");
  return *v;
}

std::string located(std::size_t line, std::size_t column, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << what;
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error(located(line, column, what)), line_(line), column_(column) {}

Bcn parse_model(std::string_view text) {
  enum class State { start, body, done };
  State state = State::start;
  std::optional<Index> n, m, p;
  std::map<Index, std::pair<std::vector<Index>, std::size_t>> l_blocks, h_blocks;
  std::optional<std::pair<std::vector<Index>, std::size_t>> h_all;
  std::size_t last_line = 1;

  for (const Line& line : split_lines(text, true)) {
    const auto toks = tokenize(line.text);
    if (toks.empty()) continue;
    last_line = line.number;
    const auto kw = toks[0].text;
    if (state == State::done)
      throw ParseError(line.number, toks[0].column, "content after END");
    if (state == State::start) {
      if (kw != "BCN" || toks.size() != 1)
        throw ParseError(line.number, toks[0].column, "expected 'BCN' header");
      state = State::body;
      continue;
    }
    if (kw == "END") {
      state = State::done;
      continue;
    }
    if (kw == "N" || kw == "M" || kw == "P") {
      if (toks.size() != 2)
        throw ParseError(line.number, toks[0].column, std::string(kw) + " takes one integer");
      const Index v = expect_index(toks[1], line.number, "a positive integer");
      if (v == 0) throw ParseError(line.number, toks[1].column, "dimension must be positive");
      auto& slot = kw == "N" ? n : kw == "M" ? m : p;
      if (slot) throw ParseError(line.number, toks[0].column, "duplicate " + std::string(kw));
      slot = v;
      continue;
    }
    if (kw == "L" || kw == "H") {
      if (!n || !m || !p)
        throw ParseError(line.number, toks[0].column, "N, M and P must precede the blocks");
      const auto colon = line.text.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(line.number, toks[0].column, "missing ':' after block label");
      const auto head = tokenize(line.text.substr(0, colon));
      if (head.size() != 2)
        throw ParseError(line.number, toks[0].column, "expected '" + std::string(kw) + " <k>:'");
      const auto body = tokenize(line.text.substr(colon + 1), colon + 1);
      const Index rows = kw == "L" ? *n : *p;
      std::vector<Index> idx;
      for (const auto& t : body) {
        const Index v = expect_index(t, line.number, "a column index");
        if (v == 0 || v > rows) {
          std::ostringstream os;
          os << "index " << v << " outside [1, " << rows << "]";
          throw ParseError(line.number, t.column, os.str());
        }
        idx.push_back(v);
      }
      if (idx.size() != *n) {
        std::ostringstream os;
        os << kw << " block lists " << idx.size() << " indices, expected N = " << *n;
        throw ParseError(line.number, toks[0].column, os.str());
      }
      if (kw == "H" && head[1].text == "*") {
        if (h_all || !h_blocks.empty())
          throw ParseError(line.number, head[1].column, "duplicate H blocks");
        h_all.emplace(std::move(idx), line.number);
        continue;
      }
      const Index k = expect_index(head[1], line.number, "a block index");
      if (k == 0 || k > *m) {
        std::ostringstream os;
        os << "block index " << k << " outside [1, " << *m << "]";
        throw ParseError(line.number, head[1].column, os.str());
      }
      auto& blocks = kw == "L" ? l_blocks : h_blocks;
      if (kw == "H" && h_all)
        throw ParseError(line.number, head[1].column, "H " + std::to_string(k) +
                                                          " conflicts with 'H *'");
      if (!blocks.try_emplace(k, std::move(idx), line.number).second)
        throw ParseError(line.number, head[1].column,
                         "duplicate " + std::string(kw) + " " + std::to_string(k));
      continue;
    }
    throw ParseError(line.number, toks[0].column, "unknown keyword '" + std::string(kw) + "'");
  }

  if (state == State::start) throw ParseError(last_line, 1, "empty model file");
  if (state != State::done) throw ParseError(last_line, 1, "missing END");
  if (!n || !m || !p) throw ParseError(last_line, 1, "N, M and P are required");

  Bcn b{*n, *m, *p, {}, {}};
  for (Index k = 1; k <= *m; ++k) {
    auto it = l_blocks.find(k);
    if (it == l_blocks.end()) throw ParseError(last_line, 1, "missing L " + std::to_string(k));
    b.transition.emplace_back(*n, it->second.first);
    if (h_all) {
      b.output.emplace_back(*p, h_all->first);
    } else {
      auto ht = h_blocks.find(k);
      if (ht == h_blocks.end()) throw ParseError(last_line, 1, "missing H " + std::to_string(k));
      b.output.emplace_back(*p, ht->second.first);
    }
  }
  return b;
}

std::string print_model(const Bcn& b) {
  require_valid(b);
  std::ostringstream os;
  auto row = [&](const LogicalMatrix& blk) {
    for (Index j = 1; j <= blk.cols(); ++j) os << ' ' << blk(j);
    os << '\n';
  };
  os << "BCN\nN " << b.n_states << "\nM " << b.n_inputs << "\nP " << b.n_outputs << '\n';
  for (Index k = 1; k <= b.n_inputs; ++k) {
    os << "L " << k << ':';
    row(b.L(k));
  }
  const bool replicated =
      b.n_inputs > 1 && std::all_of(b.output.begin(), b.output.end(),
                                    [&](const LogicalMatrix& h) { return h == b.output[0]; });
  if (replicated) {
    os << "H *:";
    row(b.output[0]);
  } else {
    for (Index k = 1; k <= b.n_inputs; ++k) {
      os << "H " << k << ':';
      row(b.H(k));
    }
  }
  os << "END\n";
  return os.str();
}

namespace {

std::vector<InputFactor> parse_factors(std::string_view rest, std::size_t line,
                                       std::size_t offset, bool allow_link,
                                       Index link_dim) {
  std::vector<InputFactor> out;
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t end = rest.find(';', pos);
    if (end == std::string_view::npos) end = rest.size();
    const auto toks = tokenize(rest.substr(pos, end - pos), offset + pos);
    const std::size_t col = offset + pos + 1;
    if (toks.empty()) throw ParseError(line, col, "empty input factor");
    if (toks[0].text == "upstream_output") {
      if (!allow_link)
        throw ParseError(line, toks[0].column, "upstream_output is only valid downstream");
      if (toks.size() != 1)
        throw ParseError(line, toks[1].column, "upstream_output takes no arguments");
      out.push_back(InputFactor::upstream_output(link_dim));
    } else if (toks[0].text == "ext") {
      if (toks.size() != 3) throw ParseError(line, toks[0].column, "expected 'ext <name> <dim>'");
      const Index dim = expect_index(toks[2], line, "a channel dimension");
      if (dim < 2) throw ParseError(line, toks[2].column, "channel dimension must be >= 2");
      out.push_back(InputFactor::external(std::string(toks[1].text), dim));
    } else {
      throw ParseError(line, toks[0].column,
                       "unknown input factor '" + std::string(toks[0].text) + "'");
    }
    if (end == rest.size()) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace

Cascade parse_cascade(std::string_view text, const ModelLoader& load) {
  bool started = false, done = false;
  std::optional<std::string> up_path, down_path;
  std::optional<std::pair<std::string_view, std::size_t>> up_in, down_in;  // (rest, line)
  std::size_t up_off = 0, down_off = 0, last_line = 1;

  for (const Line& line : split_lines(text, true)) {
    const auto toks = tokenize(line.text);
    if (toks.empty()) continue;
    last_line = line.number;
    const auto kw = toks[0].text;
    if (done) throw ParseError(line.number, toks[0].column, "content after END");
    if (!started) {
      if (kw != "CASCADE" || toks.size() != 1)
        throw ParseError(line.number, toks[0].column, "expected 'CASCADE' header");
      started = true;
      continue;
    }
    const std::size_t after = toks[0].column - 1 + kw.size();
    const auto rest = line.text.substr(after);
    if (kw == "END") {
      done = true;
    } else if (kw == "UPSTREAM" || kw == "DOWNSTREAM") {
      auto& slot = kw == "UPSTREAM" ? up_path : down_path;
      if (slot) throw ParseError(line.number, toks[0].column, "duplicate " + std::string(kw));
      if (trim(rest).empty()) throw ParseError(line.number, after + 1, "missing model path");
      slot = std::string(trim(rest));
    } else if (kw == "UPSTREAM_INPUT" || kw == "DOWNSTREAM_INPUT") {
      auto& slot = kw == "UPSTREAM_INPUT" ? up_in : down_in;
      if (slot) throw ParseError(line.number, toks[0].column, "duplicate " + std::string(kw));
      slot.emplace(rest, line.number);
      (kw == "UPSTREAM_INPUT" ? up_off : down_off) = after;
    } else {
      throw ParseError(line.number, toks[0].column,
                       "unknown keyword '" + std::string(kw) + "'");
    }
  }
  if (!started) throw ParseError(last_line, 1, "empty cascade file");
  if (!done) throw ParseError(last_line, 1, "missing END");
  if (!up_path) throw ParseError(last_line, 1, "missing UPSTREAM");
  if (!down_path) throw ParseError(last_line, 1, "missing DOWNSTREAM");
  if (!up_in) throw ParseError(last_line, 1, "missing UPSTREAM_INPUT");
  if (!down_in) throw ParseError(last_line, 1, "missing DOWNSTREAM_INPUT");

  Cascade c;
  c.upstream = load(*up_path);
  c.downstream = load(*down_path);
  c.upstream_inputs = parse_factors(up_in->first, up_in->second, up_off, false, 0);
  c.downstream_inputs =
      parse_factors(down_in->first, down_in->second, down_off, true, c.upstream.n_outputs);

  if (const auto errs = validate(c); !errs.empty()) {
    std::string msg = "cascade wiring: " + errs.front();
    for (std::size_t k = 1; k < errs.size(); ++k) msg += "; " + errs[k];
    throw DimensionError(msg);
  }
  return c;
}

std::string print_cascade(const Cascade& c, const std::string& upstream_path,
                          const std::string& downstream_path) {
  std::ostringstream os;
  auto factors = [&](const std::vector<InputFactor>& fs) {
    for (std::size_t k = 0; k < fs.size(); ++k) {
      os << (k ? "; " : " ");
      if (fs[k].kind == InputFactor::Kind::upstream_output)
        os << "upstream_output";
      else
        os << "ext " << fs[k].name << ' ' << fs[k].dim;
    }
    os << '\n';
  };
  os << "CASCADE\nUPSTREAM " << upstream_path << "\nDOWNSTREAM " << downstream_path
     << "\nUPSTREAM_INPUT";
  factors(c.upstream_inputs);
  os << "DOWNSTREAM_INPUT";
  factors(c.downstream_inputs);
  os << "END\n";
  return os.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open '" + p.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

Bcn load_model(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  try {
    Bcn b = parse_model(text);
    require_valid(b);
    return b;
  } catch (const Error& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

Cascade load_cascade(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  const auto dir = p.parent_path();
  try {
    return parse_cascade(text, [&](const std::string& rel) {
      const std::filesystem::path mp(rel);
      return load_model(mp.is_absolute() ? mp : dir / mp);
    });
  } catch (const ParseError& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

namespace {

std::vector<std::string_view> split_csv(std::string_view l) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = l.find(',', pos);
    if (end == std::string_view::npos) end = l.size();
    out.push_back(trim(l.substr(pos, end - pos)));
    if (end == l.size()) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace

TraceInput parse_trace_csv(std::string_view text, const Cascade& c) {
  const auto channels = external_channels(c);
  const auto lines = split_lines(text, false);
  std::size_t k = 0;
  while (k < lines.size() && trim(lines[k].text).empty()) ++k;
  if (k == lines.size()) throw ParseError(1, 1, "empty trace file");

  const auto header = split_csv(lines[k].text);
  const std::size_t header_line = lines[k].number;
  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(std::string(header[i]), i).second)
      throw ParseError(header_line, 1, "duplicate column '" + std::string(header[i]) + "'");
  }
  if (header.empty() || header[0] != "t")
    throw ParseError(header_line, 1, "first column must be 't'");
  std::vector<std::size_t> channel_col;
  for (const auto& ch : channels) {
    auto it = col.find(ch.name);
    if (it == col.end()) throw ParseError(header_line, 1, "missing channel column '" + ch.name + "'");
    channel_col.push_back(it->second);
  }
  std::optional<std::size_t> obs_col;
  if (auto it = col.find("m_obs"); it != col.end())
    obs_col = it->second;
  else if (auto jt = col.find("m"); jt != col.end())
    obs_col = jt->second;
  for (const auto& [name, _] : col) {
    const bool known = name == "t" || name == "m_obs" || name == "c" || name == "a" ||
                       name == "v4" || name == "m" ||
                       std::any_of(channels.begin(), channels.end(),
                                   [&](const InputFactor& f) { return f.name == name; });
    if (!known) throw ParseError(header_line, 1, "unknown column '" + name + "'");
  }

  TraceInput out;
  if (obs_col) out.observed.emplace();
  Index expected_t = 0;
  for (++k; k < lines.size(); ++k) {
    if (trim(lines[k].text).empty()) continue;
    const auto fields = split_csv(lines[k].text);
    const std::size_t ln = lines[k].number;
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << "row has " << fields.size() << " fields, header has " << header.size();
      throw ParseError(ln, 1, os.str());
    }
    auto field = [&](std::size_t i, Index lo, Index hi, const std::string& name) {
      auto v = to_index(fields[i]);
      if (!v || *v < lo || *v > hi) {
        std::ostringstream os;
        os << "column '" << name << "': '" << fields[i] << "' is not in [" << lo << ", " << hi
           << "]";
        throw ParseError(ln, i + 1, os.str());
      }
      return *v;
    };
    const Index t = field(0, 0, static_cast<Index>(-1), "t");
    if (t != expected_t) {
      std::ostringstream os;
      os << "expected t = " << expected_t << ", got " << t;
      throw ParseError(ln, 1, os.str());
    }
    ++expected_t;
    InputRow row;
    for (std::size_t ch = 0; ch < channels.size(); ++ch)
      row.push_back(field(channel_col[ch], 1, channels[ch].dim, channels[ch].name));
    out.inputs.push_back(std::move(row));
    if (obs_col) out.observed->push_back(field(*obs_col, 1, c.downstream.n_outputs, "m_obs"));
  }
  return out;
}

std::string print_inputs_csv(const Cascade& c, const std::vector<InputRow>& inputs,
                             const std::optional<std::vector<Index>>& observed) {
  std::ostringstream os;
  os << 't';
  for (const auto& ch : external_channels(c)) os << ',' << ch.name;
  if (observed) os << ",m_obs";
  os << '\n';
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    os << t;
    for (Index v : inputs[t]) os << ',' << v;
    if (observed) os << ',' << (*observed)[t];
    os << '\n';
  }
  return os.str();
}

std::string print_trace_csv(const Cascade& c, const Trace& tr) {
  const bool has_obs = std::any_of(tr.rows.begin(), tr.rows.end(),
                                   [](const TraceRow& r) { return r.observed.has_value(); });
  std::ostringstream os;
  os << 't';
  for (const auto& ch : external_channels(c)) os << ',' << ch.name;
  if (has_obs) os << ",m_obs";
  os << ",c,a,v4,m\n";
  for (std::size_t t = 0; t < tr.rows.size(); ++t) {
    const auto& r = tr.rows[t];
    os << t;
    for (Index v : r.inputs) os << ',' << v;
    if (has_obs) os << ',' << (r.observed ? std::to_string(*r.observed) : std::string());
    os << ',' << r.upstream_state << ',' << r.downstream_state << ',' << r.upstream_output
       << ',' << r.downstream_output << '\n';
  }
  return os.str();
}

}  // namespace bcn
