#ifndef BCN_IO_HPP
#define BCN_IO_HPP

// Text formats: model files (.bcn), cascade files (.cascade) and trace CSV.
//
// Model grammar (line oriented, '#' starts a comment, blank lines ignored):
//   BCN
//   N <int>
//   M <int>
//   P <int>
//   L <k>: i1 ... iN        for k = 1..M
//   H <k>: j1 ... jN        or a single "H *: j1 ... jN" replicated over all k
//   END
//
// Cascade grammar:
//   CASCADE
//   UPSTREAM <path>
//   DOWNSTREAM <path>
//   UPSTREAM_INPUT ext <name> <dim> [; ext <name> <dim> ...]
//   DOWNSTREAM_INPUT <factor> [; <factor> ...]   factor: ext <name> <dim> | upstream_output
//   END
//
// Trace CSV: header "t,<channel>...[,m_obs]"; written traces append
// "c,a,v4,m" (upstream state, downstream state, upstream output, output).

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcn/network.hpp"

namespace bcn {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Bcn parse_model(std::string_view text);
std::string print_model(const Bcn& b);

using ModelLoader = std::function<Bcn(const std::string& path)>;

Cascade parse_cascade(std::string_view text, const ModelLoader& load);
std::string print_cascade(const Cascade& c, const std::string& upstream_path,
                          const std::string& downstream_path);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view text);
Bcn load_model(const std::filesystem::path& p);
/// Model paths are resolved relative to the cascade file's directory.
Cascade load_cascade(const std::filesystem::path& p);

struct TraceInput {
  std::vector<InputRow> inputs;
  std::optional<std::vector<Index>> observed;
};

/// Reads the external channels (by header name) and, if present, the
/// observed output: column m_obs, or m for a previously written trace.
TraceInput parse_trace_csv(std::string_view text, const Cascade& c);
std::string print_trace_csv(const Cascade& c, const Trace& tr);
std::string print_inputs_csv(const Cascade& c, const std::vector<InputRow>& inputs,
                             const std::optional<std::vector<Index>>& observed = std::nullopt);

}  // namespace bcn

#endif  // BCN_IO_HPP
