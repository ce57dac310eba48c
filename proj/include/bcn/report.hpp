#ifndef BCN_REPORT_HPP
#define BCN_REPORT_HPP

// Full analysis of a cascade: equilibrium tables, attractor scan of the
// flattened network, observability and reconstructibility verdicts.

#include <string>

#include <json.hpp>

#include "bcn/network.hpp"

namespace bcn {

inline constexpr int kReportFormatVersion = 1;

struct ReportOptions {
  Index max_horizon = 8;
};

nlohmann::ordered_json report_json(const Cascade& c, const ReportOptions& opts = {});
/// Plain-text rendering of report_json.
std::string report_text(const nlohmann::ordered_json& report);

/// "δ^i_n"
std::string delta_str(Index i, Index n);

}  // namespace bcn

#endif  // BCN_REPORT_HPP
