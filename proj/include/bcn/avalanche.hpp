#ifndef BCN_AVALANCHE_HPP
#define BCN_AVALANCHE_HPP

// Context-aware avalanche alert system: a context counter over simultaneous
// earthquake and snow alerts feeding an accelerometer counter that issues
// ALARM / ATTENTION / NORMAL.
//
// Value encodings (1-based canonical indices):
//   context input u   : 1 = (earthquake, snow), 2 = (earthquake, no snow),
//                       3 = (no earthquake, snow), 4 = neither
//   binary channels   : 1 = high / danger, 2 = low / quiet
//   functional input v: v1 v2 v3 v4 packed left to right (temp, snow height,
//                       accelerometer, context alert)
//   functional output : 1 = ALARM, 2 = ATTENTION, 3 = NORMAL

#include "bcn/network.hpp"

namespace bcn::avalanche {

enum class ResetPolicy { reset_to_zero, decrement };

struct Params {
  Index ctx_threshold = 4;
  Index acc_threshold = 2;
  ResetPolicy reset_policy = ResetPolicy::reset_to_zero;
};

inline constexpr Index kHigh = 1;
inline constexpr Index kLow = 2;
inline constexpr Index kDanger = 1;
inline constexpr Index kQuiet = 2;
inline constexpr Index kAlarm = 1;
inline constexpr Index kAttention = 2;
inline constexpr Index kNormal = 3;
inline constexpr Index kBothAlerts = 1;  // u = delta^1_4

enum class Alert { alarm = 1, attention = 2, normal = 3 };

/// Classification of (temp, snow, counter state, accelerometer, context).
Alert classify(const Params& p, Index temp, Index snow, Index acc_state, Index acc, Index ctx);

void check(const Params& p);

Bcn build_context(const Params& p = {});
Bcn build_functional(const Params& p = {});
Cascade build_cascade(const Params& p = {});

const char* to_string(ResetPolicy r);
const char* alert_name(Index m);

}  // namespace bcn::avalanche

#endif  // BCN_AVALANCHE_HPP
