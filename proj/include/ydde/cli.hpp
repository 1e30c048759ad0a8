#pragma once

namespace ydde::cli {

/// Exit codes: 0 success, 1 a check failed or the solver failed, 2 bad
/// configuration or usage.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kConfigError = 2;

/// Entry point of the `ydde` tool.
int run(int argc, const char* const* argv);

}  // namespace ydde::cli
