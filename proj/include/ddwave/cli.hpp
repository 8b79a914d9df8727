#pragma once

#include <iosfwd>

namespace ddw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitAcceptance = 2;

/// Entry point of the `ddwave` tool:
///   ddwave <eig-sweep|stability-scan|pointwise-fit|simulate|decay-study|
///           diffusion-study|gevrey-check|verify-all> [--config FILE]
///          [--a A] [--b B] [--rho R] [--theta T] [--out DIR] [--threads N]
/// Returns 0 on success, 1 on a configuration error, 2 when a check fails.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ddw::cli
