#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod integration on a set of
// initial panels. The panel with the largest error estimate is bisected
// until the summed estimate meets the tolerance.

#include <cstddef>
#include <functional>
#include <vector>

namespace ddw {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_panels = 20000;
};

/// Integrates f over [breaks.front(), breaks.back()], starting from the panels
/// delimited by `breaks` (sorted ascending, at least two entries).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, const std::vector<double>& breaks,
                                    const QuadratureOptions& options = {});

/// Breakpoints uniformly spaced in log(x) on [lo, hi] with roughly `per_decade`
/// panels per decade, merged with the extra points that fall inside.
std::vector<double> log_panels(double lo, double hi, double per_decade, std::vector<double> extra = {});

}  // namespace ddw
