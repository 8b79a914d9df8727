#include "ddwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "ddwave/params.hpp"

namespace ddw {

namespace {

// Kronrod abscissae (descending) and weights; every other node is a Gauss node.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += wgk[j] * pair;
        if (j % 2 == 1) gauss += wg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, const std::vector<double>& breaks,
                                    const QuadratureOptions& options)
{
    if (breaks.size() < 2) throw ValidationError("integrate_adaptive: need at least two breakpoints");
    if (!std::is_sorted(breaks.begin(), breaks.end())) throw ValidationError("integrate_adaptive: breakpoints must ascend");

    std::priority_queue<Panel> heap;
    QuadratureResult out;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (breaks[k + 1] <= breaks[k]) continue;
        const Panel p = kronrod15(f, breaks[k], breaks[k + 1]);
        out.value += p.value;
        out.error += p.error;
        out.evaluations += 15;
        heap.push(p);
    }
    while (!heap.empty()) {
        if (out.error <= std::max(options.abs_tol, options.rel_tol * std::abs(out.value))) {
            out.converged = true;
            break;
        }
        if (heap.size() >= options.max_panels) break;
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = kronrod15(f, worst.lo, mid);
        const Panel right = kronrod15(f, mid, worst.hi);
        out.evaluations += 30;
        out.value += left.value + right.value - worst.value;
        out.error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    out.panels = heap.size();
    // Re-sum from the panels to shed the drift of the running updates.
    double value = 0.0, error = 0.0;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    for (const Panel& p : panels) {
        value += p.value;
        error += p.error;
    }
    out.value = value;
    out.error = error;
    if (!out.converged) out.converged = error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
    return out;
}

std::vector<double> log_panels(double lo, double hi, double per_decade, std::vector<double> extra)
{
    if (!(lo > 0.0 && hi > lo)) throw ValidationError("log_panels: need 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(decades * per_decade)));
    std::vector<double> breaks;
    breaks.reserve(count + 1 + extra.size());
    for (std::size_t k = 0; k <= count; ++k)
        breaks.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(count)));
    breaks.back() = hi;
    for (double x : extra)
        if (x > lo && x < hi) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

}  // namespace ddw
