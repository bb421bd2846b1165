#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "priorlab/errors.hpp"
#include "priorlab/interval.hpp"

namespace priorlab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_panels = 100000;
    double divergence_ceiling = 1e12;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]. Odd-indexed Kronrod abscissae are the
// embedded 7-point Gauss nodes (index 7 is the center).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
    double value;
    double error;
};

template <class F>
PanelEval gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = kGK15Nodes[i];
        const double xl = c - h * x;
        const double vl = f(xl);
        if (std::isnan(vl) || std::isinf(vl)) throw NonFiniteError(xl);
        double pair_sum = vl;
        if (i < 7) {
            const double xr = c + h * x;
            const double vr = f(xr);
            if (std::isnan(vr) || std::isinf(vr)) throw NonFiniteError(xr);
            pair_sum += vr;
        }
        kron += kGK15Weights[i] * pair_sum;
        if (i % 2 == 1 || i == 7) gauss += kG7Weights[i / 2] * pair_sum;
    }
    return {kron * h, std::abs(kron - gauss) * h};
}

struct Panel {
    double a, b, value, error;
    std::uint64_t seq;  // deterministic tie-break
};
struct PanelCmp {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.seq > y.seq;
    }
};

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = false;
};

// Worst-panel-first bisection; panel widths floored at 1e-14 of the interval.
template <class F>
AdaptiveResult adaptive(const F& f, double a, double b, double abs_tol, double rel_tol,
                        int& budget) {
    AdaptiveResult out;
    if (!(b > a) || budget <= 0) {
        out.converged = b <= a;
        return out;
    }
    const double floor_width = 1e-14 * (b - a);
    std::priority_queue<Panel, std::vector<Panel>, PanelCmp> heap;
    std::uint64_t seq = 0;
    double total = 0.0, toterr = 0.0;
    auto eval_push = [&](double lo, double hi) {
        PanelEval pe = gk15(f, lo, hi);
        total += pe.value;
        toterr += pe.error;
        heap.push(Panel{lo, hi, pe.value, pe.error, seq++});
        --budget;
        ++out.panels;
    };
    eval_push(a, b);
    while (budget > 0) {
        if (toterr <= std::max(abs_tol, rel_tol * std::abs(total))) break;
        Panel worst = heap.top();
        if (worst.b - worst.a <= floor_width) break;  // cannot refine further
        heap.pop();
        total -= worst.value;
        toterr -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        eval_push(worst.a, mid);
        eval_push(mid, worst.b);
    }
    out.value = total;
    out.error = toterr;
    out.converged = toterr <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

enum class TailStatus { Converged, Divergent, Stalled };

struct TailResult {
    double sum = 0.0;   // mass over the explicit windows
    double tail = 0.0;  // extrapolated remainder beyond the last window
    double error = 0.0;
    TailStatus status = TailStatus::Stalled;
    int windows = 0;
    double last_ratio = -1.0;
    // best Richardson estimate of the limiting increment ratio and its error
    // bar; meaningful even when the series stalls (est_rho < 0 when none)
    double est_rho = -1.0;
    double est_rho_err = -1.0;
};

// A geometric window schedule: either shrinking toward a finite open/singular
// endpoint or growing toward an infinite one. window(k) returns [lo, hi].
struct WindowSchedule {
    enum class Kind { ShrinkToLower, ShrinkToUpper, GrowUp, GrowDown } kind;
    double anchor;  // the endpoint (shrink) or the core boundary (grow)
    double scale;   // initial window extent, > 0
    double growth;  // geometric ratio, > 1

    std::pair<double, double> operator()(int k) const {
        const double gk = std::pow(growth, double(k));
        const double gk1 = gk * growth;
        switch (kind) {
            case Kind::ShrinkToLower: {
                const double lo = anchor + scale / gk1;
                // rounding onto the anchor means no representable domain remains
                if (lo == anchor) return {anchor, anchor};
                return {lo, anchor + scale / gk};
            }
            case Kind::ShrinkToUpper: {
                const double hi = anchor - scale / gk1;
                if (hi == anchor) return {anchor, anchor};
                return {anchor - scale / gk, hi};
            }
            case Kind::GrowUp: {
                const double hi = anchor + scale * (gk1 - 1.0);
                return {anchor + scale * (gk - 1.0), std::isfinite(hi) ? hi : 0.0};
            }
            default: {  // GrowDown
                const double lo = anchor - scale * (gk1 - 1.0);
                return {std::isfinite(lo) ? lo : 0.0, anchor - scale * (gk - 1.0)};
            }
        }
    }
};

// Sums f over the window schedule and extrapolates the remainder once the
// increment ratio inc_k/inc_{k-1} settles; geometric-series extrapolation is
// exact for power-law behavior at the endpoint, which is what lets endpoint
// mass below representable theta (Beta/Gamma exponents 1/n at large n) be
// accounted for.
template <class F>
TailResult window_series(const F& f, const WindowSchedule& window, int kmax, double abs_tol,
                         double rel_tol, double ceiling, int& budget) {
    TailResult out;
    double prev_inc = -1.0, prev_ratio = -1.0;
    int settled = 0;
    double best_proj = kInf, best_proj_mark = kInf;
    double best_sum = 0.0, best_err = 0.0, best_tail = 0.0, best_last_ratio = -1.0;
    int best_windows = 0;
    int since_best = 0;
    std::vector<double> ratios;
    // windows feed an extrapolation amplified by 1/(1-rho)^2, so they are
    // integrated much tighter than the overall goal; they are single-octave
    // smooth integrands, so the extra refinement is cheap
    const double rel_w = rel_tol * 1e-6;
    double relerr_prev = 0.0;
    // takes the lowest-projection Richardson candidate; used when the schedule
    // runs out of representable windows (boundary quantization near the anchor
    // corrupts late ratios, so the best estimate predates exhaustion)
    auto accept_best = [&]() {
        out.sum = best_sum;
        out.tail = best_tail;
        out.error = best_err + best_proj;
        out.windows = best_windows;
        out.last_ratio = best_last_ratio;
        out.status = TailStatus::Converged;
    };
    for (int k = 0; k < kmax && budget > 0; ++k) {
        auto [lo, hi] = window(k);
        if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
            // schedule under/overflowed: no representable domain remains
            if (best_proj < kInf) {
                accept_best();
            } else if (out.est_rho >= 0.0 &&
                       out.est_rho >= 1.0 - std::max(1e-9, 3.0 * out.est_rho_err)) {
                // increment ratio consistent with 1: the remainder is a
                // non-summable geometric comparison, not a finite tail
                out.status = TailStatus::Divergent;
            } else if (out.est_rho >= 0.0) {
                // settled below 1 but never resolved above noise: ambiguous
                out.status = TailStatus::Stalled;
            } else if (prev_ratio >= 0.0 && prev_ratio < 1.0 - 1e-9) {
                out.status = TailStatus::Converged;
                if (prev_inc > 0.0) {
                    out.tail = prev_inc * prev_ratio / (1.0 - prev_ratio);
                    out.error += std::abs(out.tail) * 1e-9;
                }
            } else if (prev_inc >= 0.0 && prev_inc <= abs_tol) {
                out.status = TailStatus::Converged;
            }
            return out;
        }
        const double wtol = abs_tol / ((k + 2.0) * (k + 2.0));
        int wbudget = std::min(budget, 64);  // one window never eats the global budget
        const int wb0 = wbudget;
        AdaptiveResult ar = adaptive(f, lo, hi, wtol, rel_w, wbudget);
        budget -= wb0 - wbudget;
        out.sum += ar.value;
        out.error += ar.error;
        ++out.windows;
        if (std::abs(out.sum) > ceiling) {
            out.status = TailStatus::Divergent;
            return out;
        }
        const double inc = ar.value;
        // negligible remainder: increments collapsed relative to the total
        if (inc <= std::max(abs_tol * 1e-2, 1e-14 * std::abs(out.sum)) &&
            (prev_ratio < 0.0 || prev_ratio < 0.9)) {
            out.tail = std::max(inc, 0.0);
            out.error += out.tail;
            out.status = TailStatus::Converged;
            out.last_ratio = prev_ratio;
            return out;
        }
        const double relerr_cur = inc > 0.0 ? ar.error / inc : 0.0;
        // window boundaries round onto the floating-point grid near the anchor;
        // the induced relative perturbation of an increment is ~ulp/width and
        // becomes the dominant ratio noise for the innermost shrink windows
        const double quant = 2.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(lo), std::abs(hi)) / (hi - lo);
        if (prev_inc > 0.0 && inc > 0.0) {
            const double ratio = inc / prev_inc;
            ratios.push_back(ratio);
            if (prev_ratio >= 0.0) {
                const double drift = std::abs(ratio - prev_ratio);
                const double settle_tol = std::max(1e-9, 1e-3 * std::max(1e-12, 1.0 - ratio));
                settled = (drift <= std::max(settle_tol, 4.0 * quant)) ? settled + 1 : 0;
                if (settled >= 3 && ratios.size() >= 3) {
                    out.last_ratio = ratio;
                    // Iterated Richardson: for analytic integrands on a geometric
                    // schedule, ratio_k = rho (1 + c gamma^k + O(gamma^{2k})) with
                    // gamma = 1/growth; extrapolating removes the systematic term
                    // well before the quantization noise floor near the endpoint.
                    const double g1 = window.growth - 1.0;
                    const double g2 = window.growth * window.growth - 1.0;
                    const std::size_t m = ratios.size();
                    const double r1a = ratios[m - 2] + (ratios[m - 2] - ratios[m - 3]) / g1;
                    const double r1b = ratios[m - 1] + (ratios[m - 1] - ratios[m - 2]) / g1;
                    double rho = r1b + (r1b - r1a) / g2;
                    // Richardson amplifies quadrature noise in the ratio ~5x
                    const double noise = 5.0 * (relerr_cur + relerr_prev) * ratio + quant;
                    double err_rho = std::abs(rho - r1b) + 0.5 * std::abs(r1b - r1a) + noise;
                    if (!(rho > 0.0) || rho > 1.5) {  // noise-dominated: fall back
                        rho = ratio;
                        err_rho = drift + noise;
                    }
                    if (out.est_rho < 0.0 || err_rho < out.est_rho_err) {
                        out.est_rho = rho;
                        out.est_rho_err = err_rho;
                    }
                    // non-decaying increments, resolved above the noise level;
                    // ambiguous rho ~ 1 falls through to the gate below and is
                    // classified from est_rho once the schedule runs out
                    if (rho - 3.0 * err_rho >= 1.0 - 1e-9) {
                        out.status = TailStatus::Divergent;
                        return out;
                    }
                    const double omr = 1.0 - rho;
                    // rho indistinguishable from 1 at this noise level: the
                    // 1/(1-rho) extrapolation would be meaningless, keep going
                    if (omr <= 3.0 * err_rho) {
                        prev_ratio = ratio;
                        out.last_ratio = ratio;
                        prev_inc = inc;
                        relerr_prev = relerr_cur;
                        continue;
                    }
                    const double eps_k = ratio / rho - 1.0;  // residual correction c gamma^k
                    const double s1 = rho / omr;
                    const double s2 = (rho / window.growth) / (1.0 - rho / window.growth);
                    const double tail_est = inc * ((1.0 + eps_k) * s1 - eps_k * s2);
                    const double proj = err_rho * inc / (omr * omr) +
                                        eps_k * eps_k * std::abs(inc) * s1 +
                                        std::abs(tail_est) * 1e-14;
                    const double goal =
                        std::max(abs_tol, rel_tol * (std::abs(out.sum) + std::abs(tail_est)));
                    if (proj < best_proj) {
                        best_proj = proj;
                        best_sum = out.sum;
                        best_err = out.error;
                        best_tail = tail_est;
                        best_windows = out.windows;
                        best_last_ratio = ratio;
                    }
                    since_best = (proj < 0.7 * best_proj_mark) ? 0 : since_best + 1;
                    if (proj < 0.7 * best_proj_mark) best_proj_mark = proj;
                    if (proj <= goal || since_best >= 6) {
                        // accept the lowest-projection candidate seen: its tail
                        // already accounts for everything beyond its window
                        accept_best();
                        return out;
                    }
                }
            }
            prev_ratio = ratio;
            out.last_ratio = ratio;
        } else if (inc <= 0.0 && k > 0) {
            // integrand underflowed to exact zero: nothing left beyond
            out.status = TailStatus::Converged;
            return out;
        }
        prev_inc = inc;
        relerr_prev = relerr_cur;
    }
    if (best_proj < kInf) {
        accept_best();
        return out;
    }
    out.status = TailStatus::Stalled;
    return out;
}

struct Decomposition {
    double core_lo = 0.0, core_hi = 0.0;
    std::vector<WindowSchedule> series;  // lower-end schedule first when present
};

// Splits iv into a closed core for plain adaptive quadrature plus window
// schedules for open/singular finite endpoints and infinite ends.
inline Decomposition decompose(const Interval& iv, double growth = 2.0) {
    Decomposition d;
    const double W = iv.bounded() ? iv.width() : 2.0;
    if (iv.lower_finite() && !iv.lower_open) {
        d.core_lo = iv.lower;
    } else if (iv.lower_finite()) {
        d.core_lo = iv.lower + 0.25 * W;
        d.series.push_back({WindowSchedule::Kind::ShrinkToLower, iv.lower, 0.25 * W, growth});
    } else {
        d.core_lo = iv.upper_finite() ? iv.upper - W : -1.0;
        d.series.push_back({WindowSchedule::Kind::GrowDown, d.core_lo,
                            std::max(1.0, std::abs(d.core_lo)), growth});
    }
    if (iv.upper_finite() && !iv.upper_open) {
        d.core_hi = iv.upper;
    } else if (iv.upper_finite()) {
        d.core_hi = iv.upper - 0.25 * W;
        d.series.push_back({WindowSchedule::Kind::ShrinkToUpper, iv.upper, 0.25 * W, growth});
    } else {
        d.core_hi = iv.lower_finite() ? d.core_lo + W : 1.0;
        d.series.push_back({WindowSchedule::Kind::GrowUp, d.core_hi,
                            std::max(1.0, std::abs(d.core_hi)), growth});
    }
    return d;
}

}  // namespace detail

// Deterministic adaptive quadrature over bounded, half-infinite and
// singular-endpoint intervals. Open finite endpoints and infinite ends are
// handled by geometric window series with increment-ratio extrapolation of the
// remainder, so integrable power-law singularities theta^{p-1} converge for
// any p > 0.
inline QuadratureResult integrate(const std::function<double(double)>& f, const Interval& iv,
                                  QuadratureOptions opt = {}) {
    if (!iv.valid()) throw Error("integrate: invalid interval");
    if (!(opt.abs_tol > 0) || !(opt.rel_tol > 0)) throw Error("integrate: tolerances must be > 0");
    int budget = opt.max_panels;
    QuadratureResult out;

    detail::Decomposition d = detail::decompose(iv);
    const double share = 1.0 / (1.0 + double(d.series.size()));
    detail::AdaptiveResult core =
        detail::adaptive(f, d.core_lo, d.core_hi, opt.abs_tol * share, opt.rel_tol, budget);
    out.value = core.value;
    out.error_estimate = core.error;
    out.subdivisions = core.panels;
    bool ok = core.converged;

    for (const auto& sched : d.series) {
        detail::TailResult t = detail::window_series(f, sched, 1200, opt.abs_tol * share,
                                                     opt.rel_tol, opt.divergence_ceiling, budget);
        out.value += t.sum + t.tail;
        out.error_estimate += t.error;
        out.subdivisions += t.windows;
        if (t.status != detail::TailStatus::Converged) ok = false;
    }
    out.converged =
        ok && out.error_estimate <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    // non-convergence is reported through the flag, never silently truncated
    return out;
}

// Classifies the total mass of a nonnegative density over iv: Finite with its
// value, Infinite (ceiling exceeded, or a window series whose increments do not
// decay), or Zero. Throws InconclusiveError when neither is established.
inline MassClass improper_mass(const std::function<double(double)>& f, const Interval& iv,
                               double window_growth = 2.0, double stall_tol = 1e-9,
                               QuadratureOptions opt = {}) {
    if (!iv.valid()) throw Error("improper_mass: invalid interval");
    int budget = opt.max_panels;
    detail::Decomposition d = detail::decompose(iv, window_growth);
    detail::AdaptiveResult core =
        detail::adaptive(f, d.core_lo, d.core_hi, opt.abs_tol, opt.rel_tol, budget);
    double total = core.value;
    bool stalled = false;
    for (const auto& sched : d.series) {
        detail::TailResult t = detail::window_series(f, sched, 1200, opt.abs_tol, opt.rel_tol,
                                                     opt.divergence_ceiling, budget);
        total += t.sum + t.tail;
        if (t.status == detail::TailStatus::Divergent) return MassClass::infinite();
        if (t.status == detail::TailStatus::Stalled) {
            // sustained per-window growth at the budget counts as divergence
            if (t.last_ratio >= 1.0 - stall_tol) return MassClass::infinite();
            // ratio estimate consistent with 1 means the increments never
            // decayed: geometric comparison gives an infinite remainder
            if (t.est_rho >= 0.0 &&
                t.est_rho >= 1.0 - std::max(stall_tol, 3.0 * t.est_rho_err))
                return MassClass::infinite();
            stalled = true;
        }
    }
    if (total > opt.divergence_ceiling) return MassClass::infinite();
    if (stalled) throw InconclusiveError("improper_mass: window series stalled");
    if (total <= 0.0) return MassClass::zero();
    return MassClass::finite(total);
}

// Bisection quantile solver: returns t with |cdf(t) - p| <= tol.
inline double find_quantile(const std::function<double(double)>& cdf, double p,
                            const Interval& iv, double tol = 1e-10) {
    if (!(p > 0.0 && p < 1.0)) throw NotBracketedError("find_quantile: p outside (0,1)");
    const double scale = iv.bounded() ? iv.width() : 1.0;
    double lo, hi;
    if (iv.lower_finite()) {
        lo = iv.lower + (iv.lower_open ? 1e-13 * scale : 0.0);
    } else {
        lo = iv.upper_finite() ? iv.upper - 1.0 : -1.0;
        for (int i = 0; i < 64 && cdf(lo) > p; ++i) lo = lo * 2.0 - 1.0;
    }
    if (iv.upper_finite()) {
        hi = iv.upper - (iv.upper_open ? 1e-13 * scale : 0.0);
    } else {
        hi = iv.lower_finite() ? iv.lower + 1.0 : 1.0;
        for (int i = 0; i < 64 && cdf(hi) < p; ++i) hi = hi * 2.0 + 1.0;
    }
    if (cdf(lo) > p || cdf(hi) < p)
        throw NotBracketedError("find_quantile: p not spanned on interval");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = cdf(mid);
        if (std::abs(fm - p) <= tol) return mid;
        if (fm < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

// Series summation over the nonnegative integers with block doubling and the
// same increment-ratio classification as the continuous windows.
inline MassClass sum_naturals(const std::function<double(long long)>& g, double ceiling = 1e12) {
    double total = 0.0;
    double prev_inc = -1.0, prev_ratio = -1.0;
    int settled = 0;
    long long lo = 0, len = 8;
    for (int k = 0; k < 60; ++k) {
        double inc = 0.0;
        for (long long i = lo; i < lo + len; ++i) {
            const double v = g(i);
            if (std::isnan(v) || std::isinf(v)) throw NonFiniteError(double(i));
            inc += v;
        }
        total += inc;
        if (total > ceiling) return MassClass::infinite();
        if (inc <= 1e-14 * std::max(total, 1e-300)) {
            if (total <= 0.0) return MassClass::zero();
            return MassClass::finite(total);
        }
        if (prev_inc > 0.0) {
            const double ratio = inc / (2.0 * prev_inc);  // per-block growth across doubling
            if (prev_ratio >= 0.0 && std::abs(ratio - prev_ratio) <= 1e-6) {
                if (++settled >= 2) {
                    // ratios settle toward 1/2 from below for log-divergent series
                    if (ratio >= 0.5 - 1e-4) return MassClass::infinite();
                    return MassClass::finite(total + inc * 2.0 * ratio / (1.0 - 2.0 * ratio));
                }
            } else {
                settled = 0;
            }
            prev_ratio = ratio;
        }
        prev_inc = inc;
        lo += len;
        len *= 2;
    }
    throw InconclusiveError("sum_naturals: series did not settle");
}

}  // namespace priorlab
