#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "priorlab/errors.hpp"
#include "priorlab/families.hpp"
#include "priorlab/measure.hpp"

namespace priorlab {

// Finite surrogate for n -> infinity.
struct NGrid {
    std::vector<int> values;

    static NGrid default_grid() { return {{1, 3, 10, 31, 100, 316, 1000, 3162, 10000}}; }

    bool valid() const {
        if (values.size() < 4) return false;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] <= values[i - 1]) return false;
        return values.front() >= 1 &&
               double(values.back()) / double(values.front()) >= 100.0;
    }
};

struct ScalingEntry {
    int n;
    double a_n;
};

struct ProbeTrajectory {
    std::string probe_id;
    std::vector<double> ratios;  // r_n(h) = Pi_n(h) / Pi_n(h0), per grid point
    double tail_drift = 0.0;     // max relative step over the last two decades
};

struct ConvergenceReport {
    enum class Verdict { ConvergesTo, Diverges, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    bool candidate_confirmed = false;
    std::vector<ScalingEntry> scaling;  // present when a candidate was supplied
    std::vector<ProbeTrajectory> per_probe;
    // Diverges requires a recorded witness
    std::string witness;
    std::vector<double> witness_trajectory;
    std::string reason;
    double tail_tol = 1e-2;

    bool diverges() const { return verdict == Verdict::Diverges; }
    bool converges() const { return verdict == Verdict::ConvergesTo; }
};

// Space-adapted default probe sets; the designated h0 is always index 0.
inline std::vector<TestFunction> default_probes(const ParameterSpace& sp) {
    std::vector<TestFunction> out;
    if (!sp.is_continuous()) {
        // unit hats at small naturals; h0 at 1
        for (double c : {1.0, 0.0, 2.0, 3.0, 5.0, 8.0, 13.0})
            out.push_back(TestFunction::hat(c, 1.0));
        return out;
    }
    const Interval& iv = sp.iv;
    if (!iv.lower_finite() && !iv.upper_finite()) {
        // translates separate exponential tilts from Lebesgue
        for (double c : {0.0, -8.0, -4.0, -1.0, 1.0, 4.0, 8.0})
            out.push_back(TestFunction::hat(c, 1.0));
        return out;
    }
    if (iv.lower == 0.0 && !iv.upper_finite()) {
        for (double c : {1.0, 0.01, 0.1, 0.5, 3.0, 10.0, 100.0})
            out.push_back(TestFunction::hat(c, c * 0.5));
        return out;
    }
    if (iv.bounded()) {
        const double a = iv.lower, w = iv.width();
        for (double u : {0.5, 0.05, 0.2, 0.35, 0.65, 0.8, 0.95}) {
            const double c = a + u * w;
            const double half = 0.9 * std::min(c - a, a + w - c);
            out.push_back(TestFunction::hat(c, half));
        }
        if (!iv.lower_open) out.push_back(TestFunction::endpoint_hat(a, 0.05 * w, true));
        if (!iv.upper_open) out.push_back(TestFunction::endpoint_hat(a + w, 0.05 * w, false));
        return out;
    }
    // half line anchored elsewhere: translate the (0,inf) layout
    const double base = iv.lower_finite() ? iv.lower : iv.upper;
    const double sgn = iv.lower_finite() ? 1.0 : -1.0;
    for (double c : {1.0, 0.01, 0.1, 0.5, 3.0, 10.0, 100.0})
        out.push_back(TestFunction::hat(base + sgn * c, c * 0.5));
    return out;
}

// a_n := Pi(h0) / Pi_n(h0), the operational scaling estimate.
inline double estimate_scaling(const MeasureFamily& fam, const RadonMeasure& candidate,
                               const TestFunction& h0, int n) {
    const double num = integrate_probe(candidate, h0);
    const double den = integrate_probe(fam.member(n), h0);
    if (num <= 1e-13 || den <= 1e-13)
        throw NullProbeError("estimate_scaling: probe integral vanishes");
    return num / den;
}

namespace detail {

// Robust probe integral for verdicts: overflow inside a member density is a
// divergence witness, not an abort.
inline double probe_or_inf(const RadonMeasure& m, const TestFunction& h) {
    try {
        return integrate_probe(m, h);
    } catch (const NonFiniteError&) {
        return kInf;
    } catch (const InconclusiveError&) {
        return kInf;
    }
}

inline double rel_step(double prev, double cur) {
    if (std::isinf(prev) || std::isinf(cur)) return kInf;
    const double denom = std::max({std::abs(prev), std::abs(cur), 1e-300});
    return std::abs(cur - prev) / denom;
}

enum class Explosion { None, Growth, Decay };

// monotone growth or decay by >= 10x per decade over the last three finite
// grid points (trailing overflow strengthens the witness)
inline Explosion explodes(const std::vector<double>& traj, const std::vector<int>& ns,
                          std::string* how) {
    std::vector<std::pair<double, double>> fin;  // (log10 n, value)
    bool has_inf_tail = false;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (std::isinf(traj[i]))
            has_inf_tail = true;
        else if (!has_inf_tail)
            fin.push_back({std::log10(double(ns[i])), traj[i]});
    }
    if (fin.size() < 3) {
        if (has_inf_tail && !fin.empty() && fin.back().second > 0) {
            *how = "overflow beyond n = " + std::to_string(ns[fin.size() - 1]);
            return Explosion::Growth;
        }
        return Explosion::None;
    }
    const auto& p1 = fin[fin.size() - 3];
    const auto& p2 = fin[fin.size() - 2];
    const auto& p3 = fin[fin.size() - 1];
    auto rate_up = [](const std::pair<double, double>& a, const std::pair<double, double>& b) {
        if (a.second <= 0.0) return b.second > 0.0;
        return std::log10(b.second / a.second) >= (b.first - a.first);
    };
    auto rate_down = [](const std::pair<double, double>& a, const std::pair<double, double>& b) {
        if (b.second <= 0.0) return a.second > 0.0;
        if (a.second <= 0.0) return false;
        return std::log10(a.second / b.second) >= (b.first - a.first);
    };
    if (has_inf_tail && p2.second >= p1.second) {
        *how = "monotone growth with overflow at the largest n";
        return Explosion::Growth;
    }
    if (rate_up(p1, p2) && rate_up(p2, p3)) {
        *how = "monotone growth >= 10x per decade";
        return Explosion::Growth;
    }
    if (rate_down(p1, p2) && rate_down(p2, p3)) {
        *how = "monotone decay >= 10x per decade";
        return Explosion::Decay;
    }
    return Explosion::None;
}

}  // namespace detail

// The q-vague verdict engine: probe-ratio trajectories across the n-grid.
inline ConvergenceReport check_q_vague(const MeasureFamily& fam,
                                       const std::optional<RadonMeasure>& candidate,
                                       const std::vector<TestFunction>& probes,
                                       const NGrid& grid = NGrid::default_grid(),
                                       double tail_tol = 1e-2) {
    if (probes.size() < 5)
        throw Error("check_q_vague: need at least 5 probes (h0 first)");
    if (!grid.valid()) throw Error("check_q_vague: invalid n-grid");
    ConvergenceReport rep;
    rep.tail_tol = tail_tol;

    // evaluate Pi_n(h) for every grid point and probe; ratios are against h0
    std::vector<std::vector<double>> ratios(probes.size());
    for (int n : grid.values) {
        RadonMeasure m = fam.member(n);
        const double base = detail::probe_or_inf(m, probes[0]);
        if (!(base > 1e-300) || std::isinf(base))
            throw NullProbeError("check_q_vague: h0 integral vanished or overflowed at n = " +
                                 std::to_string(n));
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double v = p == 0 ? base : detail::probe_or_inf(m, probes[p]);
            ratios[p].push_back(std::isinf(v) ? kInf : v / base);
        }
    }

    // relative scale of the probe ratios at the grid tail
    double scale_ref = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p)
        if (!std::isinf(ratios[p].back()))
            scale_ref = std::max(scale_ref, std::abs(ratios[p].back()));
    scale_ref = std::max(scale_ref, 1e-300);

    // probes the limit gives no mass to are allowed to fade toward zero
    std::vector<bool> faded(probes.size(), false);
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto& r = ratios[p];
        const std::size_t k = r.size();
        faded[p] = !std::isinf(r[k - 1]) && !std::isinf(r[k - 2]) && !std::isinf(r[k - 3]) &&
                   std::abs(r[k - 1]) <= 0.01 * scale_ref &&
                   std::abs(r[k - 1]) <= std::abs(r[k - 2]) * (1.0 + 1e-12) &&
                   std::abs(r[k - 2]) <= std::abs(r[k - 3]) * (1.0 + 1e-12);
    }

    // last-two-decade drift per probe
    std::size_t tail_from = 0;
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        if (double(grid.values[i]) * 100.0 >= double(grid.values.back())) {
            tail_from = std::max<std::size_t>(i, 1);
            break;
        }
    bool all_drift_ok = true;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        ProbeTrajectory tr;
        tr.probe_id = "h" + std::to_string(p);
        tr.ratios = ratios[p];
        double drift = 0.0;
        for (std::size_t i = tail_from + 1; i < tr.ratios.size(); ++i)
            drift = std::max(drift, detail::rel_step(tr.ratios[i - 1], tr.ratios[i]));
        // the families in scope typically converge at an O(1/n) rate, which
        // can still exceed tol per half-decade step at feasible n; a tail
        // fully explained by r(n) = c - b/n is accepted with the model
        // residual as the recorded drift
        if (drift > tail_tol) {
            const auto& r = tr.ratios;
            const std::size_t k = r.size();
            if (k >= 3 && !std::isinf(r[k - 1]) && !std::isinf(r[k - 2]) &&
                !std::isinf(r[k - 3])) {
                const double n0 = grid.values[k - 3], n1 = grid.values[k - 2],
                             n2 = grid.values[k - 1];
                const double b = (r[k - 1] - r[k - 2]) / (1.0 / n1 - 1.0 / n2);
                const double c = r[k - 1] + b / n2;
                const double sc = std::max({std::abs(c), std::abs(r[k - 1]), 1e-300});
                const double resid = std::abs((c - b / n0) - r[k - 3]) / sc;
                if (resid <= tail_tol) drift = resid;
            }
        }
        tr.tail_drift = drift;
        if (!faded[p] && drift > tail_tol) all_drift_ok = false;
        rep.per_probe.push_back(std::move(tr));
    }

    // divergence witness: monotone growth always counts; monotone decay only
    // while the probe still carries non-negligible relative mass (a fading
    // probe is convergence toward a limit that ignores it, not divergence)
    for (std::size_t p = 1; p < probes.size(); ++p) {
        std::string how;
        const auto kind = detail::explodes(ratios[p], grid.values, &how);
        const bool witness = kind == detail::Explosion::Growth ||
                             (kind == detail::Explosion::Decay && !faded[p]);
        if (witness) {
            rep.verdict = ConvergenceReport::Verdict::Diverges;
            rep.witness = "h" + std::to_string(p) + " vs h0: " + how;
            rep.witness_trajectory = ratios[p];
            rep.reason = "ratio trajectory " + rep.witness;
            return rep;
        }
    }

    if (all_drift_ok) {
        rep.verdict = ConvergenceReport::Verdict::ConvergesTo;
        if (candidate) {
            const double c0 = integrate_probe(*candidate, probes[0]);
            if (c0 <= 1e-13)
                throw NullProbeError("check_q_vague: candidate vanishes on h0");
            bool match = true;
            double probe_scale = 0.0;
            std::vector<double> cand_ratio(probes.size());
            for (std::size_t p = 0; p < probes.size(); ++p) {
                cand_ratio[p] = integrate_probe(*candidate, probes[p]) / c0;
                probe_scale = std::max(probe_scale, std::abs(cand_ratio[p]));
            }
            for (std::size_t p = 0; p < probes.size(); ++p) {
                const double got = ratios[p].back();
                const double want = cand_ratio[p];
                // a probe fading to zero matches a candidate that ignores it
                if (faded[p] && std::abs(want) <= 1e-3 * probe_scale) continue;
                const double denom = std::max(std::abs(want), 1e-3 * probe_scale);
                if (std::isinf(got) || std::abs(got - want) > 3.0 * tail_tol * denom) {
                    match = false;
                    break;
                }
            }
            rep.candidate_confirmed = match;
            for (int n : grid.values)
                rep.scaling.push_back({n, estimate_scaling(fam, *candidate, probes[0], n)});
            if (!match) rep.reason = "trajectories settled but do not match the candidate";
        } else {
            rep.candidate_confirmed = false;
        }
        return rep;
    }
    rep.verdict = ConvergenceReport::Verdict::Inconclusive;
    rep.reason = "tail drift above tolerance without a monotone divergence witness";
    return rep;
}

// The three sufficient density criteria, checked on finite grids.
struct DensityCriterion {
    enum class Kind { Monotone, Dominated, CompactSup };
    Kind kind = Kind::Monotone;
    std::function<double(double)> dominator;  // Dominated only

    static DensityCriterion monotone() { return {Kind::Monotone, {}}; }
    static DensityCriterion dominated(std::function<double(double)> g) {
        return {Kind::Dominated, std::move(g)};
    }
    static DensityCriterion compact_sup() { return {Kind::CompactSup, {}}; }
};

struct CriterionResult {
    bool holds = false;
    std::string details;
};

inline CriterionResult check_density_criterion(const MeasureFamily& fam,
                                               const RadonMeasure& candidate,
                                               const DensityCriterion& criterion,
                                               const NGrid& grid,
                                               const std::vector<double>& theta_grid,
                                               double pointwise_tol = 0.05) {
    if (!fam.scaling_hint)
        throw MissingScalingHintError("check_density_criterion: criteria are stated for a_n pi_n");
    CriterionResult out;
    std::ostringstream msg;

    // a_n pi_n(theta) table
    std::vector<std::vector<double>> v(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const int n = grid.values[i];
        const double an = (*fam.scaling_hint)(n);
        RadonMeasure m = fam.member(n);
        for (double th : theta_grid) v[i].push_back(an * m.density(th));
    }

    switch (criterion.kind) {
        case DensityCriterion::Kind::Monotone: {
            for (std::size_t j = 0; j < theta_grid.size(); ++j) {
                for (std::size_t i = 1; i < v.size(); ++i)
                    if (v[i][j] < v[i - 1][j] * (1.0 - 1e-9)) {
                        msg << "not nondecreasing at theta = " << theta_grid[j]
                            << " between n = " << grid.values[i - 1] << " and "
                            << grid.values[i];
                        out.details = msg.str();
                        return out;
                    }
                const double lim = candidate.density(theta_grid[j]);
                if (std::abs(v.back()[j] - lim) >
                    pointwise_tol * std::max(std::abs(lim), 1e-12)) {
                    msg << "pointwise limit missed at theta = " << theta_grid[j];
                    out.details = msg.str();
                    return out;
                }
            }
            out.holds = true;
            out.details = "nondecreasing in n and pointwise at the candidate on the grid";
            return out;
        }
        case DensityCriterion::Kind::Dominated: {
            // detect the threshold N past which domination holds everywhere
            std::size_t from = v.size();
            for (std::size_t i = 0; i < v.size(); ++i) {
                bool ok = true;
                for (std::size_t j = 0; j < theta_grid.size() && ok; ++j)
                    ok = v[i][j] < criterion.dominator(theta_grid[j]) * (1.0 + 1e-12);
                if (ok) {
                    bool rest = true;
                    for (std::size_t k = i + 1; k < v.size() && rest; ++k)
                        for (std::size_t j = 0; j < theta_grid.size() && rest; ++j)
                            rest = v[k][j] < criterion.dominator(theta_grid[j]) * (1.0 + 1e-12);
                    if (rest) {
                        from = i;
                        break;
                    }
                }
            }
            if (from == v.size()) {
                out.details = "no grid threshold with domination at every theta";
                return out;
            }
            for (std::size_t j = 0; j < theta_grid.size(); ++j) {
                const double lim = candidate.density(theta_grid[j]);
                if (std::abs(v.back()[j] - lim) >
                    pointwise_tol * std::max(std::abs(lim), 1e-12)) {
                    msg << "pointwise limit missed at theta = " << theta_grid[j];
                    out.details = msg.str();
                    return out;
                }
            }
            out.holds = true;
            msg << "dominated for n >= " << grid.values[from] << " and pointwise at the candidate";
            out.details = msg.str();
            return out;
        }
        default: {  // CompactSup
            std::vector<double> sups(v.size(), 0.0);
            for (std::size_t i = 0; i < v.size(); ++i)
                for (double x : v[i]) {
                    if (!std::isfinite(x)) {
                        out.details = "a_n pi_n overflows on the window";
                        return out;
                    }
                    sups[i] = std::max(sups[i], x);
                }
            // bounded: no sustained growth toward the grid end
            const double early = *std::max_element(sups.begin(), sups.end() - 2);
            if (sups.back() > 10.0 * std::max(early, 1e-300) &&
                sups[sups.size() - 2] > 3.0 * std::max(early, 1e-300)) {
                out.details = "sup over the window keeps growing along the grid";
                return out;
            }
            for (std::size_t j = 0; j < theta_grid.size(); ++j) {
                const double lim = candidate.density(theta_grid[j]);
                if (std::abs(v.back()[j] - lim) >
                    pointwise_tol * std::max(std::abs(lim), 1e-12)) {
                    msg << "pointwise limit missed at theta = " << theta_grid[j];
                    out.details = msg.str();
                    return out;
                }
            }
            out.holds = true;
            out.details = "sup bounded over the window and pointwise at the candidate";
            return out;
        }
    }
}

enum class EscapeVerdict { EscapesToZero, NoEscape };

struct EscapeReport {
    std::vector<double> trajectory;  // Pi_n(window) per grid point
    EscapeVerdict verdict = EscapeVerdict::NoEscape;
};

// Mass escape from a compact window for a family of probability measures.
inline EscapeReport mass_escape(const MeasureFamily& fam, const Interval& window,
                                const NGrid& grid = NGrid::default_grid(),
                                double tail_threshold = 0.05) {
    EscapeReport out;
    for (int n : grid.values) {
        RadonMeasure m = fam.member(n);
        MassClass total = total_mass(m);
        if (!total.is_finite() || std::abs(total.value - 1.0) > 1e-3)
            throw ImproperMemberError("mass_escape: member at n = " + std::to_string(n) +
                                      " is not a probability measure");
        RadonMeasure r;
        double w;
        try {
            r = restrict(m, window);
            MassClass wm = total_mass(r);
            w = wm.is_finite() ? wm.value : 0.0;
        } catch (const EmptyRestrictionError&) {
            w = 0.0;
        }
        out.trajectory.push_back(w / total.value);
    }
    const std::size_t k = out.trajectory.size();
    const bool monotone_tail = k >= 3 && out.trajectory[k - 1] <= out.trajectory[k - 2] &&
                               out.trajectory[k - 2] <= out.trajectory[k - 3];
    if (monotone_tail && out.trajectory.back() <= tail_threshold)
        out.verdict = EscapeVerdict::EscapesToZero;
    return out;
}

enum class SplitVerdict { HalfSplit, NotHalf };

struct SplitReport {
    std::vector<double> trajectory;  // F_n(c) per grid point
    SplitVerdict verdict = SplitVerdict::NotHalf;
};

// Pi_n((a, c)) for a family with constant median m; the median hypothesis is
// re-verified through the cdf, never trusted from the label.
inline SplitReport median_split(const MeasureFamily& fam, double median, double c,
                                const NGrid& grid = NGrid::default_grid(),
                                double median_tol = 1e-6) {
    SplitReport out;
    for (int n : grid.values) {
        RadonMeasure m = fam.member(n);
        MeasureSummary s = summary(m);
        if (!s.mass.is_finite())
            throw ImproperMemberError("median_split: member at n = " + std::to_string(n));
        const double F_med = s.cdf_at(median);
        if (std::abs(F_med - 0.5) > median_tol)
            throw MedianDriftError("median_split: cdf at the declared median is " +
                                   std::to_string(F_med) + " at n = " + std::to_string(n));
        out.trajectory.push_back(s.cdf_at(c));
    }
    const std::size_t k = out.trajectory.size();
    if (k >= 2 && std::abs(out.trajectory[k - 1] - 0.5) <= 0.02 &&
        std::abs(out.trajectory[k - 1] - out.trajectory[k - 2]) <= 0.02)
        out.verdict = SplitVerdict::HalfSplit;
    return out;
}

struct Trend {
    enum class Kind { ToValue, ToPlusInf, ToMinusInf, NoTrend };
    Kind kind = Kind::NoTrend;
    double value = 0.0;

    static Trend to_value(double v) { return {Kind::ToValue, v}; }
    static Trend plus_inf() { return {Kind::ToPlusInf, 0.0}; }
    static Trend minus_inf() { return {Kind::ToMinusInf, 0.0}; }
    static Trend none() { return {Kind::NoTrend, 0.0}; }
};

struct MomentTrends {
    Trend mean_trend;
    Trend var_trend;
    std::vector<double> means;
    std::vector<double> vars;
};

namespace detail {

inline Trend classify_trend(const std::vector<double>& vals, const std::vector<int>& ns,
                            bool allow_minus) {
    const std::size_t k = vals.size();
    if (k < 3) return Trend::none();
    const double vl = vals[k - 1], vp = vals[k - 2], vpp = vals[k - 3];
    const double drift = std::abs(vl - vp) / std::max(std::abs(vl), 1e-300);
    if (drift <= 1e-2) return Trend::to_value(vl);
    const double dlogn1 = std::log10(double(ns[k - 1])) - std::log10(double(ns[k - 2]));
    const double dlogn2 = std::log10(double(ns[k - 2])) - std::log10(double(ns[k - 3]));
    auto slope = [](double a, double b, double dl) {
        if (a <= 0.0 || b <= 0.0) return 0.0;
        return std::log10(b / a) / dl;
    };
    // growing without bound
    if (vl > vp && vp > vpp && slope(vp, vl, dlogn1) > 0.15 && slope(vpp, vp, dlogn2) > 0.15)
        return Trend::plus_inf();
    if (allow_minus && vl < vp && vp < vpp && slope(-vp, -vl, dlogn1) > 0.15 &&
        slope(-vpp, -vp, dlogn2) > 0.15)
        return Trend::minus_inf();
    // steady decay in magnitude: limit 0
    const double al = std::abs(vl), ap = std::abs(vp), app = std::abs(vpp);
    if (al < ap && ap < app && slope(al, ap, dlogn1) > 0.15 && slope(ap, app, dlogn2) > 0.15)
        return Trend::to_value(0.0);
    return Trend::none();
}

}  // namespace detail

inline MomentTrends moment_trends(const MeasureFamily& fam,
                                  const NGrid& grid = NGrid::default_grid()) {
    MomentTrends out;
    for (int n : grid.values) {
        MeasureSummary s = summary(fam.member(n));
        if (!s.mean.has_value() || !s.variance.has_value())
            throw InconclusiveError("moment_trends: moments unavailable at n = " +
                                    std::to_string(n));
        out.means.push_back(s.mean.value);
        out.vars.push_back(s.variance.value);
    }
    out.mean_trend = detail::classify_trend(out.means, grid.values, true);
    out.var_trend = detail::classify_trend(out.vars, grid.values, false);
    return out;
}

}  // namespace priorlab
