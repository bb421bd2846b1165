#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "priorlab/convergence.hpp"
#include "priorlab/errors.hpp"
#include "priorlab/families.hpp"
#include "priorlab/measure.hpp"

namespace priorlab {

struct Likelihood {
    std::function<double(double, double)> eval;  // (x, theta) -> f(x|theta) >= 0
    bool continuous_in_theta = true;
    bool vanishes_at_infinity = false;  // f(x|.) in C_0(Theta)
};

// Spot-check the caller-asserted flags on a grid. Continuity: a coarse jump
// must shrink under bisection; vanishing: tail values negligible against the
// central peak.
inline void verify_likelihood_flags(const Likelihood& lik, double x, const ParameterSpace& sp) {
    if (!sp.is_continuous()) return;
    const Interval& iv = sp.iv;
    const double lo = iv.lower_finite() ? iv.lower : -32.0;
    const double hi = iv.upper_finite() ? iv.upper : 32.0;
    auto f = [&](double t) { return lik.eval(x, t); };
    double peak = 0.0;
    const int kNodes = 512;
    std::vector<double> vals(kNodes + 1);
    for (int i = 0; i <= kNodes; ++i) {
        const double t = lo + (hi - lo) * i / kNodes;
        vals[i] = f(t);
        if (std::isfinite(vals[i])) peak = std::max(peak, std::abs(vals[i]));
    }
    const double scale = std::max(peak, 1e-300);
    if (lik.continuous_in_theta) {
        for (int i = 0; i < kNodes; ++i) {
            double a = lo + (hi - lo) * i / kNodes, b = a + (hi - lo) / kNodes;
            double fa = vals[i], fb = vals[i + 1];
            if (std::abs(fb - fa) <= 1e-6 * scale) continue;
            for (int it = 0; it < 48 && std::abs(fb - fa) > 1e-6 * scale; ++it) {
                const double m = 0.5 * (a + b), fm = f(m);
                if (std::abs(fm - fa) >= std::abs(fb - fm)) {
                    b = m;
                    fb = fm;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            if (std::abs(fb - fa) > 1e-6 * scale)
                throw Error("likelihood flagged continuous but jumps near theta = " +
                            std::to_string(a));
        }
    }
    if (lik.vanishes_at_infinity) {
        for (double r : {64.0, 256.0, 1024.0, 4096.0}) {
            for (double s : {-1.0, 1.0}) {
                const double t = s * r;
                if (!iv.contains(t)) continue;
                if (std::abs(f(t)) > 1e-8 * scale)
                    throw Error("likelihood flagged C_0 but does not vanish at theta = " +
                                std::to_string(t));
            }
        }
    }
}

struct PosteriorResult {
    RadonMeasure measure;
    MassClass evidence;  // m(x) = integral of f(x|theta) dPi(theta)
    bool proper = false;
};

// Unnormalized Bayes rule; an improper posterior is a value, not a failure.
inline PosteriorResult posterior(const RadonMeasure& prior, const Likelihood& lik, double x,
                                 QuadratureOptions opt = {}) {
    RadonMeasure weighted;
    try {
        weighted = weight_by(prior, [lik, x](double t) { return lik.eval(x, t); });
    } catch (const ZeroResultError&) {
        throw ZeroEvidenceError("posterior: likelihood vanishes on the prior support");
    }
    PosteriorResult out;
    // the evidence normalizes the posterior density, so its relative error
    // propagates into every downstream moment; compute it with extra headroom
    QuadratureOptions ev = opt;
    ev.abs_tol = std::min(opt.abs_tol, 1e-13);
    ev.rel_tol = std::min(opt.rel_tol, 1e-12);
    out.evidence = total_mass(weighted, ev);
    if (out.evidence.is_zero())
        throw ZeroEvidenceError("posterior: evidence integral is zero");
    if (out.evidence.is_finite()) {
        if (!(out.evidence.value > 0.0))
            throw ZeroEvidenceError("posterior: evidence integral is zero");
        out.measure = scale(weighted, 1.0 / out.evidence.value);
        out.measure.mass_hint = MassClass::finite(1.0);
        out.proper = true;
    } else {
        out.measure = weighted;
        out.proper = false;
    }
    return out;
}

inline MeasureFamily posterior_family(const MeasureFamily& priors, const Likelihood& lik,
                                      double x) {
    if (!lik.continuous_in_theta)
        throw Error("posterior_family: requires a likelihood continuous in theta");
    verify_likelihood_flags(lik, x, priors.member(1).space);
    MeasureFamily out;
    out.label = priors.label.empty() ? "posterior" : priors.label + " | x";
    auto base = priors.member;
    out.member = [base, lik, x](int n) { return posterior(base(n), lik, x).measure; };
    return out;
}

struct NarrowReport {
    enum class Verdict { Narrow, QVagueOnly, NotNarrow };
    Verdict verdict = Verdict::NotNarrow;
    ConvergenceReport qvague;
    bool tight = false;
    Interval tight_window{0, 0, false, false};
    std::vector<double> sup_gaps;  // sup_t |F_n(t) - F(t)| per grid point
    std::string reason;

    bool narrow() const { return verdict == Verdict::Narrow; }
};

// Narrow convergence = q-vague + tight, verified through probe ratios, a
// finite tightness window search, and cdf sup-gaps on t_grid.
inline NarrowReport check_narrow_convergence(const MeasureFamily& posts,
                                             const RadonMeasure& candidate,
                                             const NGrid& grid = NGrid::default_grid(),
                                             std::vector<double> t_grid = {},
                                             double cdf_tol = 0.02) {
    NarrowReport rep;
    MassClass cz = total_mass(candidate);
    if (!cz.is_finite() || !(cz.value > 0.0))
        throw Error("check_narrow_convergence: candidate must be proper");

    // probes: default for the candidate's space, h0 rotated onto a probe the
    // candidate actually charges
    std::vector<TestFunction> probes = default_probes(candidate.space);
    std::size_t h0 = probes.size();
    for (std::size_t p = 0; p < probes.size(); ++p)
        if (integrate_probe(candidate, probes[p]) > 1e-13) {
            h0 = p;
            break;
        }
    if (h0 == probes.size())
        throw AllProbesNullError("check_narrow_convergence: candidate vanishes on every probe");
    std::rotate(probes.begin(), probes.begin() + h0, probes.begin() + h0 + 1);

    rep.qvague = check_q_vague(posts, candidate, probes, grid);

    // tightness: one window holding >= 0.99 of every member's mass
    double c0 = 0.0;
    if (candidate.space.is_continuous() && candidate.space.iv.bounded())
        c0 = 0.5 * (candidate.space.iv.lower + candidate.space.iv.upper);
    double half = candidate.space.is_continuous() && candidate.space.iv.bounded()
                      ? 0.51 * candidate.space.iv.width()
                      : 1.0;
    std::vector<RadonMeasure> members;
    std::vector<double> masses;
    for (int n : grid.values) {
        members.push_back(posts.member(n));
        MassClass m = total_mass(members.back());
        if (!m.is_finite() || std::abs(m.value - 1.0) > 1e-3)
            throw ImproperMemberError("check_narrow_convergence: member at n = " +
                                      std::to_string(n));
        masses.push_back(m.value);
    }
    for (int round = 0; round < 40 && !rep.tight; ++round) {
        Interval w = Interval::closed(c0 - half, c0 + half);
        bool all = true;
        for (std::size_t i = 0; i < members.size() && all; ++i) {
            double inside;
            try {
                MassClass mw = total_mass(restrict(members[i], w));
                inside = mw.is_finite() ? mw.value : 0.0;
            } catch (const EmptyRestrictionError&) {
                inside = 0.0;
            }
            all = inside >= 0.99 * masses[i];
        }
        if (all) {
            rep.tight = true;
            rep.tight_window = w;
        } else {
            half *= 2.0;
        }
    }

    // cdf sup-gap on t_grid, shrinking toward the grid end
    if (t_grid.empty()) {
        const Interval& iv = candidate.space.is_continuous() ? candidate.space.iv
                                                             : Interval::closed(-8, 8);
        const double lo = iv.lower_finite() ? iv.lower : -8.0;
        const double hi = iv.upper_finite() ? iv.upper : 8.0;
        for (int i = 1; i < 16; ++i) t_grid.push_back(lo + (hi - lo) * i / 16.0);
    }
    auto F = normalized_cdf(candidate, cz.value);
    std::vector<double> Fc;
    for (double t : t_grid) Fc.push_back(F(t));
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto Fn = normalized_cdf(members[i], masses[i]);
        double gap = 0.0;
        for (std::size_t j = 0; j < t_grid.size(); ++j)
            gap = std::max(gap, std::abs(Fn(t_grid[j]) - Fc[j]));
        rep.sup_gaps.push_back(gap);
    }
    const std::size_t k = rep.sup_gaps.size();
    const bool cdf_ok = rep.sup_gaps[k - 1] <= cdf_tol &&
                        rep.sup_gaps[k - 1] <= rep.sup_gaps[k - 2] + 1e-9;

    if (!rep.tight) {
        rep.verdict = NarrowReport::Verdict::QVagueOnly;
        rep.reason = "tightness window search exhausted";
    } else if (rep.qvague.converges() && rep.qvague.candidate_confirmed && cdf_ok) {
        rep.verdict = NarrowReport::Verdict::Narrow;
    } else {
        rep.verdict = NarrowReport::Verdict::NotNarrow;
        rep.reason = !rep.qvague.converges() || !rep.qvague.candidate_confirmed
                         ? "q-vague step not confirmed"
                         : "cdf sup-gap above tolerance";
    }
    return rep;
}

struct EstimatorReport {
    Trend mean_trend;
    std::vector<double> means;
    std::vector<double> vars;
    double var_max = 0.0;
    bool var_bounded = false;  // the bounded-variance condition licensing the limit
    std::optional<double> declared_bound;
};

// Posterior-mean trend across the grid plus the bounded-posterior-variance
// sufficient condition for interchanging limits.
inline EstimatorReport estimator_limit(const MeasureFamily& posts,
                                       const NGrid& grid = NGrid::default_grid(),
                                       std::optional<double> declared_var_bound = {}) {
    EstimatorReport out;
    out.declared_bound = declared_var_bound;
    // estimator gaps shrink like 1/n^2; the mean integrals need headroom beyond
    // the default tolerances to resolve them at the top of the grid
    QuadratureOptions tight;
    tight.abs_tol = 1e-13;
    tight.rel_tol = 1e-11;
    for (int n : grid.values) {
        MeasureSummary s = summary(posts.member(n), tight);
        if (!s.mean.has_value())
            throw InconclusiveError("estimator_limit: mean unavailable at n = " +
                                    std::to_string(n));
        out.means.push_back(s.mean.value);
        out.vars.push_back(s.variance.has_value() ? s.variance.value : kInf);
    }
    out.var_max = *std::max_element(out.vars.begin(), out.vars.end());
    out.var_bounded = std::isfinite(out.var_max) &&
                      (!declared_var_bound || out.var_max <= *declared_var_bound * (1.0 + 1e-9));
    out.mean_trend = detail::classify_trend(out.means, grid.values, true);
    return out;
}

}  // namespace priorlab
