#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "priorlab/convergence.hpp"
#include "priorlab/errors.hpp"
#include "priorlab/families.hpp"
#include "priorlab/measure.hpp"
#include "priorlab/posterior.hpp"

namespace priorlab {

// Point-null mixture rho delta_{theta0} + (1-rho) Pi~_n.
struct PointNullMixture {
    double rho = 0.5;      // in (0,1)
    double theta0 = 0.0;
    MeasureFamily alternative;  // probability measures giving zero mass to {theta0}
};

namespace detail {

inline RadonMeasure normalized_alternative(const PointNullMixture& mix, int n) {
    RadonMeasure alt = mix.alternative.member(n);
    for (const auto& a : alt.atoms)
        if (a.at == mix.theta0)
            throw Error("mixture: alternative charges the null point");
    MassClass m = total_mass(alt);
    if (!m.is_finite() || std::abs(m.value - 1.0) > 1e-3)
        throw ImproperMemberError("mixture: alternative member at n = " + std::to_string(n) +
                                  " is not a probability measure");
    return scale(alt, 1.0 / m.value);
}

}  // namespace detail

inline RadonMeasure mixture_member(const PointNullMixture& mix, int n) {
    if (!(mix.rho > 0.0 && mix.rho < 1.0)) throw Error("mixture: rho must be in (0,1)");
    RadonMeasure out = scale(detail::normalized_alternative(mix, n), 1.0 - mix.rho);
    out.atoms.push_back({mix.theta0, mix.rho});
    out.mass_hint = MassClass::finite(1.0);
    out.cdf_hint.reset();
    return out;
}

// Pi_n(theta = theta0 | x) = rho f(x|t0) / (rho f(x|t0) + (1-rho) int f dPi~_n)
inline double null_posterior_prob(const PointNullMixture& mix, const Likelihood& lik, double x,
                                  int n) {
    const double f0 = lik.eval(x, mix.theta0);
    RadonMeasure alt = detail::normalized_alternative(mix, n);
    RadonMeasure weighted = weight_by(alt, [&lik, x](double t) { return lik.eval(x, t); });
    MassClass I = total_mass(weighted);
    if (!I.is_finite())
        throw InconclusiveError("null_posterior_prob: alternative evidence not finite");
    const double num = mix.rho * f0;
    const double den = num + (1.0 - mix.rho) * I.value;
    if (!(den > 0.0))
        throw ZeroEvidenceError("null_posterior_prob: both mixture terms vanish");
    return num / den;
}

// The vague limit of the mixture priors themselves: probe mass -> rho h(theta0)
// with unit scaling (plain vague convergence to the sub-probability atom).
inline ConvergenceReport prior_vague_limit(const PointNullMixture& mix,
                                           const std::vector<TestFunction>& probes,
                                           const NGrid& grid = NGrid::default_grid(),
                                           double match_tol = 1e-3) {
    if (probes.size() < 3) throw Error("prior_vague_limit: need at least 3 probes");
    // precondition: the alternative spreads out (q-vague improper limit), so
    // its mass must escape the probed window
    double lo = kInf, hi = -kInf;
    for (const auto& h : probes) {
        lo = std::min(lo, h.nodes.front());
        hi = std::max(hi, h.nodes.back());
    }
    EscapeReport esc = mass_escape(mix.alternative, Interval::closed(lo, hi), grid);
    if (esc.verdict != EscapeVerdict::EscapesToZero)
        throw InconclusiveError(
            "prior_vague_limit: alternative keeps mass in the probe window (not a vague "
            "prior sequence)");

    ConvergenceReport rep;
    rep.tail_tol = match_tol;
    std::vector<std::vector<double>> vals(probes.size());
    for (int n : grid.values) {
        RadonMeasure m = mixture_member(mix, n);
        for (std::size_t p = 0; p < probes.size(); ++p)
            vals[p].push_back(integrate_probe(m, probes[p]));
        rep.scaling.push_back({n, 1.0});
    }
    bool match = true;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        ProbeTrajectory tr;
        tr.probe_id = "h" + std::to_string(p);
        tr.ratios = vals[p];
        const double want = mix.rho * probes[p](mix.theta0);
        tr.tail_drift = std::abs(vals[p].back() - want);
        if (tr.tail_drift > match_tol) match = false;
        rep.per_probe.push_back(std::move(tr));
    }
    rep.verdict = match ? ConvergenceReport::Verdict::ConvergesTo
                        : ConvergenceReport::Verdict::Inconclusive;
    rep.candidate_confirmed = match;
    if (!match) rep.reason = "probe mass does not match rho h(theta0) at the grid end";
    return rep;
}

struct RegimeReport {
    enum class Regime { NullProbToOne, NullProbToRho, Unclassified };
    Regime regime = Regime::Unclassified;
    double rho = 0.0;  // set for NullProbToRho
    std::vector<double> trajectory;  // null_posterior_prob per grid point
    std::string evidence;  // grid-limited description of the tail inspection
};

// Classify the Jeffreys-Lindley limit by numeric likelihood-tail inspection:
// vanishing tails -> null prob -> 1; tails stabilizing at f(x|theta0) ->
// null prob -> rho.
inline RegimeReport limit_regime(const PointNullMixture& mix, const Likelihood& lik, double x,
                                 const NGrid& grid = NGrid::default_grid()) {
    RegimeReport out;
    for (int n : grid.values) out.trajectory.push_back(null_posterior_prob(mix, lik, x, n));

    const Interval iv = mix.alternative.member(1).space.is_continuous()
                            ? mix.alternative.member(1).space.iv
                            : Interval::real_line();
    auto f = [&](double t) { return lik.eval(x, t); };
    const double f0 = f(mix.theta0);
    double peak = std::abs(f0);
    for (int i = -16; i <= 16; ++i) {
        const double t = mix.theta0 + 0.5 * i;
        if (iv.contains(t)) peak = std::max(peak, std::abs(f(t)));
    }
    const double scale_ref = std::max(peak, 1e-300);
    double tail_max = 0.0, tail_dev = 0.0;
    bool probed = false;
    for (double r : {256.0, 512.0, 1024.0}) {
        for (double s : {-1.0, 1.0}) {
            for (double u : {1.0, 1.3, 1.7}) {
                const double t = mix.theta0 + s * r * u;
                if (!iv.contains(t)) continue;
                probed = true;
                const double v = f(t);
                tail_max = std::max(tail_max, std::abs(v));
                tail_dev = std::max(tail_dev, std::abs(v - f0));
            }
        }
    }
    if (probed && tail_max <= 1e-8 * scale_ref) {
        out.regime = RegimeReport::Regime::NullProbToOne;
        out.evidence = "likelihood tail vanishes on the probed windows (grid-limited)";
    } else if (probed && std::abs(f0) > 0.0 && tail_dev <= 5e-3 * std::abs(f0)) {
        out.regime = RegimeReport::Regime::NullProbToRho;
        out.rho = mix.rho;
        out.evidence = "likelihood tail stabilizes at f(x|theta0) on the probed windows "
                       "(grid-limited)";
    } else {
        out.regime = RegimeReport::Regime::Unclassified;
        out.evidence = "likelihood tail neither vanishes nor stabilizes within the probed "
                       "windows";
    }
    return out;
}

// Dauxois et al. model-choice prior on the NEF curvature parameter a:
// mass 1/3 at a = 0, 1/(3K) at each a = 1/j (j = 1..K) and each a = -1/j
// (j = n0..n0+K-1).
inline RadonMeasure dauxois_prior(int K, int n0 = 2) {
    if (K < 1 || n0 < 1) throw Error("dauxois_prior: K and n0 must be >= 1");
    RadonMeasure out;
    std::vector<double> pts;
    out.atoms.push_back({0.0, 1.0 / 3.0});
    pts.push_back(0.0);
    for (int j = 1; j <= K; ++j) {
        out.atoms.push_back({1.0 / j, 1.0 / (3.0 * K)});
        pts.push_back(1.0 / j);
    }
    for (int j = n0; j <= n0 + K - 1; ++j) {
        out.atoms.push_back({-1.0 / j, 1.0 / (3.0 * K)});
        pts.push_back(-1.0 / j);
    }
    std::sort(pts.begin(), pts.end());
    out.space = ParameterSpace::discrete(std::move(pts));
    out.density = [](double) { return 0.0; };
    out.mass_hint = MassClass::finite(1.0);
    return out;
}

}  // namespace priorlab
