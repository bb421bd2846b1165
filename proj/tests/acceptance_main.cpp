// Acceptance gate: twelve numbered criteria, one pass/fail line each.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "priorlab/catalog.hpp"
#include "priorlab/convergence.hpp"
#include "priorlab/families.hpp"
#include "priorlab/hypothesis.hpp"
#include "priorlab/measure.hpp"
#include "priorlab/posterior.hpp"

using namespace priorlab;
using catalog::detail::beta_symmetric_family;
using catalog::detail::binomial10_likelihood;
using catalog::detail::gamma_symmetric_family;
using catalog::detail::kS2Pi;
using catalog::detail::lindley_mixture;
using catalog::detail::normal_density;
using catalog::detail::normal_likelihood;
using catalog::detail::normal_scale_family;
using catalog::detail::recip_measure;
using catalog::detail::scaling_at;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void within_rel(double got, double want, double tol, const std::string& what) {
        const bool pass =
            std::isfinite(got) && std::abs(got - want) <= tol * std::max(std::abs(want), 1e-300);
        if (!pass && ok) {
            ok = false;
            detail = what + " (got " + std::to_string(got) + ", want " + std::to_string(want) +
                     ")";
        }
    }
    void within_abs(double got, double want, double tol, const std::string& what) {
        const bool pass = std::isfinite(got) && std::abs(got - want) <= tol;
        if (!pass && ok) {
            ok = false;
            detail = what + " (got " + std::to_string(got) + ", want " + std::to_string(want) +
                     ")";
        }
    }
};

// 1. N(0,n^2) -> Lebesgue with a_n within 1% of sqrt(2 pi) n at n = 10^3, 10^4
void c01(Checker& c) {
    MeasureFamily fam = normal_scale_family();
    RadonMeasure leb = RadonMeasure::lebesgue();
    ConvergenceReport cr = check_q_vague(fam, leb, default_probes(leb.space));
    c.require(cr.converges(), "verdict not ConvergesTo");
    c.require(cr.candidate_confirmed, "Lebesgue not confirmed");
    for (int n : {1000, 10000})
        c.within_rel(scaling_at(cr, n), kS2Pi * n, 0.01,
                     "a_n off at n=" + std::to_string(n));
}

// 2. Poisson(n) diverges; witness ratio (theta0!/theta!) n^{theta-theta0}
void c02(Checker& c) {
    MeasureFamily fam;
    fam.member = [](int n) {
        const double ln = std::log(double(n));
        return RadonMeasure::from_density(
            ParameterSpace::naturals(),
            [ln](double t) { return std::exp(t * ln - std::lgamma(t + 1.0)); });
    };
    ConvergenceReport cr = check_q_vague(fam, {}, default_probes(ParameterSpace::naturals()));
    c.require(cr.diverges(), "verdict not Diverges");
    c.require(!cr.witness.empty(), "no witness recorded");
    RadonMeasure m = fam.member(100);
    const double got = integrate_probe(m, TestFunction::hat(3.0, 1.0)) /
                       integrate_probe(m, TestFunction::hat(1.0, 1.0));
    c.within_rel(got, 100.0 * 100.0 / 6.0, 1e-6, "witness ratio at n=100, theta0=1, theta=3");
}

// 3. N(n, sigma_n^2) trichotomy; c=1 ratio e^{theta2-theta1} within 2%
void c03(Checker& c) {
    auto make = [](double p) {
        MeasureFamily fam;
        fam.member = [p](int n) {
            const double s2 = std::pow(double(n), p);
            const double nn = double(n);
            return RadonMeasure::from_density(
                ParameterSpace::continuous(Interval::real_line()), [s2, nn](double t) {
                    return std::exp(-0.5 * t * t / s2 + t * nn / s2);
                });
        };
        return fam;
    };
    auto probes = default_probes(ParameterSpace::continuous(Interval::real_line()));
    c.require(check_q_vague(make(0.5), {}, probes).diverges(), "sigma^2=sqrt(n) not Diverges");
    RadonMeasure expm = RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::real_line()),
        [](double t) { return std::exp(t); });
    ConvergenceReport mid = check_q_vague(make(1.0), expm, probes);
    c.require(mid.converges() && mid.candidate_confirmed,
              "sigma^2=n does not confirm exp(theta)");
    ConvergenceReport slow = check_q_vague(make(2.0), RadonMeasure::lebesgue(), probes);
    c.require(slow.converges() && slow.candidate_confirmed,
              "sigma^2=n^2 does not confirm Lebesgue");
    RadonMeasure m = make(1.0).member(10000);
    const double ratio = integrate_probe(m, TestFunction::hat(1.0, 1.0)) /
                         integrate_probe(m, TestFunction::hat(0.0, 1.0));
    c.within_rel(ratio, std::exp(1.0), 0.02, "c=1 probe ratio at theta 0, 1");
}

// 4. Mass escape: Pi_n([-10,10]) at n=10^4 equals 2 Phi(10^-3) - 1 within 1e-6
void c04(Checker& c) {
    EscapeReport esc = mass_escape(normal_scale_family(), Interval::closed(-10.0, 10.0));
    c.require(esc.verdict == EscapeVerdict::EscapesToZero, "mass does not escape");
    const double want = std::erf(1e-3 / std::sqrt(2.0));  // = 2 Phi(10^-3) - 1 ~ 7.9788e-4
    c.within_abs(esc.trajectory.back(), want, 1e-6, "window mass at n=10^4");
}

// 5. Beta(1/n,1/n) on (0,1): median split and moment trends
void c05(Checker& c) {
    MeasureFamily fam = beta_symmetric_family(false);
    const NGrid grid = NGrid::default_grid();
    SplitReport sr = median_split(fam, 0.5, 0.9, grid);
    c.require(sr.verdict == SplitVerdict::HalfSplit, "median split not HalfSplit");
    c.within_abs(sr.trajectory.back(), 0.5, 0.02, "Pi_n((0,0.9)) at n=10^4");
    MomentTrends mt = moment_trends(fam, grid);
    c.require(mt.mean_trend.kind == Trend::Kind::ToValue, "mean trend not ToValue");
    c.within_abs(mt.mean_trend.value, 0.5, 1e-6, "mean limit");
    c.require(mt.var_trend.kind == Trend::Kind::ToValue, "variance trend not ToValue");
    c.within_abs(mt.var_trend.value, 0.25, 1e-3, "variance limit");
    // alpha (1 - alpha) (b - a)^2 with alpha = 1/2 on (0,1) is 1/4; hand
    // closed form along the way: Var_n = 1/(4 (2/n + 1))
    for (std::size_t i = 0; i < mt.vars.size(); ++i) {
        const double n = double(grid.values[i]);
        c.within_abs(mt.vars[i], 1.0 / (4.0 * (2.0 / n + 1.0)), 1e-3,
                     "variance closed form at n=" + std::to_string(grid.values[i]));
    }
}

// 6. Gamma (E, Var) table exactly from closed forms and within 1e-6 by quadrature
void c06(Checker& c) {
    using Fn = std::function<double(double)>;
    const std::vector<std::pair<Fn, Fn>> rows = {
        {[](double) { return 1.0; }, [](double n) { return n; }},
        {[](double n) { return 1.0 / std::sqrt(n); }, [](double) { return 1.0; }},
        {[](double n) { return std::pow(n, -2.0 / 3.0); },
         [](double n) { return std::pow(n, -1.0 / 3.0); }},
        {[](double n) { return n; }, [](double n) { return n * n * n; }},
        {[](double n) { return 1.0 / std::sqrt(n); }, [](double n) { return std::cbrt(n); }},
    };
    int row = 0;
    for (const auto& [Ef, Vf] : rows) {
        ++row;
        for (double n : {10.0, 100.0}) {
            const double E = Ef(n), V = Vf(n);
            const double a = E * E / V, b = E / V;
            const std::string tag = "row " + std::to_string(row) + " n=" + std::to_string(int(n));
            c.within_rel(a / b, E, 1e-12, tag + " closed-form mean");
            c.within_rel(a / (b * b), V, 1e-12, tag + " closed-form variance");
            const double logZ = std::lgamma(a) - a * std::log(b);
            MeasureSummary s = summary(RadonMeasure::from_density(
                ParameterSpace::continuous(Interval::positive_half_line()),
                [a, b, logZ](double t) {
                    return std::exp((a - 1.0) * std::log(t) - b * t - logZ);
                }));
            c.require(s.mean.has_value() && s.variance.has_value(), tag + " moments unavailable");
            if (!c.ok) return;
            c.within_rel(s.mean.value, E, 1e-6, tag + " quadrature mean");
            c.within_rel(s.variance.value, V, 1e-6, tag + " quadrature variance");
        }
    }
}

// 7. Gamma(1/n,1/n) -> 1/theta and its reciprocal pushforward -> 1/eta
void c07(Checker& c) {
    MeasureFamily fam = gamma_symmetric_family();
    RadonMeasure cand = recip_measure();
    ConvergenceReport orig = check_q_vague(fam, cand, default_probes(cand.space));
    c.require(orig.converges() && orig.candidate_confirmed, "original not confirmed");
    MeasureFamily pushed;
    auto base = fam.member;
    const Homeomorphism recip = Homeomorphism::reciprocal();
    pushed.member = [base, recip](int n) { return pushforward(base(n), recip); };
    ConvergenceReport pr = check_q_vague(pushed, cand, default_probes(cand.space));
    c.require(pr.converges() && pr.candidate_confirmed, "pushforward not confirmed");
    c.require(pr.verdict == orig.verdict, "verdicts differ");
    double drift = 0.0;
    for (const auto& tr : pr.per_probe) drift = std::max(drift, tr.tail_drift);
    c.require(drift <= 1e-2, "probe drift above 1e-2");
}

// 8. Constructions: location, scale, Poisson JCP via CompactSup, IG region sweep
void c08(Checker& c) {
    ConvergenceReport loc = check_q_vague(
        location_family(normal_density(0.0, 1.0)), RadonMeasure::lebesgue(),
        default_probes(ParameterSpace::continuous(Interval::real_line())));
    c.require(loc.converges() && loc.candidate_confirmed, "location_family not confirmed");

    RadonMeasure lognormal = RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::positive_half_line()), [](double t) {
            const double l = std::log(t);
            return std::exp(-0.5 * l * l) / (t * kS2Pi);
        });
    ConvergenceReport sc = check_q_vague(
        scale_family(lognormal), recip_measure(),
        default_probes(ParameterSpace::continuous(Interval::positive_half_line())));
    c.require(sc.converges() && sc.candidate_confirmed, "scale_family not confirmed");

    ExpFamilySpec spec;
    spec.phi = [](double t) { return std::exp(t); };
    spec.fisher_det_sqrt = [](double t) { return std::exp(0.5 * t); };
    spec.space = ParameterSpace::continuous(Interval::real_line());
    MeasureFamily jcp = jcp_family(
        spec, [](int n) { return 1.0 / n; }, [](int n) { return 1.0 / n; });
    RadonMeasure jeffreys = RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::real_line()),
        [](double t) { return std::exp(0.5 * t); });
    std::vector<double> tg;
    for (int i = -20; i <= 20; ++i) tg.push_back(i / 4.0);
    CriterionResult crit = check_density_criterion(jcp, jeffreys,
                                                   DensityCriterion::compact_sup(),
                                                   NGrid::default_grid(), tg);
    c.require(crit.holds, "Poisson JCP CompactSup criterion fails");
    std::vector<TestFunction> probes;
    for (double t0 : {0.0, -8.0, -4.0, -1.0, 1.0, 4.0})
        probes.push_back(TestFunction::hat(t0, 1.0));
    ConvergenceReport jr = check_q_vague(jcp, jeffreys, probes);
    c.require(jr.converges() && jr.candidate_confirmed, "Poisson JCP not confirmed");

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uexp(-3.0, 3.0);
    std::uniform_real_distribution<double> udel(1e-9, 1e-3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto oracle = [](double a1, double a2, double b) {
        if (!(a1 > 0.0) || !(a2 > 0.0)) return false;
        if (b < -0.5) return false;
        if (b < 0.0) return true;
        return b * b < a1 * a2;
    };
    int mism = 0;
    for (int i = 0; i < 10000; ++i) {
        const double a1 = std::exp(uexp(rng)), a2 = std::exp(uexp(rng));
        const double root = std::sqrt(a1 * a2), d = udel(rng);
        double b;
        switch (i % 5) {
            case 0: b = -0.5 - d; break;
            case 1: b = -0.5 + d; break;
            case 2: b = root - d; break;
            case 3: b = root + d; break;
            default: b = -1.0 + uni(rng) * (root + 2.0); break;
        }
        if (ig_jcp_is_proper(a1, a2, b) != oracle(a1, a2, b)) ++mism;
    }
    c.require(mism == 0, "IG region sweep misclassified " + std::to_string(mism) + " points");
}

// 9. Posterior convergence: normal narrow limit and beta-binomial estimators
void c09(Checker& c) {
    const double x = 2.0;
    const NGrid grid = NGrid::default_grid();
    MeasureFamily posts = posterior_family(normal_scale_family(), normal_likelihood(), x);
    NarrowReport nr = check_narrow_convergence(posts, normal_density(x, 1.0), grid);
    c.require(nr.narrow(), "normal posteriors not Narrow toward N(x,1)");
    // sup-gap at n = 10^3 (grid index 6)
    c.require(nr.sup_gaps.size() == grid.values.size(), "sup-gap trajectory incomplete");
    if (!c.ok) return;
    c.require(nr.sup_gaps[6] <= 0.02, "cdf sup-gap above 0.02 at n=10^3");
    EstimatorReport er = estimator_limit(posts, grid);
    for (std::size_t i = 0; i < er.means.size(); ++i) {
        const double n2 = double(grid.values[i]) * double(grid.values[i]);
        c.require(std::abs(er.means[i] - x) <= 1.1 * x / n2,
                  "posterior mean misses 1.1 x/n^2 at n=" + std::to_string(grid.values[i]));
    }

    MeasureFamily priors = beta_symmetric_family(false);
    Likelihood lik = binomial10_likelihood();
    for (double xx : {0.0, 3.0, 10.0}) {
        EstimatorReport br = estimator_limit(posterior_family(priors, lik, xx), grid);
        c.within_abs(br.means.back(), xx / 10.0, 1e-3,
                     "beta-binomial estimator limit at x=" + std::to_string(int(xx)));
    }
    RadonMeasure haldane = RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::open(0.0, 1.0)),
        [](double t) { return 1.0 / (t * (1.0 - t)); });
    PosteriorResult p0 = posterior(haldane, lik, 0.0);
    c.require(!p0.proper, "x=0 Haldane posterior should be improper");
    MeasureSummary s0 = summary(p0.measure);
    c.within_abs(s0.mean.value, 0.1, 1e-6, "improper raw mean 1/N at x=0");
}

// 10. Beta on [0,1] narrow-converges to (delta_0 + delta_1)/2
void c10(Checker& c) {
    MeasureFamily fam = beta_symmetric_family(true);
    RadonMeasure cand;
    cand.space = ParameterSpace::continuous(Interval::closed(0.0, 1.0));
    cand.density = [](double) { return 0.0; };
    cand.atoms = {{0.0, 0.5}, {1.0, 0.5}};
    cand.mass_hint = MassClass::finite(1.0);
    NarrowReport nr =
        check_narrow_convergence(fam, cand, NGrid::default_grid(), {0.1, 0.5, 0.9});
    c.require(nr.narrow(), "not Narrow toward (delta_0 + delta_1)/2");
    auto F = normalized_cdf(fam.member(10000), 1.0);
    for (double t : {0.1, 0.5, 0.9})
        c.within_abs(F(t), 0.5, 0.02, "F_n(" + std::to_string(t) + ") at n=10^4");
}

// 11. Lindley: improper reference, mixture trajectory, vague prior limit, stable tail
void c11(Checker& c) {
    PointNullMixture mix = lindley_mixture();
    Likelihood lik = normal_likelihood();
    const NGrid grid = NGrid::default_grid();
    RadonMeasure improper = scale(RadonMeasure::lebesgue(), 0.5);
    improper.atoms.push_back({0.0, 0.5});
    for (double x : {0.0, 1.0, 2.0}) {
        PosteriorResult pr = posterior(improper, lik, x);
        const double want = 1.0 / (1.0 + kS2Pi * std::exp(0.5 * x * x));
        c.within_abs(pr.measure.atoms.at(0).weight, want, 1e-9,
                     "improper null prob at x=" + std::to_string(x));
    }
    const double bound = 1.0 / (1.0 + kS2Pi);  // global maximum, attained at x=0
    double maxp = 0.0;
    for (int i = -80; i <= 80; ++i) {
        const double x = i / 20.0;
        maxp = std::max(maxp, 1.0 / (1.0 + kS2Pi * std::exp(0.5 * x * x)));
    }
    c.require(maxp <= bound + 1e-9, "global bound exceeded");

    std::vector<double> traj;
    for (int n : grid.values) traj.push_back(null_posterior_prob(mix, lik, 2.0, n));
    c.within_abs(traj[2], 0.5811, 1e-3, "trajectory at n=10");
    c.require(traj[6] > 0.99, "trajectory below 0.99 at n=10^3");

    ConvergenceReport vr = prior_vague_limit(
        mix, default_probes(ParameterSpace::continuous(Interval::real_line())), grid, 1e-3);
    c.require(vr.converges() && vr.candidate_confirmed,
              "prior vague limit rho delta_0 not confirmed within 1e-3");

    Likelihood stable{[](double, double t) {
                          return 0.5 + std::max(0.0, 1.0 - std::abs(t - 3.0));
                      },
                      true, false};
    RegimeReport rr = limit_regime(mix, stable, 1.0, grid);
    c.require(rr.regime == RegimeReport::Regime::NullProbToRho, "stable tail not NullProbToRho");
    c.within_abs(rr.trajectory.back(), 0.5, 5e-3, "stable-tail null prob vs rho");
}

// 12. Engine invariants: scaling invariance, uniqueness, a_n divergence,
//     criterion consistency, prior-scale invariance, conjugacy oracle
void c12(Checker& c) {
    MeasureFamily fam = normal_scale_family();
    RadonMeasure leb = RadonMeasure::lebesgue();
    auto probes = default_probes(leb.space);
    ConvergenceReport base = check_q_vague(fam, leb, probes);
    MeasureFamily scaled;
    auto member = fam.member;
    scaled.member = [member](int n) { return scale(member(n), 0.5 + (n % 7)); };
    ConvergenceReport sr = check_q_vague(scaled, leb, probes);
    c.require(base.verdict == sr.verdict && base.candidate_confirmed == sr.candidate_confirmed,
              "verdict not scaling-invariant");

    ConvergenceReport alt = check_q_vague(fam, scale(leb, 17.0), probes);
    c.require(alt.candidate_confirmed, "uniqueness: equivalent candidate rejected");
    c.require(equivalent_up_to_scalar(leb, scale(leb, 17.0), probes),
              "uniqueness: equivalence test failed");

    c.require(!base.scaling.empty() &&
                  base.scaling.back().a_n / base.scaling.front().a_n > 1000.0,
              "a_n fails to diverge for the improper limit");

    MeasureFamily gam = gamma_symmetric_family();
    std::vector<double> tg;
    for (int i = -8; i <= 8; ++i) tg.push_back(std::pow(10.0, i / 4.0));
    CriterionResult crit = check_density_criterion(
        gam, recip_measure(),
        DensityCriterion::dominated([](double t) { return t <= 1.0 ? 1.0 / t : 1.0; }),
        NGrid::default_grid(), tg);
    ConvergenceReport gr = check_q_vague(gam, recip_measure(),
                                         default_probes(recip_measure().space));
    c.require(!(crit.holds && gr.diverges()), "criterion holds yet verdict Diverges");

    RadonMeasure prior = normal_density(0.0, 3.0);
    PosteriorResult p1 = posterior(prior, normal_likelihood(), 2.0);
    PosteriorResult p2 = posterior(scale(prior, 5.0), normal_likelihood(), 2.0);
    std::vector<TestFunction> hs;
    for (double t0 : {-1.0, 0.0, 1.0, 2.0, 3.0}) hs.push_back(TestFunction::hat(t0, 1.0));
    c.require(equivalent_up_to_scalar(p1.measure, p2.measure, hs, 1e-9),
              "posterior not prior-scale invariant");

    MeasureSummary s = summary(p1.measure);
    const double s2 = 9.0;
    c.within_rel(s.mean.value, s2 * 2.0 / (1.0 + s2), 1e-6, "conjugacy oracle mean");
    c.within_rel(s.variance.value, s2 / (1.0 + s2), 1e-6, "conjugacy oracle variance");
}

}  // namespace

int main() {
    struct Item {
        const char* name;
        std::function<void(Checker&)> fn;
    };
    const std::vector<Item> items = {
        {"01 normal-to-lebesgue scaling", c01},
        {"02 poisson divergence witness", c02},
        {"03 normal drift trichotomy", c03},
        {"04 compact-window mass escape", c04},
        {"05 beta median split and moments", c05},
        {"06 gamma moment table", c06},
        {"07 reparameterization equivariance", c07},
        {"08 family constructions and IG region", c08},
        {"09 posterior convergence and estimators", c09},
        {"10 closed-interval beta narrow limit", c10},
        {"11 point-null mixture limits", c11},
        {"12 engine invariants", c12},
    };
    const auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    for (const auto& item : items) {
        Checker c;
        try {
            item.fn(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        if (c.ok) {
            std::printf("PASS  %s\n", item.name);
        } else {
            std::printf("FAIL  %s: %s\n", item.name, c.detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/%zu criteria passed in %.1f s\n", int(items.size()) - failures,
                items.size(), secs);
    if (secs > 300.0) {
        std::printf("FAIL  runtime budget: %.1f s exceeds 300 s\n", secs);
        ++failures;
    }
    return failures == 0 ? 0 : 1;
}
