#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "priorlab/convergence.hpp"
#include "priorlab/families.hpp"

using namespace priorlab;

namespace {

const double kS2Pi = std::sqrt(2.0 * M_PI);

MeasureFamily normal_scale_family() {
    MeasureFamily fam;
    fam.label = "N(0,n^2)";
    fam.member = [](int n) {
        const double sd = double(n);
        return RadonMeasure::from_density(
            ParameterSpace::continuous(Interval::real_line()), [sd](double t) {
                const double z = t / sd;
                return std::exp(-0.5 * z * z) / (sd * kS2Pi);
            });
    };
    return fam;
}

RadonMeasure recip_measure() {
    return RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::positive_half_line()),
        [](double t) { return 1.0 / t; });
}

// Gamma(shape a, rate b) as a measure on (0, inf)
RadonMeasure gamma_measure(double a, double b) {
    const double logZ = std::lgamma(a) - a * std::log(b);
    return RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::positive_half_line()), [a, b, logZ](double t) {
            return std::exp((a - 1.0) * std::log(t) - b * t - logZ);
        });
}

MeasureFamily gamma_symmetric_family() {
    MeasureFamily fam;
    fam.label = "Gamma(1/n,1/n)";
    fam.member = [](int n) { return gamma_measure(1.0 / n, 1.0 / n); };
    fam.scaling_hint = [](int n) {
        const double a = 1.0 / n;
        return std::exp(std::lgamma(a) - a * std::log(a));
    };
    return fam;
}

}  // namespace

TEST_CASE("NGrid validity") {
    CHECK(NGrid::default_grid().valid());
    CHECK(NGrid{{1, 10, 100, 1000}}.valid());
    CHECK_FALSE(NGrid{{1, 10, 100}}.valid());            // too short
    CHECK_FALSE(NGrid{{1, 10, 5, 100, 1000}}.valid());   // not increasing
    CHECK_FALSE(NGrid{{1, 2, 3, 4}}.valid());            // span < 100x
    CHECK_FALSE(NGrid{{0, 10, 100, 1000}}.valid());      // n >= 1 required
}

TEST_CASE("default probe sets are valid with h0 first") {
    for (const ParameterSpace& sp :
         {ParameterSpace::continuous(Interval::real_line()),
          ParameterSpace::continuous(Interval::positive_half_line()),
          ParameterSpace::continuous(Interval::open(0.0, 1.0)),
          ParameterSpace::continuous(Interval::closed(0.0, 1.0)), ParameterSpace::naturals()}) {
        auto probes = default_probes(sp);
        CHECK(probes.size() >= 5);
        for (const auto& h : probes) CHECK(h.valid());
    }
    // closed interval gains endpoint hats
    CHECK(default_probes(ParameterSpace::continuous(Interval::closed(0.0, 1.0))).size() ==
          default_probes(ParameterSpace::continuous(Interval::open(0.0, 1.0))).size() + 2);
}

TEST_CASE("input validation of check_q_vague") {
    MeasureFamily fam = normal_scale_family();
    auto probes = default_probes(ParameterSpace::continuous(Interval::real_line()));
    const std::vector<TestFunction> four{probes[0], probes[1], probes[2], probes[3]};
    const NGrid bad{{1, 2, 3}};
    CHECK_THROWS_AS(check_q_vague(fam, {}, four), Error);
    CHECK_THROWS_AS(check_q_vague(fam, {}, probes, bad), Error);
}

TEST_CASE("normal family converges to Lebesgue with diverging a_n") {
    MeasureFamily fam = normal_scale_family();
    RadonMeasure leb = RadonMeasure::lebesgue();
    const NGrid grid = NGrid::default_grid();
    ConvergenceReport cr =
        check_q_vague(fam, leb, default_probes(leb.space), grid);
    CHECK(cr.converges());
    CHECK(cr.candidate_confirmed);
    REQUIRE(cr.scaling.size() == grid.values.size());
    // a_n ~ sqrt(2 pi) n: strictly increasing and unbounded on the grid
    for (std::size_t i = 1; i < cr.scaling.size(); ++i)
        CHECK(cr.scaling[i].a_n > cr.scaling[i - 1].a_n);
    CHECK(cr.scaling.back().a_n / cr.scaling.front().a_n > 1000.0);
    CHECK_THAT(cr.scaling.back().a_n, Catch::Matchers::WithinRel(kS2Pi * 1e4, 1e-2));
}

TEST_CASE("verdicts are invariant under member-wise positive scaling") {
    std::mt19937 rng(13579);
    std::uniform_real_distribution<double> uc(-2.0, 2.0);
    std::vector<double> logc;
    for (int i = 0; i < 16; ++i) logc.push_back(uc(rng));
    MeasureFamily base = normal_scale_family();
    MeasureFamily scaled;
    scaled.label = "c_n N(0,n^2)";
    auto member = base.member;
    scaled.member = [member, logc](int n) {
        return scale(member(n), std::exp(logc[std::size_t(n) % logc.size()]));
    };
    RadonMeasure leb = RadonMeasure::lebesgue();
    auto probes = default_probes(leb.space);
    ConvergenceReport a = check_q_vague(base, leb, probes);
    ConvergenceReport b = check_q_vague(scaled, leb, probes);
    CHECK(a.verdict == b.verdict);
    CHECK(a.candidate_confirmed == b.candidate_confirmed);
    // the probe-ratio trajectories themselves coincide
    for (std::size_t p = 0; p < a.per_probe.size(); ++p)
        for (std::size_t i = 0; i < a.per_probe[p].ratios.size(); ++i)
            CHECK_THAT(b.per_probe[p].ratios[i],
                       Catch::Matchers::WithinRel(a.per_probe[p].ratios[i], 1e-9));
}

TEST_CASE("uniqueness: confirmed candidates are equivalent up to scalar") {
    MeasureFamily fam = normal_scale_family();
    RadonMeasure leb = RadonMeasure::lebesgue();
    auto probes = default_probes(leb.space);
    ConvergenceReport a = check_q_vague(fam, leb, probes);
    ConvergenceReport b = check_q_vague(fam, scale(leb, 42.0), probes);
    CHECK(a.candidate_confirmed);
    CHECK(b.candidate_confirmed);
    CHECK(equivalent_up_to_scalar(leb, scale(leb, 42.0), probes));
    // a non-equivalent candidate is rejected
    RadonMeasure expm = RadonMeasure::from_density(
        ParameterSpace::continuous(Interval::real_line()),
        [](double t) { return std::exp(t); });
    ConvergenceReport c = check_q_vague(fam, expm, probes);
    CHECK(c.converges());
    CHECK_FALSE(c.candidate_confirmed);
    CHECK_FALSE(equivalent_up_to_scalar(leb, expm, probes));
}

TEST_CASE("a holding density criterion rules out divergence") {
    MeasureFamily fam = gamma_symmetric_family();
    RadonMeasure cand = recip_measure();
    const NGrid grid = NGrid::default_grid();
    std::vector<double> tg;
    for (int i = -8; i <= 8; ++i) tg.push_back(std::pow(10.0, i / 4.0));
    CriterionResult crit = check_density_criterion(
        fam, cand, DensityCriterion::dominated([](double t) { return t <= 1.0 ? 1.0 / t : 1.0; }),
        grid, tg);
    CHECK(crit.holds);
    ConvergenceReport cr = check_q_vague(fam, cand, default_probes(cand.space), grid);
    CHECK_FALSE(cr.diverges());
    CHECK(cr.converges());
    CHECK(cr.candidate_confirmed);
}

TEST_CASE("criteria need a scaling hint") {
    MeasureFamily fam = normal_scale_family();  // no hint
    const std::vector<double> tg{-1.0, 0.0, 1.0};
    CHECK_THROWS_AS(check_density_criterion(fam, RadonMeasure::lebesgue(),
                                            DensityCriterion::monotone(), NGrid::default_grid(),
                                            tg),
                    MissingScalingHintError);
}

TEST_CASE("monotone criterion rejects a non-monotone family") {
    // oscillating prefactor breaks monotonicity without changing the limit
    MeasureFamily fam = gamma_symmetric_family();
    auto member = fam.member;
    fam.member = [member](int n) {
        return scale(member(n), n % 2 == 0 ? 1.5 : 1.0);
    };
    std::vector<double> tg;
    for (int i = -4; i <= 4; ++i) tg.push_back(std::pow(10.0, i / 4.0));
    CriterionResult crit = check_density_criterion(fam, recip_measure(),
                                                   DensityCriterion::monotone(),
                                                   NGrid::default_grid(), tg);
    CHECK_FALSE(crit.holds);
    CHECK_FALSE(crit.details.empty());
}

TEST_CASE("gamma moment table at n in {10, 100}") {
    // (E, Var) targets realized as Gamma(E^2/Var, E/Var)
    struct Row {
        double (*E)(double);
        double (*V)(double);
    };
    const Row rows[] = {
        {[](double) { return 1.0; }, [](double n) { return n; }},
        {[](double n) { return 1.0 / std::sqrt(n); }, [](double) { return 1.0; }},
        {[](double n) { return std::pow(n, -2.0 / 3.0); },
         [](double n) { return std::pow(n, -1.0 / 3.0); }},
        {[](double n) { return n; }, [](double n) { return n * n * n; }},
        {[](double n) { return 1.0 / std::sqrt(n); },
         [](double n) { return std::cbrt(n); }},
    };
    for (const auto& row : rows) {
        for (double n : {10.0, 100.0}) {
            const double E = row.E(n), V = row.V(n);
            const double a = E * E / V, b = E / V;
            // closed form round trip
            REQUIRE_THAT(a / b, Catch::Matchers::WithinRel(E, 1e-12));
            REQUIRE_THAT(a / (b * b), Catch::Matchers::WithinRel(V, 1e-12));
            MeasureSummary s = summary(gamma_measure(a, b));
            REQUIRE(s.mass.is_finite());
            REQUIRE(s.mean.has_value());
            REQUIRE(s.variance.has_value());
            INFO("E=" << E << " V=" << V << " n=" << n);
            CHECK_THAT(s.mean.value, Catch::Matchers::WithinRel(E, 1e-6));
            CHECK_THAT(s.variance.value, Catch::Matchers::WithinRel(V, 1e-6));
        }
    }
}

TEST_CASE("mass escape from a compact window") {
    MeasureFamily fam = normal_scale_family();
    const NGrid grid = NGrid::default_grid();
    EscapeReport esc = mass_escape(fam, Interval::closed(-10.0, 10.0), grid);
    CHECK(esc.verdict == EscapeVerdict::EscapesToZero);
    // oracle: 2 Phi(10/n) - 1 = erf(10 / (n sqrt(2)))
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const double want = std::erf(10.0 / (grid.values[i] * std::sqrt(2.0)));
        CHECK_THAT(esc.trajectory[i], Catch::Matchers::WithinAbs(want, 1e-6));
    }
    // a tight family keeps its mass
    MeasureFamily fixed;
    fixed.member = [](int) {
        return RadonMeasure::from_density(
            ParameterSpace::continuous(Interval::real_line()), [](double t) {
                return std::exp(-0.5 * t * t) / kS2Pi;
            });
    };
    CHECK(mass_escape(fixed, Interval::closed(-10.0, 10.0), grid).verdict ==
          EscapeVerdict::NoEscape);
    // improper members are rejected
    MeasureFamily improper;
    improper.member = [](int) { return RadonMeasure::lebesgue(); };
    CHECK_THROWS_AS(mass_escape(improper, Interval::closed(-1.0, 1.0), grid),
                    ImproperMemberError);
}

TEST_CASE("median split verifies the declared median") {
    MeasureFamily sym;
    sym.member = [](int n) {
        const double e = 1.0 / n;
        const double logB = 2.0 * std::lgamma(e) - std::lgamma(2.0 * e);
        return RadonMeasure::from_density(
            ParameterSpace::continuous(Interval::open(0.0, 1.0)), [e, logB](double t) {
                return std::exp((e - 1.0) * (std::log(t) + std::log1p(-t)) - logB);
            });
    };
    SplitReport sr = median_split(sym, 0.5, 0.9);
    CHECK(sr.verdict == SplitVerdict::HalfSplit);
    CHECK_THAT(sr.trajectory.back(), Catch::Matchers::WithinAbs(0.5, 0.02));
    // a family whose median drifts from the declaration is rejected
    MeasureFamily skew;
    skew.member = [](int n) { return gamma_measure(2.0 + n % 3, 1.0); };
    CHECK_THROWS_AS(median_split(skew, 0.5, 0.9), MedianDriftError);
}

TEST_CASE("moment trends of the gamma family (1, n)") {
    MeasureFamily fam;
    fam.member = [](int n) { return gamma_measure(1.0 / n, 1.0 / n); };  // E=1, Var=n
    const NGrid grid{{1, 3, 5, 10, 31, 100, 316}};
    MomentTrends mt = moment_trends(fam, grid);
    // n = 5 sits at index 2
    CHECK_THAT(mt.means[2], Catch::Matchers::WithinAbs(1.0, 1e-7));
    CHECK_THAT(mt.vars[2], Catch::Matchers::WithinAbs(5.0, 1e-6));
    CHECK(mt.mean_trend.kind == Trend::Kind::ToValue);
    CHECK_THAT(mt.mean_trend.value, Catch::Matchers::WithinAbs(1.0, 1e-6));
    CHECK(mt.var_trend.kind == Trend::Kind::ToPlusInf);
}

TEST_CASE("estimate_scaling matches the probe-ratio definition") {
    MeasureFamily fam = normal_scale_family();
    TestFunction h0 = TestFunction::hat(0.0, 1.0);
    const double a10 = estimate_scaling(fam, RadonMeasure::lebesgue(), h0, 10);
    const double num = integrate_probe(RadonMeasure::lebesgue(), h0);
    const double den = integrate_probe(fam.member(10), h0);
    CHECK_THAT(a10, Catch::Matchers::WithinRel(num / den, 1e-12));
}
