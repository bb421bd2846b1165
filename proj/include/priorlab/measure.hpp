#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "priorlab/errors.hpp"
#include "priorlab/interval.hpp"
#include "priorlab/quadrature.hpp"

namespace priorlab {

// Parameter space: a 1-D continuum or a countable support.
struct ParameterSpace {
    enum class Kind { Continuous, Discrete };
    Kind kind = Kind::Continuous;
    Interval iv = Interval::real_line();   // Continuous
    std::vector<double> support;           // Discrete, finite case (strictly increasing)
    bool all_naturals = false;             // Discrete, support = {0, 1, 2, ...}

    static ParameterSpace continuous(Interval i) { return {Kind::Continuous, i, {}, false}; }
    static ParameterSpace discrete(std::vector<double> pts) {
        return {Kind::Discrete, {}, std::move(pts), false};
    }
    static ParameterSpace naturals() { return {Kind::Discrete, {}, {}, true}; }

    bool is_continuous() const { return kind == Kind::Continuous; }
    // closure membership (atoms may sit at closed endpoints; probes use closure)
    bool closure_contains(double x) const {
        if (is_continuous()) return iv.closure_contains(x);
        if (all_naturals) return x >= 0.0 && x == std::floor(x);
        return std::binary_search(support.begin(), support.end(), x);
    }
};

struct Atom {
    double at;
    double weight;  // > 0
};

// A positive Radon measure on a 1-D space: density w.r.t. Lebesgue (continuous)
// or counting (discrete) measure, plus finitely many atoms. Advisory hints are
// always spot-verified before use.
struct RadonMeasure {
    ParameterSpace space;
    std::function<double(double)> density;  // >= 0 on the space
    std::vector<Atom> atoms;
    std::optional<MassClass> mass_hint;
    std::optional<std::function<double(double)>> cdf_hint;  // cdf of the normalized measure

    static RadonMeasure lebesgue(Interval iv = Interval::real_line()) {
        return {ParameterSpace::continuous(iv), [](double) { return 1.0; }, {}, {}, {}};
    }
    static RadonMeasure from_density(ParameterSpace sp, std::function<double(double)> d) {
        return {std::move(sp), std::move(d), {}, {}, {}};
    }
    static RadonMeasure point_mass(ParameterSpace sp, double at, double weight) {
        return {std::move(sp), [](double) { return 0.0; }, {{at, weight}}, {}, {}};
    }
};

// Compactly supported continuous piecewise-linear probe.
struct TestFunction {
    std::vector<double> nodes;   // strictly increasing, >= 2
    std::vector<double> values;  // >= 0, zero at both end nodes, not all zero

    double lower() const { return nodes.front(); }
    double upper() const { return nodes.back(); }

    double operator()(double x) const {
        if (x <= nodes.front() || x >= nodes.back()) {
            if (x == nodes.front()) return values.front();
            if (x == nodes.back()) return values.back();
            return 0.0;
        }
        auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        const std::size_t i = std::size_t(it - nodes.begin());
        const double t = (x - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
        return values[i - 1] + t * (values[i] - values[i - 1]);
    }

    bool valid() const {
        if (nodes.size() < 2 || values.size() != nodes.size()) return false;
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1])) return false;
        bool nonzero = false;
        for (double v : values) {
            if (v < 0.0) return false;
            if (v > 0.0) nonzero = true;
        }
        return nonzero && values.front() == 0.0 && values.back() == 0.0;
    }

    // triangular hat with peak 1 at center, support [center-w, center+w]
    static TestFunction hat(double center, double halfwidth) {
        return {{center - halfwidth, center, center + halfwidth}, {0.0, 1.0, 0.0}};
    }
    // hat peaking at a closed endpoint: integration clips to the space, so on
    // the space this is a ramp with value 1 at the endpoint itself — atoms
    // sitting exactly on the boundary are seen at full weight
    static TestFunction endpoint_hat(double endpoint, double width, bool lower_end) {
        (void)lower_end;
        return hat(endpoint, width);
    }
};

struct Homeomorphism {
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::function<double(double)> inverse_derivative_abs;  // eta -> |d inverse / d eta|
    Interval domain;
    Interval codomain;

    static Homeomorphism identity(Interval iv = Interval::real_line()) {
        return {[](double x) { return x; }, [](double x) { return x; },
                [](double) { return 1.0; }, iv, iv};
    }
    static Homeomorphism reciprocal() {  // (0,inf) -> (0,inf)
        return {[](double x) { return 1.0 / x; }, [](double e) { return 1.0 / e; },
                [](double e) { return 1.0 / (e * e); }, Interval::positive_half_line(),
                Interval::positive_half_line()};
    }
    static Homeomorphism log_map() {  // (0,inf) -> R, eta = log theta
        return {[](double x) { return std::log(x); }, [](double e) { return std::exp(e); },
                [](double e) { return std::exp(e); }, Interval::positive_half_line(),
                Interval::real_line()};
    }
    static Homeomorphism affine(double a, double b, Interval dom = Interval::real_line()) {
        Interval cod = dom;
        if (a > 0) {
            cod.lower = dom.lower_finite() ? a * dom.lower + b : -kInf;
            cod.upper = dom.upper_finite() ? a * dom.upper + b : kInf;
        } else {
            cod.lower = dom.upper_finite() ? a * dom.upper + b : -kInf;
            cod.upper = dom.lower_finite() ? a * dom.lower + b : kInf;
            std::swap(cod.lower_open, cod.upper_open);
        }
        return {[a, b](double x) { return a * x + b; },
                [a, b](double e) { return (e - b) / a; },
                [a](double) { return 1.0 / std::abs(a); }, dom, cod};
    }
};

namespace detail {

inline bool density_finite_at(const RadonMeasure& m, double x) {
    try {
        const double v = m.density(x);
        return std::isfinite(v);
    } catch (const std::exception&) {
        return false;
    }
}

// Integrates density * weight over [lo, hi], treating a bound as singular when
// it coincides with a space endpoint that is open or where the density blows up.
inline QuadratureResult segment_integral(const RadonMeasure& m,
                                         const std::function<double(double)>& weight, double lo,
                                         double hi, QuadratureOptions opt) {
    const Interval& sp = m.space.iv;
    Interval seg = Interval::closed(lo, hi);
    if (lo == sp.lower && (sp.lower_open || !density_finite_at(m, lo))) seg.lower_open = true;
    if (hi == sp.upper && (sp.upper_open || !density_finite_at(m, hi))) seg.upper_open = true;
    auto f = [&m, &weight](double t) { return m.density(t) * weight(t); };
    return integrate(f, seg, opt);
}

inline void discrete_for_each(const ParameterSpace& sp, double lo, double hi,
                              const std::function<void(double)>& fn) {
    if (sp.all_naturals) {
        const long long a = std::max(0LL, (long long)std::ceil(lo));
        const long long b = (long long)std::floor(hi);
        for (long long k = a; k <= b; ++k) fn(double(k));
    } else {
        auto it = std::lower_bound(sp.support.begin(), sp.support.end(), lo);
        for (; it != sp.support.end() && *it <= hi; ++it) fn(*it);
    }
}

}  // namespace detail

// Pi(h) for a compactly supported probe h.
inline double integrate_probe(const RadonMeasure& m, const TestFunction& h,
                              QuadratureOptions opt = {}) {
    if (!h.valid()) throw NullProbeError("integrate_probe: invalid test function");
    double total = 0.0;
    if (m.space.is_continuous()) {
        const Interval& sp = m.space.iv;
        const double lo = std::max(h.lower(), sp.lower);
        const double hi = std::min(h.upper(), sp.upper);
        if (lo < hi) {
            // split at probe nodes so each piece has a linear weight
            std::vector<double> cuts{lo};
            for (double nd : h.nodes)
                if (nd > lo && nd < hi) cuts.push_back(nd);
            cuts.push_back(hi);
            for (std::size_t i = 1; i < cuts.size(); ++i) {
                auto r = detail::segment_integral(
                    m, [&h](double t) { return h(t); }, cuts[i - 1], cuts[i], opt);
                // endpoint-singular segments whose mass lies below representable
                // theta carry an honest extrapolation error bar ~1e-3; probes
                // only feed ratio comparisons at the 1e-2 scale, so anything
                // tighter than 5e-3 is usable
                if (!r.converged && r.error_estimate > 5e-3 * std::max(1.0, std::abs(r.value)))
                    throw InconclusiveError("integrate_probe: quadrature did not converge");
                total += r.value;
            }
        }
    } else {
        detail::discrete_for_each(m.space, h.lower(), h.upper(),
                                  [&](double x) { total += m.density(x) * h(x); });
    }
    for (const auto& a : m.atoms)
        if (a.at >= h.lower() && a.at <= h.upper()) total += a.weight * h(a.at);
    return total;
}

// |Pi| classification; a provided mass_hint is verified on a compact window.
inline MassClass total_mass(const RadonMeasure& m, QuadratureOptions opt = {}) {
    double atom_sum = 0.0;
    for (const auto& a : m.atoms) atom_sum += a.weight;

    auto density_mass = [&]() -> MassClass {
        if (m.space.is_continuous()) {
            auto f = [&m](double t) { return m.density(t); };
            // treat closed endpoints with non-finite density as singular
            Interval iv = m.space.iv;
            if (iv.lower_finite() && !iv.lower_open && !detail::density_finite_at(m, iv.lower))
                iv.lower_open = true;
            if (iv.upper_finite() && !iv.upper_open && !detail::density_finite_at(m, iv.upper))
                iv.upper_open = true;
            return improper_mass(f, iv, 2.0, 1e-9, opt);
        }
        if (m.space.all_naturals)
            return sum_naturals([&m](long long k) { return m.density(double(k)); },
                                opt.divergence_ceiling);
        double s = 0.0;
        for (double x : m.space.support) s += m.density(x);
        if (s > opt.divergence_ceiling) return MassClass::infinite();
        return s > 0.0 ? MassClass::finite(s) : MassClass::zero();
    };

    if (m.mass_hint) {
        // spot check: mass inside a compact window can exceed a Finite hint
        // only through numerical error
        if (m.mass_hint->is_finite() && m.space.is_continuous()) {
            const Interval& sp = m.space.iv;
            const double lo = std::max(sp.lower, -1e3);
            const double hi = std::min(sp.upper, 1e3);
            if (lo < hi) {
                auto r = detail::segment_integral(
                    m, [](double) { return 1.0; }, lo, hi, opt);
                double windowed = r.value + atom_sum;
                if (windowed > m.mass_hint->value * (1.0 + 1e-4) + 1e-9)
                    throw Error("total_mass: mass_hint contradicted by window integral");
            }
        }
        return *m.mass_hint;
    }

    MassClass dm = density_mass();
    if (dm.is_infinite()) return dm;
    const double s = dm.is_finite() ? dm.value + atom_sum : atom_sum;
    if (s > 0.0) return MassClass::finite(s);
    return MassClass::zero();
}

inline RadonMeasure scale(const RadonMeasure& m, double alpha) {
    if (!(alpha > 0.0)) throw NonPositiveScalarError("scale: factor must be > 0");
    RadonMeasure out = m;
    auto d = m.density;
    out.density = [d, alpha](double t) { return alpha * d(t); };
    for (auto& a : out.atoms) a.weight *= alpha;
    if (m.mass_hint && m.mass_hint->is_finite())
        out.mass_hint = MassClass::finite(m.mass_hint->value * alpha);
    // cdf of the normalized measure is scale-invariant
    return out;
}

// Operational test of "Pi ~ Pi'": probe-integral ratios agree up to tol.
inline bool equivalent_up_to_scalar(const RadonMeasure& m1, const RadonMeasure& m2,
                                    const std::vector<TestFunction>& probes, double tol = 1e-6) {
    if (probes.size() < 3)
        throw Error("equivalent_up_to_scalar: need at least 3 probes");
    std::vector<double> v1, v2;
    double max1 = 0.0, max2 = 0.0;
    for (const auto& h : probes) {
        v1.push_back(integrate_probe(m1, h));
        v2.push_back(integrate_probe(m2, h));
        max1 = std::max(max1, v1.back());
        max2 = std::max(max2, v2.back());
    }
    if (max1 <= 0.0 || max2 <= 0.0)
        throw AllProbesNullError("equivalent_up_to_scalar: a measure vanishes on every probe");
    const double null1 = 1e-13 * max1, null2 = 1e-13 * max2;
    double rmin = kInf, rmax = -kInf;
    bool any = false;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const bool z1 = v1[i] <= null1, z2 = v2[i] <= null2;
        if (z1 && z2) continue;  // vacuous probe
        if (z1 != z2) return false;
        const double r = v1[i] / v2[i];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        any = true;
    }
    if (!any) throw AllProbesNullError("equivalent_up_to_scalar: no probe separates the measures");
    return rmax - rmin <= tol * rmax;
}

inline RadonMeasure restrict(const RadonMeasure& m, const Interval& window) {
    RadonMeasure out = m;
    if (m.space.is_continuous()) {
        Interval iv = m.space.iv;
        Interval cut{std::max(iv.lower, window.lower), std::min(iv.upper, window.upper),
                     iv.lower >= window.lower ? iv.lower_open : window.lower_open,
                     iv.upper <= window.upper ? iv.upper_open : window.upper_open};
        if (!(cut.lower < cut.upper))
            throw EmptyRestrictionError("restrict: window misses the space");
        out.space = ParameterSpace::continuous(cut);
    } else {
        std::vector<double> kept;
        detail::discrete_for_each(m.space, window.lower, window.upper,
                                  [&](double x) {
                                      if (window.contains(x)) kept.push_back(x);
                                  });
        if (kept.empty() && m.atoms.empty())
            throw EmptyRestrictionError("restrict: window misses the support");
        out.space = ParameterSpace::discrete(std::move(kept));
    }
    out.atoms.clear();
    for (const auto& a : m.atoms)
        if (window.contains(a.at)) out.atoms.push_back(a);
    out.mass_hint.reset();
    out.cdf_hint.reset();
    // reject the zero measure
    MassClass mc;
    try {
        mc = total_mass(out);
    } catch (const InconclusiveError&) {
        return out;  // mass unresolved but clearly not identically zero
    }
    if (mc.is_zero()) throw EmptyRestrictionError("restrict: restricted measure is zero");
    return out;
}

inline RadonMeasure weight_by(const RadonMeasure& m, const std::function<double(double)>& g) {
    RadonMeasure out = m;
    auto d = m.density;
    out.density = [d, g](double t) { return d(t) * g(t); };
    out.atoms.clear();
    for (const auto& a : m.atoms) {
        const double w = a.weight * g(a.at);
        if (w > 0.0) out.atoms.push_back({a.at, w});
    }
    out.mass_hint.reset();
    out.cdf_hint.reset();
    // Pi(g) > 0 is a hypothesis of the limit law; verify on a grid
    if (out.atoms.empty()) {
        bool nonzero = false;
        if (m.space.is_continuous()) {
            const Interval& iv = m.space.iv;
            const double lo = iv.lower_finite() ? iv.lower : -32.0;
            const double hi = iv.upper_finite() ? iv.upper : 32.0;
            for (int i = 1; i < 128 && !nonzero; ++i) {
                const double t = lo + (hi - lo) * i / 128.0;
                try {
                    if (out.density(t) > 0.0) nonzero = true;
                } catch (const std::exception&) {
                }
            }
        } else {
            detail::discrete_for_each(m.space, -kInf, 1e6, [&](double x) {
                if (out.density(x) > 0.0) nonzero = true;
            });
        }
        if (!nonzero) throw ZeroResultError("weight_by: weighted measure vanishes on the grid");
    }
    return out;
}

inline RadonMeasure pushforward(const RadonMeasure& m, const Homeomorphism& h) {
    if (!m.space.is_continuous())
        throw DomainMismatchError("pushforward: continuous spaces only");
    const Interval& sp = m.space.iv;
    if (sp.lower < h.domain.lower || sp.upper > h.domain.upper)
        throw DomainMismatchError("pushforward: measure space exceeds map domain");
    RadonMeasure out;
    const bool whole = sp.lower == h.domain.lower && sp.upper == h.domain.upper;
    // map the space through h; detect orientation by probing the interior
    const double a = sp.lower_finite() ? sp.lower : (sp.upper_finite() ? sp.upper - 2.0 : -1.0);
    const double b = sp.upper_finite() ? sp.upper : (sp.lower_finite() ? sp.lower + 2.0 : 1.0);
    const double mid = 0.5 * (a + b);
    const bool increasing = h.forward(mid + 0.25 * (b - a)) > h.forward(mid - 0.25 * (b - a));
    Interval cod;
    if (whole) {
        cod = h.codomain;
    } else {
        const double fa = sp.lower_finite() ? h.forward(sp.lower)
                                            : (increasing ? h.codomain.lower : h.codomain.upper);
        const double fb = sp.upper_finite() ? h.forward(sp.upper)
                                            : (increasing ? h.codomain.upper : h.codomain.lower);
        if (increasing)
            cod = {fa, fb, sp.lower_open, sp.upper_open};
        else
            cod = {fb, fa, sp.upper_open, sp.lower_open};
    }
    out.space = ParameterSpace::continuous(cod);
    auto d = m.density;
    auto inv = h.inverse;
    auto jac = h.inverse_derivative_abs;
    out.density = [d, inv, jac](double eta) { return d(inv(eta)) * jac(eta); };
    for (const auto& at : m.atoms) out.atoms.push_back({h.forward(at.at), at.weight});
    out.mass_hint = m.mass_hint;  // total mass is invariant under a homeomorphism
    if (m.cdf_hint) {
        auto F = *m.cdf_hint;
        if (increasing)
            out.cdf_hint = [F, inv](double t) { return F(inv(t)); };
        else
            out.cdf_hint = [F, inv](double t) { return 1.0 - F(inv(t)); };
    }
    return out;
}

struct MomentValue {
    enum class Kind { Value, PlusInf, MinusInf, Unavailable };
    Kind kind = Kind::Unavailable;
    double value = 0.0;

    static MomentValue of(double v) { return {Kind::Value, v}; }
    static MomentValue plus_inf() { return {Kind::PlusInf, 0.0}; }
    static MomentValue minus_inf() { return {Kind::MinusInf, 0.0}; }
    static MomentValue unavailable() { return {Kind::Unavailable, 0.0}; }
    bool has_value() const { return kind == Kind::Value; }
};

struct MeasureSummary {
    MassClass mass;
    MomentValue mean;
    MomentValue variance;
    std::optional<double> median;
    std::function<double(double)> cdf_at;  // for Finite mass: normalized cdf
};

namespace detail {

// signed integral of g against m, classified by the improper_mass protocol
inline MomentValue signed_integral(const RadonMeasure& m,
                                   const std::function<double(double)>& g,
                                   QuadratureOptions opt = {}) {
    auto part = [&](bool positive) -> MassClass {
        RadonMeasure half = m;
        auto d = m.density;
        half.density = [d, g, positive](double t) {
            const double v = d(t) * g(t);
            return positive ? std::max(v, 0.0) : std::max(-v, 0.0);
        };
        half.atoms.clear();
        half.mass_hint.reset();
        double atom_part = 0.0;
        for (const auto& a : m.atoms) {
            const double v = a.weight * g(a.at);
            atom_part += positive ? std::max(v, 0.0) : std::max(-v, 0.0);
        }
        MassClass mc = total_mass(half, opt);
        if (mc.is_infinite()) return mc;
        const double s = (mc.is_finite() ? mc.value : 0.0) + atom_part;
        return s > 0.0 ? MassClass::finite(s) : MassClass::zero();
    };
    MassClass pos = part(true), neg = part(false);
    if (pos.is_infinite() && neg.is_infinite()) return MomentValue::unavailable();
    if (pos.is_infinite()) return MomentValue::plus_inf();
    if (neg.is_infinite()) return MomentValue::minus_inf();
    const double p = pos.is_finite() ? pos.value : 0.0;
    const double n = neg.is_finite() ? neg.value : 0.0;
    return MomentValue::of(p - n);
}

}  // namespace detail

// cdf of the normalized measure; requires finite total mass z (pass it in to
// avoid recomputation)
inline std::function<double(double)> normalized_cdf(const RadonMeasure& m, double z,
                                                    QuadratureOptions opt = {}) {
    if (m.cdf_hint) return *m.cdf_hint;
    RadonMeasure mm = m;
    return [mm, z, opt](double t) {
        double acc = 0.0;
        if (mm.space.is_continuous()) {
            const Interval& iv = mm.space.iv;
            if (t > iv.lower) {
                Interval upto{iv.lower, std::min(t, iv.upper), iv.lower_open,
                              t < iv.upper ? false : iv.upper_open};
                if (!upto.lower_finite() || upto.lower_open ||
                    !detail::density_finite_at(mm, upto.lower))
                    upto.lower_open = true;
                if (upto.lower < upto.upper)
                    acc = integrate([&mm](double x) { return mm.density(x); }, upto, opt).value;
            }
        } else {
            detail::discrete_for_each(mm.space, -kInf, t,
                                      [&](double x) { acc += mm.density(x); });
        }
        for (const auto& a : mm.atoms)
            if (a.at <= t) acc += a.weight;
        return acc / z;
    };
}

inline MeasureSummary summary(const RadonMeasure& m, QuadratureOptions opt = {}) {
    MeasureSummary out;
    try {
        out.mass = total_mass(m, opt);
    } catch (const InconclusiveError&) {
        out.mass = MassClass::zero();
        out.mean = MomentValue::unavailable();
        out.variance = MomentValue::unavailable();
        throw;
    }
    auto ident = [](double t) { return t; };
    MomentValue raw1 = detail::signed_integral(m, ident, opt);

    if (out.mass.is_finite()) {
        const double z = out.mass.value;
        if (raw1.has_value()) {
            const double mean = raw1.value / z;
            out.mean = MomentValue::of(mean);
            MomentValue raw2 = detail::signed_integral(
                m, [mean](double t) { return (t - mean) * (t - mean); }, opt);
            out.variance = raw2.has_value() ? MomentValue::of(raw2.value / z)
                                            : MomentValue::plus_inf();
        } else {
            out.mean = raw1;
            out.variance = MomentValue::plus_inf();
        }
        // normalized cdf: hint if present, else quadrature up to t
        out.cdf_at = normalized_cdf(m, z, opt);
        try {
            Interval qiv = m.space.is_continuous()
                               ? m.space.iv
                               : Interval{-1e9, 1e9, true, true};
            out.median = find_quantile(out.cdf_at, 0.5, qiv, 1e-9);
        } catch (const NotBracketedError&) {
            out.median.reset();
        }
    } else {
        // improper: raw first moment when it converges (e.g. the mean of an
        // improper posterior), flagged infinite otherwise
        out.mean = raw1;
        out.variance = MomentValue::plus_inf();
        out.cdf_at = [](double) { return 0.0; };
    }
    return out;
}

}  // namespace priorlab
