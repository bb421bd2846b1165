#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "priorlab/errors.hpp"
#include "priorlab/measure.hpp"

namespace priorlab {

// A sequence n -> Pi_n with an optional closed-form scaling sequence a_n.
struct MeasureFamily {
    std::function<RadonMeasure(int)> member;  // n >= 1
    std::optional<std::function<double(int)>> scaling_hint;  // n -> a_n > 0
    std::string label;
};

// Exponential family in its natural parameterization: log-partition phi and
// the square-rooted Fisher information.
struct ExpFamilySpec {
    std::function<double(double)> phi;
    std::function<double(double)> fisher_det_sqrt;
    ParameterSpace space;
};

namespace detail {

inline void check_bounded_on_grid(const std::function<double(double)>& d, const Interval& iv,
                                  const char* who) {
    const double lo = iv.lower_finite() ? iv.lower : -32.0;
    const double hi = iv.upper_finite() ? iv.upper : 32.0;
    double peak = 0.0;
    for (int i = 1; i < 256; ++i) {
        const double t = lo + (hi - lo) * i / 256.0;
        double v;
        try {
            v = d(t);
        } catch (const std::exception&) {
            continue;
        }
        if (!std::isfinite(v)) throw NonFiniteDensityError(std::string(who) + ": density not finite on grid");
        peak = std::max(peak, v);
    }
    (void)peak;
}

}  // namespace detail

// Vague-by-spreading: member(n) has density (1/n) pi(theta/n); limit Lebesgue.
inline MeasureFamily location_family(const RadonMeasure& base) {
    if (!base.space.is_continuous())
        throw DomainMismatchError("location_family: base must live on the real line");
    double at0;
    try {
        at0 = base.density(0.0);
    } catch (const std::exception&) {
        throw ZeroAtOriginError("location_family: base density not evaluable at 0");
    }
    if (!(at0 > 0.0)) throw ZeroAtOriginError("location_family: base density vanishes at 0");
    detail::check_bounded_on_grid(base.density, base.space.iv, "location_family");
    auto d = base.density;
    MeasureFamily fam;
    fam.label = "location(" + std::string("rescaled base") + ")";
    fam.member = [d](int n) {
        const double nn = double(n);
        return RadonMeasure::from_density(
            ParameterSpace::continuous(Interval::real_line()),
            [d, nn](double t) { return d(t / nn) / nn; });
    };
    // normalized so a_n pi_n -> 1 pointwise (Lebesgue density)
    fam.scaling_hint = [at0](int n) { return double(n) / at0; };
    return fam;
}

// Vague-by-powering on (0,inf): member(n) density (1/(theta n)) theta^{1/n}
// pi(theta^{1/n}); limit (1/theta) d theta.
inline MeasureFamily scale_family(const RadonMeasure& base) {
    if (!base.space.is_continuous() || base.space.iv.lower < 0.0)
        throw DomainMismatchError("scale_family: base must live on (0, inf)");
    double at1;
    try {
        at1 = base.density(1.0);
    } catch (const std::exception&) {
        throw ZeroAtOneError("scale_family: base density not evaluable at 1");
    }
    if (!(at1 > 0.0)) throw ZeroAtOneError("scale_family: base density vanishes at 1");
    detail::check_bounded_on_grid(base.density, base.space.iv, "scale_family");
    auto d = base.density;
    MeasureFamily fam;
    fam.label = "scale(powered base)";
    fam.member = [d](int n) {
        const double nn = double(n);
        return RadonMeasure::from_density(
            ParameterSpace::continuous(Interval::positive_half_line()),
            [d, nn](double t) {
                const double root = std::pow(t, 1.0 / nn);
                return root * d(root) / (t * nn);
            });
    };
    // normalized so a_n pi_n -> 1/theta pointwise
    fam.scaling_hint = [at1](int n) { return double(n) / at1; };
    return fam;
}

// Jeffreys conjugate prior family: unnormalized densities
// exp{alpha_n theta - beta_n phi(theta)} |I(theta)|^{1/2}; limit is the
// Jeffreys measure itself. Members are deliberately unnormalized — they live
// in the quotient space and a normalizer may not exist.
inline MeasureFamily jcp_family(const ExpFamilySpec& spec,
                                std::function<double(int)> alpha,
                                std::function<double(int)> beta) {
    MeasureFamily fam;
    fam.label = "jcp";
    auto phi = spec.phi;
    auto fisher = spec.fisher_det_sqrt;
    auto sp = spec.space;
    fam.member = [phi, fisher, sp, alpha, beta](int n) {
        const double an = alpha(n), bn = beta(n);
        auto dens = [phi, fisher, an, bn](double t) {
            return std::exp(an * t - bn * phi(t)) * fisher(t);
        };
        if (sp.is_continuous()) detail::check_bounded_on_grid(dens, sp.iv, "jcp_family");
        return RadonMeasure::from_density(sp, dens);
    };
    fam.scaling_hint = [](int) { return 1.0; };
    return fam;
}

// Closed-form properness region of the inverse-Gaussian Jeffreys conjugate
// prior: proper iff alpha1 > 0, alpha2 > 0 and -1/2 <= beta < sqrt(alpha1 alpha2).
inline bool ig_jcp_is_proper(double alpha1, double alpha2, double beta) {
    return alpha1 > 0.0 && alpha2 > 0.0 && beta >= -0.5 && beta < std::sqrt(alpha1 * alpha2);
}

}  // namespace priorlab
