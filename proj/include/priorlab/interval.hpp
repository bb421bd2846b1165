#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace priorlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A 1-D interval with endpoint openness tracked. Infinite endpoints are always open.
struct Interval {
    double lower = -kInf;
    double upper = kInf;
    bool lower_open = true;
    bool upper_open = true;

    static Interval closed(double a, double b) { return {a, b, false, false}; }
    static Interval open(double a, double b) { return {a, b, true, true}; }
    static Interval open_closed(double a, double b) { return {a, b, true, false}; }
    static Interval closed_open(double a, double b) { return {a, b, false, true}; }
    static Interval real_line() { return {-kInf, kInf, true, true}; }
    static Interval positive_half_line() { return {0.0, kInf, true, true}; }

    bool lower_finite() const { return std::isfinite(lower); }
    bool upper_finite() const { return std::isfinite(upper); }
    bool bounded() const { return lower_finite() && upper_finite(); }
    double width() const { return upper - lower; }

    bool contains(double x) const {
        if (x < lower || x > upper) return false;
        if (x == lower && lower_open) return false;
        if (x == upper && upper_open) return false;
        return true;
    }
    // membership in the closure (atoms may sit at closed endpoints; probes use closure)
    bool closure_contains(double x) const { return x >= lower && x <= upper; }

    bool valid() const {
        if (!(lower < upper)) return false;
        if (!lower_finite() && !lower_open) return false;
        if (!upper_finite() && !upper_open) return false;
        return true;
    }
};

// Total-mass classification of a positive measure.
struct MassClass {
    enum class Kind { Finite, Infinite, Zero };
    Kind kind = Kind::Zero;
    double value = 0.0;  // meaningful for Finite only

    static MassClass finite(double v) { return {Kind::Finite, v}; }
    static MassClass infinite() { return {Kind::Infinite, 0.0}; }
    static MassClass zero() { return {Kind::Zero, 0.0}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_infinite() const { return kind == Kind::Infinite; }
    bool is_zero() const { return kind == Kind::Zero; }

    std::string str() const {
        switch (kind) {
            case Kind::Finite: return "Finite(" + std::to_string(value) + ")";
            case Kind::Infinite: return "Infinite";
            default: return "Zero";
        }
    }
};

}  // namespace priorlab
