// ============================================================================
// stlf/interval.hpp — time intervals attached to temporal operators
// ============================================================================

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stlf {

/// Base error type for the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A nonempty connected subset of [0, +inf).  An infinite upper bound is
/// always treated as open regardless of upper_closed.
struct Interval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool lower_closed = true;
    bool upper_closed = false;

    Interval() = default;

    Interval(double lo, double hi, bool lo_closed = true, bool hi_closed = true)
        : lower(lo), upper(hi), lower_closed(lo_closed), upper_closed(hi_closed) {
        validate();
    }

    static Interval unbounded() { return Interval(); }

    bool is_unbounded() const { return std::isinf(upper); }

    bool contains(double t) const {
        if (lower_closed ? t < lower : t <= lower) return false;
        if (is_unbounded()) return true;
        return upper_closed ? t <= upper : t < upper;
    }

    /// True for [0, inf), the default interval of an unannotated operator.
    bool is_default() const {
        return lower == 0.0 && lower_closed && is_unbounded();
    }

    bool operator==(const Interval& o) const {
        if (is_unbounded() && o.is_unbounded())
            return lower == o.lower && lower_closed == o.lower_closed;
        return lower == o.lower && upper == o.upper &&
               lower_closed == o.lower_closed && upper_closed == o.upper_closed;
    }

    void validate() const {
        if (!(lower >= 0.0)) throw Error("interval lower bound must be >= 0");
        if (!(lower <= upper)) throw Error("interval has lower > upper");
        if (lower == upper && !is_unbounded() && !(lower_closed && upper_closed))
            throw Error("degenerate interval must be closed on both ends");
    }

    std::string to_string() const;
};

}  // namespace stlf
