#include "stlf/monitor.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "stlf/distance.hpp"

namespace stlf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Robustness value plus the timestamp of the predicate sample that decided
// it.  Ties in min/max resolve toward the earliest time.
struct Rob {
    double v;
    double t;
};

Rob pick_max(const Rob& a, const Rob& b) {
    if (b.v > a.v || (b.v == a.v && b.t < a.t)) return b;
    return a;
}

Rob pick_min(const Rob& a, const Rob& b) {
    if (b.v < a.v || (b.v == a.v && b.t < a.t)) return b;
    return a;
}

// Lower/upper bounds of the robustness over all proper extensions of the
// trace; used only for the extension-sensitivity flag.
struct Bounds {
    double lo;
    double hi;
};

class Evaluator {
public:
    Evaluator(const Formula& f, const Trace& tr) : tr_(tr), n_(tr.sample_count()) {
        if (n_ == 0) throw Error("monitor: trace has no samples");
        for (const auto& name : free_channels(f)) {
            if (tr.column(name) == nullptr && !tr.parameter(name).has_value())
                throw Error("monitor: formula references channel '" + name +
                            "' absent from the trace");
        }
    }

    const std::vector<Rob>& robust(const Formula& f) {
        auto it = memo_.find(f.raw());
        if (it != memo_.end()) return it->second;
        std::vector<Rob> vec = compute_robust(f);
        return memo_.emplace(f.raw(), std::move(vec)).first->second;
    }

    const std::vector<char>& boolean(const Formula& f) {
        auto it = bool_memo_.find(f.raw());
        if (it != bool_memo_.end()) return it->second;
        std::vector<char> vec = compute_boolean(f);
        return bool_memo_.emplace(f.raw(), std::move(vec)).first->second;
    }

    const std::vector<Bounds>& bounds(const Formula& f) {
        auto it = bounds_memo_.find(f.raw());
        if (it != bounds_memo_.end()) return it->second;
        std::vector<Bounds> vec = compute_bounds(f);
        return bounds_memo_.emplace(f.raw(), std::move(vec)).first->second;
    }

private:
    double time(std::size_t i) const { return tr_.time_at(i); }

    std::map<std::string, double> point_at(std::size_t i) const {
        std::map<std::string, double> pt = tr_.params();
        for (const auto& name : tr_.space().sample_channels())
            pt[name] = (*tr_.column(name))[i];
        return pt;
    }

    std::vector<double> predicate_distances(const PredicateSet& set) {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = signed_distance(point_at(i), set);
        return out;
    }

    // True when a proper extension could place a sample t with
    // (t - t_i) in I beyond the end of the trace.
    bool window_extendable(const Interval& iv, std::size_t i) const {
        if (iv.is_unbounded()) return true;
        return time(i) + iv.upper > time(n_ - 1);
    }

    // ── robustness ──────────────────────────────────────────────────────

    std::vector<Rob> compute_robust(const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::True: {
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = {kInf, time(i)};
                return out;
            }
            case FormulaKind::Pred: {
                auto dist = predicate_distances(f.predicate());
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = {dist[i], time(i)};
                return out;
            }
            case FormulaKind::Not: {
                std::vector<Rob> out = robust(f.lhs());
                for (auto& r : out) r.v = -r.v;
                return out;
            }
            case FormulaKind::And: {
                const auto& a = robust(f.lhs());
                const auto& b = robust(f.rhs());
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = pick_min(a[i], b[i]);
                return out;
            }
            case FormulaKind::Or: {
                const auto& a = robust(f.lhs());
                const auto& b = robust(f.rhs());
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = pick_max(a[i], b[i]);
                return out;
            }
            case FormulaKind::Implies: {
                const auto& a = robust(f.lhs());
                const auto& b = robust(f.rhs());
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i)
                    out[i] = pick_max(Rob{-a[i].v, a[i].t}, b[i]);
                return out;
            }
            case FormulaKind::Next: {
                const auto& a = robust(f.lhs());
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i + 1 < n_; ++i) out[i] = a[i + 1];
                out[n_ - 1] = {-kInf, time(n_ - 1)};
                return out;
            }
            case FormulaKind::Eventually: {
                const auto& a = robust(f.lhs());
                const Interval& iv = f.interval();
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Rob acc{-kInf, time(i)};
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!iv.is_unbounded() && dt > iv.upper) break;
                        if (iv.contains(dt)) acc = pick_max(acc, a[j]);
                    }
                    out[i] = acc;
                }
                return out;
            }
            case FormulaKind::Always: {
                const auto& a = robust(f.lhs());
                const Interval& iv = f.interval();
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Rob acc{kInf, time(i)};
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!iv.is_unbounded() && dt > iv.upper) break;
                        if (iv.contains(dt)) acc = pick_min(acc, a[j]);
                    }
                    out[i] = acc;
                }
                return out;
            }
            case FormulaKind::Until: {
                const auto& a = robust(f.lhs());
                const auto& b = robust(f.rhs());
                const Interval& iv = f.interval();
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Rob acc{-kInf, time(i)};
                    Rob run_a{kInf, time(i)};  // min of a over [i, j)
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!iv.is_unbounded() && dt > iv.upper) break;
                        if (iv.contains(dt)) acc = pick_max(acc, pick_min(b[j], run_a));
                        run_a = pick_min(run_a, a[j]);
                    }
                    out[i] = acc;
                }
                return out;
            }
            case FormulaKind::Release: {
                // a R b == min_j max(b_j, max_{i<=k<j} a_k)
                const auto& a = robust(f.lhs());
                const auto& b = robust(f.rhs());
                const Interval& iv = f.interval();
                std::vector<Rob> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Rob acc{kInf, time(i)};
                    Rob run_a{-kInf, time(i)};  // max of a over [i, j)
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!iv.is_unbounded() && dt > iv.upper) break;
                        if (iv.contains(dt)) acc = pick_min(acc, pick_max(b[j], run_a));
                        run_a = pick_max(run_a, a[j]);
                    }
                    out[i] = acc;
                }
                return out;
            }
        }
        throw Error("robustness: unknown formula kind");
    }

    // ── boolean semantics (independent oracle) ──────────────────────────

    std::vector<char> compute_boolean(const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::True:
                return std::vector<char>(n_, 1);
            case FormulaKind::Pred: {
                std::vector<char> out(n_);
                for (std::size_t i = 0; i < n_; ++i)
                    out[i] = contains_point(f.predicate(), point_at(i)) ? 1 : 0;
                return out;
            }
            case FormulaKind::Not: {
                std::vector<char> out = boolean(f.lhs());
                for (auto& v : out) v = !v;
                return out;
            }
            case FormulaKind::And: {
                const auto& a = boolean(f.lhs());
                const auto& b = boolean(f.rhs());
                std::vector<char> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = a[i] && b[i];
                return out;
            }
            case FormulaKind::Or: {
                const auto& a = boolean(f.lhs());
                const auto& b = boolean(f.rhs());
                std::vector<char> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = a[i] || b[i];
                return out;
            }
            case FormulaKind::Implies: {
                const auto& a = boolean(f.lhs());
                const auto& b = boolean(f.rhs());
                std::vector<char> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = !a[i] || b[i];
                return out;
            }
            case FormulaKind::Next: {
                const auto& a = boolean(f.lhs());
                std::vector<char> out(n_, 0);
                for (std::size_t i = 0; i + 1 < n_; ++i) out[i] = a[i + 1];
                return out;
            }
            case FormulaKind::Eventually: {
                const auto& a = boolean(f.lhs());
                std::vector<char> out(n_, 0);
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt) && a[j]) {
                            out[i] = 1;
                            break;
                        }
                    }
                return out;
            }
            case FormulaKind::Always: {
                const auto& a = boolean(f.lhs());
                std::vector<char> out(n_, 1);
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt) && !a[j]) {
                            out[i] = 0;
                            break;
                        }
                    }
                return out;
            }
            case FormulaKind::Until: {
                const auto& a = boolean(f.lhs());
                const auto& b = boolean(f.rhs());
                std::vector<char> out(n_, 0);
                for (std::size_t i = 0; i < n_; ++i) {
                    bool lhs_holds = true;
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt) && b[j] && lhs_holds) {
                            out[i] = 1;
                            break;
                        }
                        lhs_holds = lhs_holds && a[j];
                        if (!lhs_holds) break;  // no later candidate can qualify
                    }
                }
                return out;
            }
            case FormulaKind::Release: {
                const auto& a = boolean(f.lhs());
                const auto& b = boolean(f.rhs());
                std::vector<char> out(n_, 1);
                for (std::size_t i = 0; i < n_; ++i) {
                    bool released = false;  // some a at k < j
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt) && !b[j] && !released) {
                            out[i] = 0;
                            break;
                        }
                        released = released || a[j];
                    }
                }
                return out;
            }
        }
        throw Error("boolean_satisfaction: unknown formula kind");
    }

    // ── extension bounds ────────────────────────────────────────────────

    std::vector<Bounds> compute_bounds(const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::True:
                return std::vector<Bounds>(n_, {kInf, kInf});
            case FormulaKind::Pred: {
                auto dist = predicate_distances(f.predicate());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i) out[i] = {dist[i], dist[i]};
                return out;
            }
            case FormulaKind::Not: {
                std::vector<Bounds> out = bounds(f.lhs());
                for (auto& b : out) b = {-b.hi, -b.lo};
                return out;
            }
            case FormulaKind::And: {
                const auto& a = bounds(f.lhs());
                const auto& b = bounds(f.rhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i)
                    out[i] = {std::min(a[i].lo, b[i].lo), std::min(a[i].hi, b[i].hi)};
                return out;
            }
            case FormulaKind::Or: {
                const auto& a = bounds(f.lhs());
                const auto& b = bounds(f.rhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i)
                    out[i] = {std::max(a[i].lo, b[i].lo), std::max(a[i].hi, b[i].hi)};
                return out;
            }
            case FormulaKind::Implies: {
                const auto& a = bounds(f.lhs());
                const auto& b = bounds(f.rhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i)
                    out[i] = {std::max(-a[i].hi, b[i].lo), std::max(-a[i].lo, b[i].hi)};
                return out;
            }
            case FormulaKind::Next: {
                const auto& a = bounds(f.lhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i + 1 < n_; ++i) out[i] = a[i + 1];
                out[n_ - 1] = {-kInf, kInf};  // an extension supplies the next sample
                return out;
            }
            case FormulaKind::Eventually: {
                const auto& a = bounds(f.lhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Bounds acc{-kInf, -kInf};
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt)) {
                            acc.lo = std::max(acc.lo, a[j].lo);
                            acc.hi = std::max(acc.hi, a[j].hi);
                        }
                    }
                    if (window_extendable(f.interval(), i)) acc.hi = kInf;
                    out[i] = acc;
                }
                return out;
            }
            case FormulaKind::Always: {
                const auto& a = bounds(f.lhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Bounds acc{kInf, kInf};
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt)) {
                            acc.lo = std::min(acc.lo, a[j].lo);
                            acc.hi = std::min(acc.hi, a[j].hi);
                        }
                    }
                    if (window_extendable(f.interval(), i)) acc.lo = -kInf;
                    out[i] = acc;
                }
                return out;
            }
            case FormulaKind::Until: {
                const auto& a = bounds(f.lhs());
                const auto& b = bounds(f.rhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Bounds acc{-kInf, -kInf};
                    Bounds run_a{kInf, kInf};
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt)) {
                            acc.lo = std::max(acc.lo, std::min(b[j].lo, run_a.lo));
                            acc.hi = std::max(acc.hi, std::min(b[j].hi, run_a.hi));
                        }
                        run_a.lo = std::min(run_a.lo, a[j].lo);
                        run_a.hi = std::min(run_a.hi, a[j].hi);
                    }
                    // A virtual candidate past the end: phi2 unconstrained,
                    // phi1 must hold over all real samples from i on.
                    if (window_extendable(f.interval(), i))
                        acc.hi = std::max(acc.hi, run_a.hi);
                    out[i] = acc;
                }
                return out;
            }
            case FormulaKind::Release: {
                const auto& a = bounds(f.lhs());
                const auto& b = bounds(f.rhs());
                std::vector<Bounds> out(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    Bounds acc{kInf, kInf};
                    Bounds run_a{-kInf, -kInf};
                    for (std::size_t j = i; j < n_; ++j) {
                        double dt = time(j) - time(i);
                        if (!f.interval().is_unbounded() && dt > f.interval().upper) break;
                        if (f.interval().contains(dt)) {
                            acc.lo = std::min(acc.lo, std::max(b[j].lo, run_a.lo));
                            acc.hi = std::min(acc.hi, std::max(b[j].hi, run_a.hi));
                        }
                        run_a.lo = std::max(run_a.lo, a[j].lo);
                        run_a.hi = std::max(run_a.hi, a[j].hi);
                    }
                    if (window_extendable(f.interval(), i))
                        acc.lo = std::min(acc.lo, run_a.lo);
                    out[i] = acc;
                }
                return out;
            }
        }
        throw Error("bounds: unknown formula kind");
    }

    const Trace& tr_;
    std::size_t n_;
    std::map<const Formula::Node*, std::vector<Rob>> memo_;
    std::map<const Formula::Node*, std::vector<char>> bool_memo_;
    std::map<const Formula::Node*, std::vector<Bounds>> bounds_memo_;
};

void check_index(const Trace& tr, std::size_t i) {
    if (i >= tr.sample_count())
        throw std::out_of_range("monitor: sample index " + std::to_string(i) +
                                " out of range (trace has " +
                                std::to_string(tr.sample_count()) + " samples)");
}

}  // namespace

double robustness(const Formula& f, const Trace& tr, std::size_t i) {
    check_index(tr, i);
    Evaluator ev(f, tr);
    return ev.robust(f)[i].v;
}

bool boolean_satisfaction(const Formula& f, const Trace& tr, std::size_t i) {
    check_index(tr, i);
    Evaluator ev(f, tr);
    return ev.boolean(f)[i] != 0;
}

double worst_time(const Formula& f, const Trace& tr) {
    check_index(tr, 0);
    Evaluator ev(f, tr);
    return ev.robust(f)[0].t;
}

MonitorVerdict monitor_verdict(const Formula& f, const Trace& tr) {
    check_index(tr, 0);
    Evaluator ev(f, tr);
    Rob r = ev.robust(f)[0];
    Bounds b = ev.bounds(f)[0];
    MonitorVerdict v;
    v.robustness = r.v;
    v.satisfied = r.v > 0.0;
    v.worst_time = r.t;
    v.inconclusive = (r.v == 0.0);
    // Conservative: the verdict may change if some extension's robustness
    // could land on the other side of zero.
    v.extension_sensitive =
        v.inconclusive ? (b.lo < 0.0 || b.hi > 0.0)
                       : (v.satisfied ? b.lo <= 0.0 : b.hi >= 0.0);
    return v;
}

}  // namespace stlf
