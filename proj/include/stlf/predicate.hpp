// ============================================================================
// stlf/predicate.hpp — atomic predicates and the sets they denote
// ============================================================================
//
// A predicate is either a linear inequality over named channels
// (sum_i c_i * x_i  REL  bound) or a reference to a boolean channel, which
// is encoded numerically as +/-1 and means "value >= 0".
//
// A PredicateSet is a union of conjunctions of predicates: the subset of
// signal space where the predicate expression holds.  An empty union is the
// empty set; a disjunct with an empty conjunction is the full space.
//
// ============================================================================

#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stlf/interval.hpp"

namespace stlf {

enum class Relation { Ge, Gt, Le, Lt };

const char* relation_symbol(Relation r);

struct LinearPredicate {
    std::map<std::string, double> coeffs;  // channel -> coefficient
    Relation rel = Relation::Ge;
    double bound = 0.0;

    bool operator==(const LinearPredicate& o) const {
        return coeffs == o.coeffs && rel == o.rel && bound == o.bound;
    }
};

struct BooleanPredicate {
    std::string channel;

    bool operator==(const BooleanPredicate& o) const { return channel == o.channel; }
};

using AtomicPredicate = std::variant<LinearPredicate, BooleanPredicate>;

/// Normal form a.x <= c (strict: a.x < c) used by membership and distance.
struct Halfspace {
    std::map<std::string, double> coeffs;
    double bound = 0.0;
    bool strict = false;
};

Halfspace to_halfspace(const AtomicPredicate& p);

struct PredicateSet {
    // Union of conjunctions (disjunctive normal form over atomic predicates).
    std::vector<std::vector<AtomicPredicate>> clauses;

    static PredicateSet atom(AtomicPredicate p) {
        PredicateSet s;
        s.clauses.push_back({std::move(p)});
        return s;
    }

    static PredicateSet linear(std::map<std::string, double> coeffs, Relation rel,
                               double bound) {
        return atom(LinearPredicate{std::move(coeffs), rel, bound});
    }

    static PredicateSet boolean_channel(std::string name) {
        return atom(BooleanPredicate{std::move(name)});
    }

    static PredicateSet empty_set() { return PredicateSet{}; }

    static PredicateSet full_space() {
        PredicateSet s;
        s.clauses.push_back({});
        return s;
    }

    bool operator==(const PredicateSet& o) const { return clauses == o.clauses; }

    /// Channel names referenced by any predicate, in sorted order.
    std::set<std::string> channels() const;

    /// True iff the set is expressible as a single linear predicate or
    /// boolean channel reference (the forms the formula grammar can print).
    bool is_atomic() const {
        return clauses.size() == 1 && clauses.front().size() == 1;
    }
};

/// Set membership of a point, honoring strict vs non-strict relations.
/// Throws on a channel missing from the point.
bool contains_point(const PredicateSet& set, const std::map<std::string, double>& point);

/// Exact set complement via De Morgan expansion.  The result size is the
/// product of clause sizes, so this is intended for the small predicate
/// sets that arise in specifications, not as a general-purpose operation.
PredicateSet complement(const PredicateSet& set);

}  // namespace stlf
