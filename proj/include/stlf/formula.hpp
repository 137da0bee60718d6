// ============================================================================
// stlf/formula.hpp — STL formula AST
// ============================================================================
//
// Formulas are immutable trees shared through shared_ptr, so values are
// cheap to copy and safe to hand to concurrent monitors.  The full operator
// set is kept in the tree (Implies, Eventually, Always, Release included);
// desugar() rewrites to the core {True, Pred, Not, And, Or, Next, Until}.
//
// ============================================================================

#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stlf/interval.hpp"
#include "stlf/predicate.hpp"

namespace stlf {

enum class FormulaKind {
    True,
    Pred,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Eventually,
    Always,
};

class Formula {
public:
    struct Node {
        FormulaKind kind;
        PredicateSet pred;            // Pred only
        Interval interval;            // temporal operators only
        std::shared_ptr<const Node> lhs;  // unary child / left operand
        std::shared_ptr<const Node> rhs;  // right operand of binary operators
    };

    Formula() : Formula(truth()) {}

    // ── constructors ────────────────────────────────────────────────────
    static Formula truth();
    static Formula pred(PredicateSet set);
    static Formula negate(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula next(Formula f);
    static Formula until(Interval i, Formula a, Formula b);
    static Formula release(Interval i, Formula a, Formula b);
    static Formula eventually(Interval i, Formula f);
    static Formula always(Interval i, Formula f);
    static Formula eventually(Formula f) { return eventually(Interval::unbounded(), std::move(f)); }
    static Formula always(Formula f) { return always(Interval::unbounded(), std::move(f)); }

    // Convenience atoms.
    static Formula linear(std::map<std::string, double> coeffs, Relation rel, double bound) {
        return pred(PredicateSet::linear(std::move(coeffs), rel, bound));
    }
    static Formula boolean_channel(std::string name) {
        return pred(PredicateSet::boolean_channel(std::move(name)));
    }

    // ── accessors ───────────────────────────────────────────────────────
    FormulaKind kind() const { return node_->kind; }
    const PredicateSet& predicate() const { return node_->pred; }
    const Interval& interval() const { return node_->interval; }
    Formula lhs() const { return Formula(node_->lhs); }
    Formula rhs() const { return Formula(node_->rhs); }
    const Node* raw() const { return node_.get(); }

    bool operator==(const Formula& o) const { return structurally_equal(*this, o); }

    static bool structurally_equal(const Formula& a, const Formula& b);

    /// Number of nodes in the tree.
    std::size_t size() const;

private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Minimum trace extent needed to evaluate every bounded interval of f.
/// seconds is +inf when any unbounded interval appears; next_steps counts
/// the deepest chain of Next operators and is reported separately since it
/// is measured in samples, not seconds.
struct Horizon {
    double seconds = 0.0;
    int next_steps = 0;

    bool unbounded() const { return std::isinf(seconds); }
};

/// Rewrite to the core operator set.  Semantics-preserving: robustness and
/// boolean satisfaction are unchanged on every trace.
Formula desugar(const Formula& f);

Horizon formula_horizon(const Formula& f);

/// Every channel referenced by any predicate, in sorted (deterministic) order.
std::vector<std::string> free_channels(const Formula& f);

/// Concrete-syntax printer; parse_formula(print_formula(f)) is structurally
/// equal to f whenever every predicate of f is atomic (single linear
/// inequality or boolean channel, the forms the grammar can express).
std::string print_formula(const Formula& f);

}  // namespace stlf
