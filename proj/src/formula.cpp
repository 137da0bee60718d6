#include "stlf/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace stlf {

namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;

NodePtr make_node(Formula::Node n) {
    return std::make_shared<const Formula::Node>(std::move(n));
}

}  // namespace

Formula Formula::truth() {
    static const NodePtr t = make_node({FormulaKind::True, {}, {}, nullptr, nullptr});
    return Formula(t);
}

Formula Formula::pred(PredicateSet set) {
    return Formula(make_node({FormulaKind::Pred, std::move(set), {}, nullptr, nullptr}));
}

Formula Formula::negate(Formula f) {
    return Formula(make_node({FormulaKind::Not, {}, {}, std::move(f.node_), nullptr}));
}

Formula Formula::conj(Formula a, Formula b) {
    return Formula(make_node({FormulaKind::And, {}, {}, std::move(a.node_), std::move(b.node_)}));
}

Formula Formula::disj(Formula a, Formula b) {
    return Formula(make_node({FormulaKind::Or, {}, {}, std::move(a.node_), std::move(b.node_)}));
}

Formula Formula::implies(Formula a, Formula b) {
    return Formula(make_node({FormulaKind::Implies, {}, {}, std::move(a.node_), std::move(b.node_)}));
}

Formula Formula::next(Formula f) {
    return Formula(make_node({FormulaKind::Next, {}, {}, std::move(f.node_), nullptr}));
}

Formula Formula::until(Interval i, Formula a, Formula b) {
    i.validate();
    return Formula(make_node({FormulaKind::Until, {}, i, std::move(a.node_), std::move(b.node_)}));
}

Formula Formula::release(Interval i, Formula a, Formula b) {
    i.validate();
    return Formula(make_node({FormulaKind::Release, {}, i, std::move(a.node_), std::move(b.node_)}));
}

Formula Formula::eventually(Interval i, Formula f) {
    i.validate();
    return Formula(make_node({FormulaKind::Eventually, {}, i, std::move(f.node_), nullptr}));
}

Formula Formula::always(Interval i, Formula f) {
    i.validate();
    return Formula(make_node({FormulaKind::Always, {}, i, std::move(f.node_), nullptr}));
}

bool Formula::structurally_equal(const Formula& a, const Formula& b) {
    const Node* x = a.node_.get();
    const Node* y = b.node_.get();
    if (x == y) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case FormulaKind::True:
            return true;
        case FormulaKind::Pred:
            return x->pred == y->pred;
        case FormulaKind::Not:
        case FormulaKind::Next:
            return structurally_equal(Formula(x->lhs), Formula(y->lhs));
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            return structurally_equal(Formula(x->lhs), Formula(y->lhs)) &&
                   structurally_equal(Formula(x->rhs), Formula(y->rhs));
        case FormulaKind::Eventually:
        case FormulaKind::Always:
            return x->interval == y->interval &&
                   structurally_equal(Formula(x->lhs), Formula(y->lhs));
        case FormulaKind::Until:
        case FormulaKind::Release:
            return x->interval == y->interval &&
                   structurally_equal(Formula(x->lhs), Formula(y->lhs)) &&
                   structurally_equal(Formula(x->rhs), Formula(y->rhs));
    }
    return false;
}

std::size_t Formula::size() const {
    std::size_t n = 1;
    if (node_->lhs) n += Formula(node_->lhs).size();
    if (node_->rhs) n += Formula(node_->rhs).size();
    return n;
}

Formula desugar(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::Pred:
            return f;
        case FormulaKind::Not:
            return Formula::negate(desugar(f.lhs()));
        case FormulaKind::And:
            return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
        case FormulaKind::Or:
            return Formula::disj(desugar(f.lhs()), desugar(f.rhs()));
        case FormulaKind::Implies:
            // a -> b  ==  !a || b
            return Formula::disj(Formula::negate(desugar(f.lhs())), desugar(f.rhs()));
        case FormulaKind::Next:
            return Formula::next(desugar(f.lhs()));
        case FormulaKind::Until:
            return Formula::until(f.interval(), desugar(f.lhs()), desugar(f.rhs()));
        case FormulaKind::Release:
            // a R b  ==  !(!a U !b)
            return Formula::negate(Formula::until(f.interval(),
                                                  Formula::negate(desugar(f.lhs())),
                                                  Formula::negate(desugar(f.rhs()))));
        case FormulaKind::Eventually:
            // <> a  ==  true U a
            return Formula::until(f.interval(), Formula::truth(), desugar(f.lhs()));
        case FormulaKind::Always:
            // [] a  ==  !(true U !a)
            return Formula::negate(Formula::until(f.interval(), Formula::truth(),
                                                  Formula::negate(desugar(f.lhs()))));
    }
    throw Error("desugar: unknown formula kind");
}

Horizon formula_horizon(const Formula& f) {
    auto combine = [](Horizon a, Horizon b) {
        return Horizon{std::max(a.seconds, b.seconds), std::max(a.next_steps, b.next_steps)};
    };
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::Pred:
            return {0.0, 0};
        case FormulaKind::Not:
            return formula_horizon(f.lhs());
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            return combine(formula_horizon(f.lhs()), formula_horizon(f.rhs()));
        case FormulaKind::Next: {
            Horizon h = formula_horizon(f.lhs());
            return {h.seconds, h.next_steps + 1};
        }
        case FormulaKind::Eventually:
        case FormulaKind::Always: {
            Horizon h = formula_horizon(f.lhs());
            return {f.interval().upper + h.seconds, h.next_steps};
        }
        case FormulaKind::Until:
        case FormulaKind::Release: {
            Horizon h = combine(formula_horizon(f.lhs()), formula_horizon(f.rhs()));
            return {f.interval().upper + h.seconds, h.next_steps};
        }
    }
    throw Error("formula_horizon: unknown formula kind");
}

namespace {

void collect_channels(const Formula& f, std::set<std::string>& out) {
    if (f.kind() == FormulaKind::Pred) {
        auto chans = f.predicate().channels();
        out.insert(chans.begin(), chans.end());
        return;
    }
    if (f.raw()->lhs) collect_channels(f.lhs(), out);
    if (f.raw()->rhs) collect_channels(f.rhs(), out);
}

}  // namespace

std::vector<std::string> free_channels(const Formula& f) {
    std::set<std::string> s;
    collect_channels(f, s);
    return {s.begin(), s.end()};
}

// ── printer ─────────────────────────────────────────────────────────────────

namespace {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string print_linear(const LinearPredicate& p) {
    std::string s;
    bool first = true;
    for (const auto& [name, c] : p.coeffs) {
        double mag = std::fabs(c);
        bool neg = std::signbit(c) && c != 0.0;
        if (first) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        if (mag != 1.0 || c == 0.0) {
            s += format_number(c == 0.0 ? c : mag);
            s += "*";
        }
        s += name;
        first = false;
    }
    if (first) s += "0";  // empty linear combination
    s += " ";
    s += relation_symbol(p.rel);
    s += " ";
    s += format_number(p.bound);
    return s;
}

std::string print_predicate(const PredicateSet& set) {
    if (set.is_atomic()) {
        const AtomicPredicate& a = set.clauses.front().front();
        if (const auto* b = std::get_if<BooleanPredicate>(&a)) return b->channel;
        return print_linear(std::get<LinearPredicate>(a));
    }
    // Non-atomic sets fall outside the grammar; render them readably.
    if (set.clauses.empty()) return "<empty-set>";
    std::string s = "<set:";
    for (std::size_t j = 0; j < set.clauses.size(); ++j) {
        if (j) s += " | ";
        if (set.clauses[j].empty()) s += "all";
        for (std::size_t k = 0; k < set.clauses[j].size(); ++k) {
            if (k) s += " & ";
            const auto& a = set.clauses[j][k];
            if (const auto* b = std::get_if<BooleanPredicate>(&a))
                s += b->channel;
            else
                s += print_linear(std::get<LinearPredicate>(a));
        }
    }
    s += ">";
    return s;
}

std::string interval_suffix(const Interval& i) {
    if (i.is_default()) return "";
    return "_" + i.to_string();
}

// Precedence levels: 0 atoms, 1 unary, 2 U/R, 3 &&, 4 ||, 5 ->.
int level_of(FormulaKind k) {
    switch (k) {
        case FormulaKind::True:
        case FormulaKind::Pred: return 0;
        case FormulaKind::Not:
        case FormulaKind::Next:
        case FormulaKind::Eventually:
        case FormulaKind::Always: return 1;
        case FormulaKind::Until:
        case FormulaKind::Release: return 2;
        case FormulaKind::And: return 3;
        case FormulaKind::Or: return 4;
        case FormulaKind::Implies: return 5;
    }
    return 0;
}

std::string print_at(const Formula& f, int max_level);

std::string wrap(const Formula& f, int max_level) {
    if (level_of(f.kind()) > max_level) return "(" + print_at(f, 5) + ")";
    return print_at(f, max_level);
}

std::string print_at(const Formula& f, int) {
    switch (f.kind()) {
        case FormulaKind::True:
            return "true";
        case FormulaKind::Pred:
            return print_predicate(f.predicate());
        case FormulaKind::Not:
            return "!" + wrap(f.lhs(), 1);
        case FormulaKind::Next:
            return "X " + wrap(f.lhs(), 1);
        case FormulaKind::Eventually:
            return "<>" + interval_suffix(f.interval()) + " " + wrap(f.lhs(), 1);
        case FormulaKind::Always:
            return "[]" + interval_suffix(f.interval()) + " " + wrap(f.lhs(), 1);
        case FormulaKind::Until:
            // right-associative: left operand must bind tighter
            return wrap(f.lhs(), 1) + " U" + interval_suffix(f.interval()) + " " +
                   wrap(f.rhs(), 2);
        case FormulaKind::Release:
            return wrap(f.lhs(), 1) + " R" + interval_suffix(f.interval()) + " " +
                   wrap(f.rhs(), 2);
        case FormulaKind::And:
            // left-associative
            return wrap(f.lhs(), 3) + " && " + wrap(f.rhs(), 2);
        case FormulaKind::Or:
            return wrap(f.lhs(), 4) + " || " + wrap(f.rhs(), 3);
        case FormulaKind::Implies:
            // right-associative
            return wrap(f.lhs(), 4) + " -> " + wrap(f.rhs(), 5);
    }
    throw Error("print_formula: unknown formula kind");
}

}  // namespace

std::string print_formula(const Formula& f) { return print_at(f, 5); }

}  // namespace stlf
