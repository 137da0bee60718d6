#include "stlf/predicate.hpp"

#include <cstdio>

namespace stlf {

const char* relation_symbol(Relation r) {
    switch (r) {
        case Relation::Ge: return ">=";
        case Relation::Gt: return ">";
        case Relation::Le: return "<=";
        case Relation::Lt: return "<";
    }
    return "?";
}

Halfspace to_halfspace(const AtomicPredicate& p) {
    if (const auto* b = std::get_if<BooleanPredicate>(&p)) {
        // channel >= 0  ==  -channel <= 0
        Halfspace h;
        h.coeffs[b->channel] = -1.0;
        h.bound = 0.0;
        h.strict = false;
        return h;
    }
    const auto& lin = std::get<LinearPredicate>(p);
    Halfspace h;
    switch (lin.rel) {
        case Relation::Le:
            h.coeffs = lin.coeffs;
            h.bound = lin.bound;
            h.strict = false;
            break;
        case Relation::Lt:
            h.coeffs = lin.coeffs;
            h.bound = lin.bound;
            h.strict = true;
            break;
        case Relation::Ge:
        case Relation::Gt:
            for (const auto& [name, c] : lin.coeffs) h.coeffs[name] = -c;
            h.bound = -lin.bound;
            h.strict = (lin.rel == Relation::Gt);
            break;
    }
    return h;
}

std::set<std::string> PredicateSet::channels() const {
    std::set<std::string> out;
    for (const auto& clause : clauses)
        for (const auto& p : clause) {
            if (const auto* b = std::get_if<BooleanPredicate>(&p)) {
                out.insert(b->channel);
            } else {
                for (const auto& [name, _] : std::get<LinearPredicate>(p).coeffs)
                    out.insert(name);
            }
        }
    return out;
}

namespace {

double evaluate_lhs(const Halfspace& h, const std::map<std::string, double>& point) {
    double v = 0.0;
    for (const auto& [name, c] : h.coeffs) {
        auto it = point.find(name);
        if (it == point.end()) throw Error("point is missing channel '" + name + "'");
        v += c * it->second;
    }
    return v;
}

bool satisfies(const Halfspace& h, const std::map<std::string, double>& point) {
    double v = evaluate_lhs(h, point);
    return h.strict ? v < h.bound : v <= h.bound;
}

}  // namespace

bool contains_point(const PredicateSet& set, const std::map<std::string, double>& point) {
    for (const auto& clause : set.clauses) {
        bool all = true;
        for (const auto& p : clause) {
            if (!satisfies(to_halfspace(p), point)) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

namespace {

AtomicPredicate negate_atom(const AtomicPredicate& p) {
    if (const auto* b = std::get_if<BooleanPredicate>(&p)) {
        // not(channel >= 0)  ==  channel < 0
        LinearPredicate lin;
        lin.coeffs[b->channel] = 1.0;
        lin.rel = Relation::Lt;
        lin.bound = 0.0;
        return lin;
    }
    LinearPredicate lin = std::get<LinearPredicate>(p);
    switch (lin.rel) {
        case Relation::Ge: lin.rel = Relation::Lt; break;
        case Relation::Gt: lin.rel = Relation::Le; break;
        case Relation::Le: lin.rel = Relation::Gt; break;
        case Relation::Lt: lin.rel = Relation::Ge; break;
    }
    return lin;
}

}  // namespace

PredicateSet complement(const PredicateSet& set) {
    // complement(union_j conj_j) = intersection_j union_f not(p_{j,f})
    // expanded into a union over one chosen negated predicate per clause.
    if (set.clauses.empty()) return PredicateSet::full_space();

    PredicateSet result;
    std::vector<std::size_t> choice(set.clauses.size(), 0);
    for (const auto& clause : set.clauses)
        if (clause.empty()) return PredicateSet::empty_set();  // full space present

    while (true) {
        std::vector<AtomicPredicate> conj;
        conj.reserve(set.clauses.size());
        for (std::size_t j = 0; j < set.clauses.size(); ++j)
            conj.push_back(negate_atom(set.clauses[j][choice[j]]));
        result.clauses.push_back(std::move(conj));

        // advance the mixed-radix counter
        std::size_t j = 0;
        for (; j < choice.size(); ++j) {
            if (++choice[j] < set.clauses[j].size()) break;
            choice[j] = 0;
        }
        if (j == choice.size()) break;
    }
    return result;
}

std::string Interval::to_string() const {
    auto num = [](double v) -> std::string {
        if (std::isinf(v)) return "inf";
        char buf[64];
        int n = snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf, static_cast<std::size_t>(n));
    };
    std::string s;
    s += lower_closed ? '[' : '(';
    s += num(lower);
    s += ',';
    s += num(upper);
    s += (is_unbounded() || !upper_closed) ? ')' : ']';
    return s;
}

}  // namespace stlf
