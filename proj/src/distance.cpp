#include "stlf/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stlf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// A conjunction of halfspaces restricted to the channels it references,
// flattened to dense vectors over a local dimension index.  Distances are
// computed against closures; strictness only matters for the degenerate
// emptiness check below.
struct LocalPolyhedron {
    std::vector<std::string> dims;              // channel names
    std::vector<std::vector<double>> normals;   // one row per face
    std::vector<double> bounds;                 // a.x <= bound
    std::vector<char> strict;                   // a.x < bound when set
    std::vector<double> point;                  // the query point in local coords
};

LocalPolyhedron localize(const std::vector<Halfspace>& faces,
                         const std::map<std::string, double>& point) {
    LocalPolyhedron lp;
    std::map<std::string, std::size_t> dim_index;
    for (const auto& h : faces)
        for (const auto& [name, _] : h.coeffs)
            if (dim_index.emplace(name, dim_index.size()).second) lp.dims.push_back(name);
    lp.point.resize(lp.dims.size());
    for (std::size_t d = 0; d < lp.dims.size(); ++d) {
        auto it = point.find(lp.dims[d]);
        if (it == point.end()) throw Error("point is missing channel '" + lp.dims[d] + "'");
        lp.point[d] = it->second;
    }
    for (const auto& h : faces) {
        std::vector<double> row(lp.dims.size(), 0.0);
        for (const auto& [name, c] : h.coeffs) row[dim_index[name]] = c;
        lp.normals.push_back(std::move(row));
        lp.bounds.push_back(h.bound);
        lp.strict.push_back(h.strict ? 1 : 0);
    }
    return lp;
}

// True when a strict face is paired with an antiparallel coincident face,
// pinning the polyhedron inside a hyperplane that the strict face excludes
// (the "{y <= 0} union {y >= 0}" seam).  Deeper degeneracies (a strict
// hyperplane containing a lower-dimensional closed polyhedron through more
// than two faces) are not detected; such sets do not arise from the
// predicate grammar.
bool strictly_empty(const LocalPolyhedron& lp) {
    const std::size_t nf = lp.normals.size();
    std::vector<double> norm(nf, 0.0);
    for (std::size_t f = 0; f < nf; ++f) norm[f] = std::sqrt(dot(lp.normals[f], lp.normals[f]));
    for (std::size_t i = 0; i < nf; ++i) {
        if (!lp.strict[i] || norm[i] < 1e-12) continue;
        for (std::size_t j = 0; j < nf; ++j) {
            if (j == i || norm[j] < 1e-12) continue;
            // antiparallel: a_j/|a_j| == -a_i/|a_i|, coincident boundary
            double cosine = dot(lp.normals[i], lp.normals[j]) / (norm[i] * norm[j]);
            if (cosine > -1.0 + 1e-12) continue;
            if (std::fabs(lp.bounds[j] / norm[j] + lp.bounds[i] / norm[i]) < 1e-9)
                return true;
        }
    }
    return false;
}

// Solve the symmetric system M y = r by Gaussian elimination with partial
// pivoting.  Returns false when M is (numerically) singular.
bool solve_dense(std::vector<std::vector<double>> M, std::vector<double> r,
                 std::vector<double>& y) {
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(M[i][col]) > std::fabs(M[pivot][col])) pivot = i;
        if (std::fabs(M[pivot][col]) < 1e-12) return false;
        std::swap(M[col], M[pivot]);
        std::swap(r[col], r[pivot]);
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = M[i][col] / M[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) M[i][j] -= f * M[col][j];
            r[i] -= f * r[col];
        }
    }
    y.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = r[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= M[i][j] * y[j];
        y[i] = s / M[i][i];
    }
    return true;
}

// Euclidean distance from lp.point to the polyhedron {x : normals.x <= bounds}.
// Exact: the projection satisfies the KKT conditions with some active face
// subset, so enumerating all subsets up to the space dimension and keeping
// feasible candidates yields the true minimizer.  Returns +inf when the
// polyhedron is empty, 0 when the point is inside.
double distance_to_polyhedron(const LocalPolyhedron& lp) {
    const std::size_t nf = lp.normals.size();
    const std::size_t nd = lp.dims.size();
    if (nf > 20)
        throw Error("predicate conjunction has too many faces for exact projection");
    if (strictly_empty(lp)) return kInf;

    auto feasible = [&](const std::vector<double>& x) {
        for (std::size_t f = 0; f < nf; ++f) {
            double margin = dot(lp.normals[f], x) - lp.bounds[f];
            double scale = std::max(1.0, std::fabs(lp.bounds[f]));
            if (margin > kFeasTol * scale) return false;
        }
        return true;
    };

    if (nf == 0 || feasible(lp.point)) return 0.0;

    double best = kInf;
    const std::size_t max_active = std::min(nf, nd);
    // Enumerate nonempty face subsets as bitmasks.
    for (std::size_t mask = 1; mask < (std::size_t{1} << nf); ++mask) {
        std::vector<std::size_t> active;
        for (std::size_t f = 0; f < nf; ++f)
            if (mask & (std::size_t{1} << f)) active.push_back(f);
        if (active.size() > max_active) continue;

        // Projection onto the affine set {A x = c}:
        //   x* = p - A^T (A A^T)^{-1} (A p - c)
        const std::size_t m = active.size();
        std::vector<std::vector<double>> gram(m, std::vector<double>(m));
        std::vector<double> resid(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j)
                gram[i][j] = dot(lp.normals[active[i]], lp.normals[active[j]]);
            resid[i] = dot(lp.normals[active[i]], lp.point) - lp.bounds[active[i]];
        }
        std::vector<double> lambda;
        if (!solve_dense(std::move(gram), std::move(resid), lambda)) continue;

        std::vector<double> x = lp.point;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t d = 0; d < nd; ++d)
                x[d] -= lambda[i] * lp.normals[active[i]][d];

        if (!feasible(x)) continue;
        double dist2 = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
            double delta = x[d] - lp.point[d];
            dist2 += delta * delta;
        }
        best = std::min(best, std::sqrt(dist2));
    }
    return best;
}

double distance_to_clause(const std::vector<Halfspace>& faces,
                          const std::map<std::string, double>& point) {
    return distance_to_polyhedron(localize(faces, point));
}

}  // namespace

double metric_distance(const Metric& m, const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
    if (m.kind != Metric::Kind::Euclidean) throw Error("unsupported metric");
    if (a.size() != b.size()) throw Error("metric_distance: mismatched point dimensions");
    double s = 0.0;
    auto ib = b.begin();
    for (const auto& [name, va] : a) {
        if (ib == b.end() || ib->first != name)
            throw Error("metric_distance: mismatched point channels");
        double d = va - ib->second;
        s += d * d;
        ++ib;
    }
    return std::sqrt(s);
}

double signed_distance(const std::map<std::string, double>& point, const PredicateSet& set,
                       const Metric& m) {
    if (m.kind != Metric::Kind::Euclidean) throw Error("unsupported metric");

    // Resolve all referenced channels up front so errors do not depend on
    // which branch the membership test takes.
    for (const auto& name : set.channels())
        if (point.find(name) == point.end())
            throw Error("point is missing channel '" + name + "'");

    if (set.clauses.empty()) return -kInf;  // empty set

    if (!contains_point(set, point)) {
        // Distance to the nearest disjunct, negated.
        double best = kInf;
        for (const auto& clause : set.clauses) {
            std::vector<Halfspace> faces;
            faces.reserve(clause.size());
            for (const auto& p : clause) faces.push_back(to_halfspace(p));
            best = std::min(best, distance_to_clause(faces, point));
        }
        return -best;
    }

    // Inside: distance to the complement, expanded one complemented face per
    // disjunct.  A faceless disjunct makes the set the full space.
    for (const auto& clause : set.clauses)
        if (clause.empty()) return kInf;

    double best = kInf;
    std::vector<std::size_t> choice(set.clauses.size(), 0);
    while (true) {
        std::vector<Halfspace> faces;
        faces.reserve(set.clauses.size());
        for (std::size_t j = 0; j < set.clauses.size(); ++j) {
            Halfspace h = to_halfspace(set.clauses[j][choice[j]]);
            for (auto& [_, c] : h.coeffs) c = -c;  // complement of a.x <= c is -a.x < -c
            h.bound = -h.bound;
            h.strict = !h.strict;
            faces.push_back(std::move(h));
        }
        best = std::min(best, distance_to_clause(faces, point));

        std::size_t j = 0;
        for (; j < choice.size(); ++j) {
            if (++choice[j] < set.clauses[j].size()) break;
            choice[j] = 0;
        }
        if (j == choice.size()) break;
    }
    return best;
}

}  // namespace stlf
