#ifndef PACKCLASS_GRAPHS_HPP
#define PACKCLASS_GRAPHS_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

// Graph machinery behind packing classes: induced-C4 detection, transitive
// orientation of comparability graphs, interval-graph recognition via the
// classical characterization (no induced C4 and transitively orientable
// complement), and an exact maximum-weight stable set.
//
// Instances stay tiny (a couple dozen rectangles), so adjacency is a single
// 64-bit mask per vertex and every routine favors simplicity over asymptotic
// finesse.

namespace packclass {

class SimpleGraph {
public:
    static constexpr int kMaxVertices = 64;

    explicit SimpleGraph(int n = 0) : n_(n), adj_(static_cast<std::size_t>(n), 0) {
        if (n < 0 || n > kMaxVertices)
            throw std::invalid_argument("SimpleGraph: vertex count out of range");
    }

    int vertex_count() const { return n_; }

    bool has_edge(int u, int v) const { return (adj_[u] >> v) & 1u; }

    void add_edge(int u, int v) {
        check(u, v);
        adj_[u] |= std::uint64_t{1} << v;
        adj_[v] |= std::uint64_t{1} << u;
    }

    void remove_edge(int u, int v) {
        check(u, v);
        adj_[u] &= ~(std::uint64_t{1} << v);
        adj_[v] &= ~(std::uint64_t{1} << u);
    }

    std::uint64_t neighbors(int u) const { return adj_[u]; }

    std::uint64_t all_vertices() const {
        return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    }

    int edge_count() const {
        int total = 0;
        for (int u = 0; u < n_; ++u) total += std::popcount(adj_[u]);
        return total / 2;
    }

    SimpleGraph complement() const {
        SimpleGraph g(n_);
        for (int u = 0; u < n_; ++u) g.adj_[u] = ~adj_[u] & all_vertices() & ~(std::uint64_t{1} << u);
        return g;
    }

    friend bool operator==(const SimpleGraph&, const SimpleGraph&) = default;

private:
    void check(int u, int v) const {
        if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v)
            throw std::invalid_argument("SimpleGraph: bad edge endpoints");
    }

    int n_;
    std::vector<std::uint64_t> adj_;
};

// Directed assignment over the edges of some graph: each edge gets exactly
// one direction.
class Orientation {
public:
    explicit Orientation(int n = 0) : n_(n), fwd_(static_cast<std::size_t>(n), 0) {}

    int vertex_count() const { return n_; }

    bool oriented(int u, int v) const { return (fwd_[u] >> v) & 1u; }  // u -> v

    void orient(int u, int v) {
        fwd_[u] |= std::uint64_t{1} << v;
        fwd_[v] &= ~(std::uint64_t{1} << u);
    }

    std::uint64_t successors(int u) const { return fwd_[u]; }

private:
    int n_;
    std::vector<std::uint64_t> fwd_;
};

// True when the orientation covers every edge of g exactly once and is
// transitive: u->v and v->w imply the edge uw exists and is oriented u->w.
inline bool orientation_is_transitive(const SimpleGraph& g, const Orientation& o) {
    const int n = g.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            const bool edge = g.has_edge(u, v);
            const bool dir = o.oriented(u, v) || o.oriented(v, u);
            if (edge != dir || (o.oriented(u, v) && o.oriented(v, u))) return false;
        }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (!o.oriented(u, v)) continue;
            for (int w = 0; w < n; ++w)
                if (o.oriented(v, w) && !o.oriented(u, w)) return false;
        }
    return true;
}

// Finds vertices a,b,c,d with cycle edges ab,bc,cd,da present and both
// chords absent. Scans antipodal pairs (a,c) and their common neighbors.
inline std::optional<std::array<int, 4>> find_induced_c4(const SimpleGraph& g) {
    const int n = g.vertex_count();
    for (int a = 0; a < n; ++a)
        for (int c = a + 1; c < n; ++c) {
            if (g.has_edge(a, c)) continue;
            const std::uint64_t common = g.neighbors(a) & g.neighbors(c);
            for (int b = 0; b < n; ++b) {
                if (!((common >> b) & 1u)) continue;
                for (int d = b + 1; d < n; ++d)
                    if (((common >> d) & 1u) && !g.has_edge(b, d))
                        return std::array<int, 4>{a, b, c, d};
            }
        }
    return std::nullopt;
}

// Transitive orientation by implication classes: repeatedly seed an
// unoriented edge, close it under the forcing relation of the remaining
// graph, and strip the class. A class forcing both directions of some edge
// certifies that no transitive orientation exists.
inline std::optional<Orientation> find_transitive_orientation(const SimpleGraph& g) {
    const int n = g.vertex_count();
    Orientation out(n);
    SimpleGraph rem = g;  // edges not yet covered by a class

    std::vector<std::pair<int, int>> queue;
    std::vector<signed char> cls(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (!rem.has_edge(a, b)) continue;

            // class membership: 1 means x->y chosen for this implication class
            std::fill(cls.begin(), cls.end(), 0);
            auto mark = [&](int x, int y) -> bool {
                auto& fw = cls[static_cast<std::size_t>(x) * n + y];
                auto& bw = cls[static_cast<std::size_t>(y) * n + x];
                if (fw == 1) return true;   // already in class
                if (bw == 1) return false;  // both directions forced
                fw = 1;
                queue.emplace_back(x, y);
                return true;
            };

            queue.clear();
            if (!mark(a, b)) return std::nullopt;
            bool ok = true;
            for (std::size_t qi = 0; ok && qi < queue.size(); ++qi) {
                const auto [x, y] = queue[qi];
                // x->y forces x->z for z adjacent to x but not to y, and
                // z->y for z adjacent to y but not to x (within rem).
                std::uint64_t fz = rem.neighbors(x) & ~rem.neighbors(y) & ~(std::uint64_t{1} << y);
                while (fz) {
                    const int z = std::countr_zero(fz);
                    fz &= fz - 1;
                    if (!mark(x, z)) { ok = false; break; }
                }
                if (!ok) break;
                std::uint64_t bz = rem.neighbors(y) & ~rem.neighbors(x) & ~(std::uint64_t{1} << x);
                while (bz) {
                    const int z = std::countr_zero(bz);
                    bz &= bz - 1;
                    if (!mark(z, y)) { ok = false; break; }
                }
            }
            if (!ok) return std::nullopt;

            for (const auto& [x, y] : queue) {
                out.orient(x, y);
                rem.remove_edge(x, y);
            }
        }
    }

    if (!orientation_is_transitive(g, out)) return std::nullopt;
    return out;
}

namespace detail {

// Bron-Kerbosch with pivoting; cliques come out in a deterministic order.
inline void maximal_cliques_rec(const SimpleGraph& g, std::uint64_t r, std::uint64_t p,
                                std::uint64_t x, std::vector<std::uint64_t>& out) {
    if (!p && !x) {
        out.push_back(r);
        return;
    }
    const std::uint64_t px = p | x;
    int pivot = std::countr_zero(px);
    int best = -1;
    for (std::uint64_t m = px; m;) {
        const int v = std::countr_zero(m);
        m &= m - 1;
        const int deg = std::popcount(p & g.neighbors(v));
        if (deg > best) { best = deg; pivot = v; }
    }
    std::uint64_t cand = p & ~g.neighbors(pivot);
    while (cand) {
        const int v = std::countr_zero(cand);
        cand &= cand - 1;
        const std::uint64_t bit = std::uint64_t{1} << v;
        maximal_cliques_rec(g, r | bit, p & g.neighbors(v), x & g.neighbors(v), out);
        p &= ~bit;
        x |= bit;
    }
}

inline std::vector<std::uint64_t> maximal_cliques(const SimpleGraph& g) {
    std::vector<std::uint64_t> out;
    if (g.vertex_count() == 0) return out;
    maximal_cliques_rec(g, 0, g.all_vertices(), 0, out);
    return out;
}

}  // namespace detail

inline bool is_interval_graph(const SimpleGraph& g) {
    if (find_induced_c4(g)) return false;
    return find_transitive_orientation(g.complement()).has_value();
}

struct Interval {
    int lo = 0;
    int hi = 0;  // half-open [lo, hi)

    bool intersects(const Interval& o) const { return lo < o.hi && o.lo < hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

// When g is an interval graph, produces intervals whose intersection graph
// equals g: maximal cliques are linearly ordered by a transitive orientation
// of the complement, and each vertex spans the cliques containing it.
inline std::optional<std::vector<Interval>> interval_realization(const SimpleGraph& g) {
    if (find_induced_c4(g)) return std::nullopt;
    const auto orient = find_transitive_orientation(g.complement());
    if (!orient) return std::nullopt;

    auto cliques = detail::maximal_cliques(g);
    const int n = g.vertex_count();
    if (n == 0) return std::vector<Interval>{};

    // Distinct maximal cliques always expose a non-adjacent cross pair; its
    // direction in the complement orientation orders the cliques.
    auto before = [&](std::uint64_t A, std::uint64_t B) {
        std::uint64_t onlyA = A & ~B;
        while (onlyA) {
            const int u = std::countr_zero(onlyA);
            onlyA &= onlyA - 1;
            std::uint64_t onlyB = B & ~A & ~g.neighbors(u);
            if (onlyB) return orient->oriented(u, std::countr_zero(onlyB));
        }
        return false;
    };
    std::sort(cliques.begin(), cliques.end(), before);

    std::vector<Interval> iv(static_cast<std::size_t>(n), Interval{-1, -1});
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
        std::uint64_t members = cliques[k];
        while (members) {
            const int v = std::countr_zero(members);
            members &= members - 1;
            if (iv[v].lo < 0) iv[v].lo = k;
            iv[v].hi = k + 1;
        }
    }
    return iv;
}

struct StableSet {
    long long weight = 0;
    std::vector<int> members;  // ascending
};

namespace detail {

struct MwisContext {
    const SimpleGraph* g;
    const std::vector<long long>* w;
    std::vector<int> order;  // candidates by weight descending
    long long best_weight = 0;
    std::uint64_t best_set = 0;
};

inline void mwis_rec(MwisContext& ctx, std::uint64_t cand, long long cur, std::uint64_t cur_set,
                     long long remaining) {
    if (cur > ctx.best_weight) {
        ctx.best_weight = cur;
        ctx.best_set = cur_set;
    }
    if (!cand || cur + remaining <= ctx.best_weight) return;
    for (const int v : ctx.order) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (!(cand & bit)) continue;
        const long long wv = (*ctx.w)[v];
        mwis_rec(ctx, cand & ~bit & ~ctx.g->neighbors(v), cur + wv, cur_set | bit,
                 remaining - wv);
        cand &= ~bit;
        remaining -= wv;
        if (cur + remaining <= ctx.best_weight) return;
    }
}

}  // namespace detail

// Exact maximum-weight independent set by branch and bound over a fixed
// vertex order (weight descending, index ascending); deterministic.
inline StableSet max_weight_stable_set(const SimpleGraph& g, const std::vector<long long>& weights) {
    const int n = g.vertex_count();
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("max_weight_stable_set: weight count mismatch");
    for (const long long w : weights)
        if (w < 0) throw std::invalid_argument("max_weight_stable_set: negative weight");

    detail::MwisContext ctx;
    ctx.g = &g;
    ctx.w = &weights;
    ctx.order.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) ctx.order[v] = v;
    std::stable_sort(ctx.order.begin(), ctx.order.end(),
                     [&](int a, int b) { return weights[a] > weights[b]; });

    long long total = 0;
    for (const long long w : weights) total += w;
    detail::mwis_rec(ctx, g.all_vertices(), 0, 0, total);

    StableSet out;
    out.weight = ctx.best_weight;
    for (int v = 0; v < n; ++v)
        if ((ctx.best_set >> v) & 1u) out.members.push_back(v);
    return out;
}

}  // namespace packclass

#endif  // PACKCLASS_GRAPHS_HPP
