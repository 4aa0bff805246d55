#ifndef MODCELL_FAT_GRAPH_HPP
#define MODCELL_FAT_GRAPH_HPP

// Fat (ribbon) graphs in half-edge form.
//
// A fat graph is stored as two permutations of the half-edge set
// {0, ..., H-1}: `sigma`, whose cycles are the cyclic orderings at the
// vertices, and `pairing`, the fixed-point-free involution gluing half-edges
// into edges. Vertices are the cycles of sigma, numbered by their smallest
// half-edge. Leaves are univalent vertices carrying an (index, direction)
// label.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "modcell/error.hpp"

namespace modcell {

enum class LeafDirection : int { incoming = 0, outgoing = 1 };

inline const char* to_string(LeafDirection d) {
    return d == LeafDirection::incoming ? "in" : "out";
}

struct LeafLabel {
    int index = 0;
    LeafDirection direction = LeafDirection::incoming;

    auto operator<=>(const LeafLabel&) const = default;
};

struct Leaf {
    int vertex = 0;
    int index = 0;
    LeafDirection direction = LeafDirection::incoming;

    bool operator==(const Leaf&) const = default;
};

/// Leaf given by the half-edge sitting at the univalent vertex.
struct LeafSpec {
    int half_edge = 0;
    int index = 0;
    LeafDirection direction = LeafDirection::incoming;
};

struct SurfaceType {
    int genus = 0;
    int boundary_count = 0;

    bool operator==(const SurfaceType&) const = default;
};

class FatGraph {
public:
    FatGraph() = default;

    /// Builds a graph from the rotation permutation and the edge pairing.
    /// Throws Error on malformed input.
    static FatGraph from_rotation(std::vector<int> sigma, std::vector<int> pairing,
                                  const std::vector<LeafSpec>& leaves) {
        FatGraph g;
        const int n = static_cast<int>(sigma.size());
        if (static_cast<int>(pairing.size()) != n)
            throw Error("sigma and pairing have different sizes");
        check_permutation(sigma, "sigma");
        check_permutation(pairing, "pairing");
        for (int h = 0; h < n; ++h) {
            if (pairing[h] == h) throw Error("pairing has a fixed point at half-edge " + std::to_string(h));
            if (pairing[pairing[h]] != h) throw Error("pairing is not an involution");
        }
        g.sigma_ = std::move(sigma);
        g.pairing_ = std::move(pairing);
        g.source_.assign(n, -1);
        int v = 0;
        for (int h = 0; h < n; ++h) {
            if (g.source_[h] != -1) continue;
            int x = h;
            do {
                g.source_[x] = v;
                x = g.sigma_[x];
            } while (x != h);
            ++v;
        }
        g.vertex_count_ = v;
        std::set<int> used_vertices;
        std::set<LeafLabel> used_labels;
        for (const auto& spec : leaves) {
            if (spec.half_edge < 0 || spec.half_edge >= n) throw Error("leaf half-edge out of range");
            if (g.sigma_[spec.half_edge] != spec.half_edge)
                throw Error("leaf at half-edge " + std::to_string(spec.half_edge) + " is not univalent");
            const int lv = g.source_[spec.half_edge];
            if (!used_vertices.insert(lv).second) throw Error("two leaf labels on one vertex");
            if (!used_labels.insert({spec.index, spec.direction}).second) throw Error("duplicate leaf label");
            g.leaves_.push_back({lv, spec.index, spec.direction});
        }
        std::sort(g.leaves_.begin(), g.leaves_.end(), [](const Leaf& a, const Leaf& b) {
            return std::pair(a.direction, a.index) < std::pair(b.direction, b.index);
        });
        return g;
    }

    int half_edge_count() const { return static_cast<int>(sigma_.size()); }
    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return half_edge_count() / 2; }

    const std::vector<int>& sigma() const { return sigma_; }
    const std::vector<int>& pairing() const { return pairing_; }
    const std::vector<int>& source() const { return source_; }
    const std::vector<Leaf>& leaves() const { return leaves_; }

    int sigma(int h) const { return sigma_[h]; }
    int pair(int h) const { return pairing_[h]; }
    int source(int h) const { return source_[h]; }
    int omega(int h) const { return sigma_[pairing_[h]]; }

    /// Edges as (h, pairing(h)) with h the smaller half-edge, ordered by h.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int h = 0; h < half_edge_count(); ++h)
            if (h < pairing_[h]) out.emplace_back(h, pairing_[h]);
        return out;
    }

    /// Edge index of half-edge h, consistent with edges().
    int edge_of(int h) const {
        const int lo = std::min(h, pairing_[h]);
        int idx = 0;
        for (int x = 0; x < lo; ++x)
            if (x < pairing_[x]) ++idx;
        return idx;
    }

    std::vector<int> edge_index_map() const {
        std::vector<int> out(half_edge_count());
        int idx = 0;
        for (int h = 0; h < half_edge_count(); ++h)
            if (h < pairing_[h]) {
                out[h] = out[pairing_[h]] = idx++;
            }
        return out;
    }

    /// Half-edges at v in cyclic order, starting from the smallest.
    std::vector<int> rotation(int v) const {
        int start = -1;
        for (int h = 0; h < half_edge_count(); ++h)
            if (source_[h] == v) {
                start = h;
                break;
            }
        std::vector<int> out;
        if (start < 0) return out;
        int x = start;
        do {
            out.push_back(x);
            x = sigma_[x];
        } while (x != start);
        return out;
    }

    int valence(int v) const {
        return static_cast<int>(std::count(source_.begin(), source_.end(), v));
    }

    std::optional<Leaf> leaf_at(int v) const {
        for (const auto& l : leaves_)
            if (l.vertex == v) return l;
        return std::nullopt;
    }

    bool is_leaf_edge(int h) const {
        return leaf_at(source_[h]).has_value() || leaf_at(source_[pairing_[h]]).has_value();
    }

    std::optional<Leaf> find_leaf(int index, LeafDirection dir) const {
        for (const auto& l : leaves_)
            if (l.index == index && l.direction == dir) return l;
        return std::nullopt;
    }

    /// The half-edge at a univalent vertex.
    int leaf_half_edge(const Leaf& l) const {
        for (int h = 0; h < half_edge_count(); ++h)
            if (source_[h] == l.vertex) return h;
        throw Error("leaf vertex has no half-edge");
    }

    bool operator==(const FatGraph&) const = default;

private:
    static void check_permutation(const std::vector<int>& p, const char* what) {
        std::vector<char> seen(p.size(), 0);
        for (int x : p) {
            if (x < 0 || x >= static_cast<int>(p.size()) || seen[x])
                throw Error(std::string(what) + " is not a permutation");
            seen[x] = 1;
        }
    }

    std::vector<int> sigma_;
    std::vector<int> pairing_;
    std::vector<int> source_;
    int vertex_count_ = 0;
    std::vector<Leaf> leaves_;
};

// ---------------------------------------------------------------------------
// Mutable construction

/// Scratch representation used while building or rewriting fat graphs.
/// Vertices hold explicit rotations; removed vertices have empty rotations.
/// Every edge carries a list of integer tags that are concatenated when
/// bivalent vertices are smoothed, so callers can trace where an edge of the
/// final graph came from.
class RibbonBuilder {
public:
    RibbonBuilder() = default;

    explicit RibbonBuilder(const FatGraph& g) {
        const int n = g.half_edge_count();
        pair_ = g.pairing();
        alive_.assign(n, 1);
        flat_.assign(n, 0);
        tags_.assign(n, {});
        vertex_of_.assign(n, -1);
        rotation_.resize(g.vertex_count());
        leaf_.resize(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) {
            rotation_[v] = g.rotation(v);
            for (int h : rotation_[v]) vertex_of_[h] = v;
        }
        for (const auto& l : g.leaves()) leaf_[l.vertex] = LeafLabel{l.index, l.direction};
        const auto em = g.edge_index_map();
        for (int h = 0; h < n; ++h) tags_[h] = {em[h]};
    }

    int new_vertex() {
        rotation_.emplace_back();
        leaf_.emplace_back();
        return static_cast<int>(rotation_.size()) - 1;
    }

    int new_leaf(LeafLabel label) {
        const int v = new_vertex();
        leaf_[v] = label;
        return v;
    }

    /// Creates an edge; returns h, its partner is h + 1. Neither half is
    /// placed at a vertex until set_rotation is called.
    int new_edge(std::vector<int> tags = {}) {
        const int h = static_cast<int>(pair_.size());
        pair_.push_back(h + 1);
        pair_.push_back(h);
        alive_.push_back(1);
        alive_.push_back(1);
        flat_.push_back(0);
        flat_.push_back(0);
        tags_.push_back(tags);
        tags_.push_back(std::move(tags));
        vertex_of_.push_back(-1);
        vertex_of_.push_back(-1);
        return h;
    }

    void set_rotation(int v, std::vector<int> hs) {
        for (int h : hs) vertex_of_[h] = v;
        rotation_[v] = std::move(hs);
    }

    int vertex_of(int h) const { return vertex_of_[h]; }
    int pair(int h) const { return pair_[h]; }
    const std::vector<int>& rotation(int v) const { return rotation_[v]; }
    int vertex_slots() const { return static_cast<int>(rotation_.size()); }
    bool alive(int h) const { return alive_[h] != 0; }
    const std::vector<int>& tags(int h) const { return tags_[h]; }
    const std::optional<LeafLabel>& leaf(int v) const { return leaf_[v]; }

    bool is_loop(int h) const { return vertex_of_[h] == vertex_of_[pair_[h]]; }

    /// Marks the corner between h and its rotation successor as having zero
    /// width, i.e. the two half-edges leave the vertex in the same direction.
    void set_flat(int h, bool flat) { flat_[h] = flat ? 1 : 0; }
    bool flat(int h) const { return flat_[h] != 0; }

    /// Rotation successor of h.
    int next(int h) const {
        const auto& r = rotation_[vertex_of_[h]];
        auto it = std::find(r.begin(), r.end(), h);
        ++it;
        return it == r.end() ? r.front() : *it;
    }

    int previous(int h) const {
        const auto& r = rotation_[vertex_of_[h]];
        auto it = std::find(r.begin(), r.end(), h);
        return it == r.begin() ? r.back() : *(it - 1);
    }

    /// Contracts the edge through h, splicing the rotation of the far vertex
    /// into the slot of h. The edge must not be a loop.
    void contract(int h) {
        const int hp = pair_[h];
        const int v = vertex_of_[h];
        const int w = vertex_of_[hp];
        if (v == w) throw Error("cannot contract a loop");
        if (leaf_[v] || leaf_[w]) throw Error("leaf collapse forbidden");
        auto a = rotated_after(rotation_[v], h);
        auto b = rotated_after(rotation_[w], hp);
        if (!a.empty() && !b.empty()) {
            const bool into_a = flat_[b.back()] && flat_[h];
            const bool into_b = flat_[a.back()] && flat_[hp];
            flat_[b.back()] = into_a;
            flat_[a.back()] = into_b;
        } else if (!a.empty()) {
            flat_[a.back()] = 0;
        } else if (!b.empty()) {
            flat_[b.back()] = 0;
        }
        std::vector<int> merged = b;
        merged.insert(merged.end(), a.begin(), a.end());
        rotation_[w].clear();
        set_rotation(v, std::move(merged));
        alive_[h] = alive_[hp] = 0;
        vertex_of_[h] = vertex_of_[hp] = -1;
    }

    /// Removes a bivalent non-leaf vertex, joining its two edges.
    /// Returns false when the vertex is not smoothable.
    bool smooth(int v) {
        if (leaf_[v] || rotation_[v].size() != 2) return false;
        const int x = rotation_[v][0];
        const int y = rotation_[v][1];
        if (pair_[x] == y) return false;
        const int a = pair_[x];
        const int b = pair_[y];
        std::vector<int> merged = tags_[x];
        merged.insert(merged.end(), tags_[y].begin(), tags_[y].end());
        pair_[a] = b;
        pair_[b] = a;
        tags_[a] = merged;
        tags_[b] = std::move(merged);
        alive_[x] = alive_[y] = 0;
        vertex_of_[x] = vertex_of_[y] = -1;
        rotation_[v].clear();
        return true;
    }

    void smooth_all() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < vertex_slots(); ++v)
                if (smooth(v)) changed = true;
        }
    }

    /// Identifies the edges of e1 and e2, where e2 follows e1 at their common
    /// vertex. The far endpoints merge, with the fan of e1's far end before
    /// that of e2's. Returns false when the far endpoints already coincide.
    bool fold(int e1, int e2) {
        const int f1 = pair_[e1];
        const int f2 = pair_[e2];
        const int w1 = vertex_of_[f1];
        const int w2 = vertex_of_[f2];
        if (w1 == w2) return false;
        if (leaf_[w1] || leaf_[w2]) throw Error("cannot fold onto a leaf");
        const int v = vertex_of_[e1];
        flat_[e1] = flat_[e2];
        auto& rv = rotation_[v];
        rv.erase(std::find(rv.begin(), rv.end(), e2));
        auto a = rotated_after(rotation_[w1], f1);
        auto b = rotated_after(rotation_[w2], f2);
        const bool a_to_b = (a.empty() ? flat_[f1] : flat_[a.back()]) && flat_[f2];
        const bool b_to_f = b.empty() ? flat_[f2] : flat_[b.back()];
        std::vector<int> merged{f1};
        merged.insert(merged.end(), a.begin(), a.end());
        merged.insert(merged.end(), b.begin(), b.end());
        if (!a.empty()) flat_[a.back()] = a_to_b;
        else flat_[f1] = a_to_b;
        if (!b.empty()) flat_[b.back()] = b_to_f;
        rotation_[w2].clear();
        set_rotation(w1, std::move(merged));
        tags_[e1].insert(tags_[e1].end(), tags_[e2].begin(), tags_[e2].end());
        tags_[f1] = tags_[e1];
        alive_[e2] = alive_[f2] = 0;
        vertex_of_[e2] = vertex_of_[f2] = -1;
        return true;
    }

    struct Result {
        FatGraph graph;
        std::vector<std::vector<int>> edge_tags;  // indexed by edge id of graph
        std::vector<int> half_edge_map;           // builder half-edge -> graph half-edge (-1 if gone)
    };

    Result build() const {
        // Vertices are renumbered by FatGraph from sigma cycles; half-edges
        // are numbered vertex by vertex in builder order so the numbering is
        // stable under identical construction sequences.
        std::vector<int> map(pair_.size(), -1);
        int next = 0;
        for (int v = 0; v < vertex_slots(); ++v)
            for (int h : rotation_[v]) map[h] = next++;
        for (std::size_t h = 0; h < pair_.size(); ++h)
            if (alive_[h] && map[h] < 0) throw Error("half-edge not placed at any vertex");
        std::vector<int> sigma(next), pairing(next);
        std::vector<LeafSpec> leaves;
        for (int v = 0; v < vertex_slots(); ++v) {
            const auto& r = rotation_[v];
            for (std::size_t k = 0; k < r.size(); ++k) {
                sigma[map[r[k]]] = map[r[(k + 1) % r.size()]];
                pairing[map[r[k]]] = map[pair_[r[k]]];
            }
            if (leaf_[v] && !r.empty()) leaves.push_back({map[r[0]], leaf_[v]->index, leaf_[v]->direction});
        }
        Result res;
        res.graph = FatGraph::from_rotation(std::move(sigma), std::move(pairing), leaves);
        res.half_edge_map = map;
        res.edge_tags.resize(res.graph.edge_count());
        const auto em = res.graph.edge_index_map();
        for (std::size_t h = 0; h < pair_.size(); ++h)
            if (map[h] >= 0) res.edge_tags[em[map[h]]] = tags_[h];
        return res;
    }

private:
    static std::vector<int> rotated_after(const std::vector<int>& r, int h) {
        auto it = std::find(r.begin(), r.end(), h);
        std::vector<int> out(it + 1, r.end());
        out.insert(out.end(), r.begin(), it);
        return out;
    }

    std::vector<std::vector<int>> rotation_;
    std::vector<int> pair_;
    std::vector<int> vertex_of_;
    std::vector<char> alive_;
    std::vector<char> flat_;
    std::vector<std::vector<int>> tags_;
    std::vector<std::optional<LeafLabel>> leaf_;
};

// ---------------------------------------------------------------------------
// Boundary cycles and surface type

/// Cycles of omega = sigma o pairing, each starting at its smallest half-edge.
inline std::vector<std::vector<int>> boundary_cycles(const FatGraph& g) {
    const int n = g.half_edge_count();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> out;
    for (int h = 0; h < n; ++h) {
        if (seen[h]) continue;
        std::vector<int> cyc;
        int x = h;
        do {
            seen[x] = 1;
            cyc.push_back(x);
            x = g.omega(x);
        } while (x != h);
        out.push_back(std::move(cyc));
    }
    return out;
}

/// Connected components as lists of vertices.
/// Boundary cycles as the cycle decomposition of omega.
inline std::vector<std::vector<int>> boundary_permutation(const FatGraph& g) { return boundary_cycles(g); }

inline std::vector<std::vector<int>> connected_components(const FatGraph& g) {
    std::vector<int> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int h = 0; h < g.half_edge_count(); ++h) parent[find(g.source(h))] = find(g.source(g.pair(h)));
    std::map<int, std::vector<int>> comps;
    for (int v = 0; v < g.vertex_count(); ++v) comps[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [root, vs] : comps) out.push_back(std::move(vs));
    return out;
}

inline SurfaceType surface_type(const FatGraph& g) {
    const auto comps = connected_components(g);
    if (comps.size() != 1) {
        std::ostringstream os;
        os << "graph is disconnected (" << comps.size() << " components:";
        for (const auto& c : comps) {
            os << " {";
            for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
            os << "}";
        }
        os << ")";
        throw Error(os.str());
    }
    const int chi = g.vertex_count() - g.edge_count();
    const int b = static_cast<int>(boundary_cycles(g).size());
    const int twice_genus = 2 - chi - b;
    if (twice_genus < 0 || twice_genus % 2 != 0)
        throw Error("internal inconsistency: non-integral genus (chi=" + std::to_string(chi) +
                    ", boundaries=" + std::to_string(b) + ")");
    return {twice_genus / 2, b};
}

// ---------------------------------------------------------------------------
// Closed and admissible graphs

/// Checks the closed fat graph conditions: inner vertices at least trivalent
/// and exactly one leaf on each boundary cycle.
inline Violations validate_closed(const FatGraph& g) {
    Violations out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const int val = g.valence(v);
        if (g.leaf_at(v)) continue;
        if (val < 3)
            out.push_back({"valence", "inner vertex " + std::to_string(v) + " has valence " + std::to_string(val)});
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.valence(v) == 1 && !g.leaf_at(v))
            out.push_back({"leaf-label", "univalent vertex " + std::to_string(v) + " is not a labeled leaf"});
    const auto cycles = boundary_cycles(g);
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        int count = 0;
        for (int h : cycles[c])
            if (g.leaf_at(g.source(h))) ++count;
        if (count != 1)
            out.push_back({"leaf-per-boundary", "boundary cycle " + std::to_string(c) + " carries " +
                                                    std::to_string(count) + " leaves"});
    }
    return out;
}

struct AdmissibleCycle {
    int leaf_index = 0;              // index of the incoming leaf
    std::vector<int> half_edges;     // circle half-edges in omega order
    std::vector<int> vertices;       // circle vertices in omega order
};

namespace detail {

/// Circle carried by the boundary cycle of an incoming leaf, or nullopt when
/// that cycle minus the leaf is not an embedded circle.
inline std::optional<AdmissibleCycle> incoming_circle(const FatGraph& g, const Leaf& leaf) {
    const int hl = g.leaf_half_edge(leaf);
    const int hb = g.pair(hl);
    std::vector<int> cyc;
    int x = hl;
    do {
        cyc.push_back(x);
        x = g.omega(x);
    } while (x != hl);
    AdmissibleCycle ac;
    ac.leaf_index = leaf.index;
    std::set<int> edge_ids, verts;
    const auto em = g.edge_index_map();
    for (int h : cyc) {
        if (h == hl || h == hb) continue;
        if (g.leaf_at(g.source(h)) || g.leaf_at(g.source(g.pair(h)))) return std::nullopt;
        if (!edge_ids.insert(em[h]).second) return std::nullopt;
        if (!verts.insert(g.source(h)).second) return std::nullopt;
        ac.half_edges.push_back(h);
        ac.vertices.push_back(g.source(h));
    }
    if (ac.half_edges.empty()) return std::nullopt;
    if (!verts.count(g.source(hb))) return std::nullopt;
    return ac;
}

}  // namespace detail

/// Admissible cycles ordered by incoming leaf index. Throws when g is not a
/// closed fat graph or not admissible.
inline std::vector<AdmissibleCycle> admissible_cycles(const FatGraph& g) {
    const auto vs = validate_closed(g);
    if (!vs.empty()) throw Error("not a closed fat graph: " + describe(vs));
    std::vector<AdmissibleCycle> out;
    std::set<int> used;
    for (const auto& l : g.leaves()) {
        if (l.direction != LeafDirection::incoming) continue;
        auto c = detail::incoming_circle(g, l);
        if (!c) throw Error("incoming leaf " + std::to_string(l.index) + " does not bound an embedded circle");
        for (int v : c->vertices)
            if (!used.insert(v).second) throw Error("admissible circles are not disjoint");
        out.push_back(std::move(*c));
    }
    return out;
}

/// True iff every incoming boundary cycle minus its leaf is an embedded
/// circle and these circles are pairwise disjoint. Throws Error when g is not
/// a closed fat graph.
inline bool is_admissible(const FatGraph& g) {
    const auto vs = validate_closed(g);
    if (!vs.empty()) throw Error("not a closed fat graph: " + describe(vs));
    std::set<int> used;
    for (const auto& l : g.leaves()) {
        if (l.direction != LeafDirection::incoming) continue;
        auto c = detail::incoming_circle(g, l);
        if (!c) return false;
        for (int v : c->vertices)
            if (!used.insert(v).second) return false;
    }
    return true;
}

/// Edge ids lying on admissible cycles.
inline std::set<int> admissible_edges(const FatGraph& g) {
    std::set<int> out;
    const auto em = g.edge_index_map();
    for (const auto& c : admissible_cycles(g))
        for (int h : c.half_edges) out.insert(em[h]);
    return out;
}

// ---------------------------------------------------------------------------
// Forest collapse

/// Collapses the given edges (by edge id). The edges must form a forest and
/// contain no leaf edge.
inline FatGraph collapse_forest(const FatGraph& g, const std::vector<int>& forest) {
    const auto edges = g.edges();
    std::set<int> unique(forest.begin(), forest.end());
    std::vector<int> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int e : unique) {
        if (e < 0 || e >= static_cast<int>(edges.size())) throw Error("edge id out of range");
        if (g.is_leaf_edge(edges[e].first)) throw Error("leaf collapse forbidden (edge " + std::to_string(e) + ")");
    }
    for (int e : unique) {
        const int a = find(g.source(edges[e].first));
        const int b = find(g.source(edges[e].second));
        if (a == b) throw Error("not a forest (edge " + std::to_string(e) + " closes a cycle)");
        parent[a] = b;
    }
    RibbonBuilder rb(g);
    for (int e : unique) rb.contract(edges[e].first);
    return rb.build().graph;
}

// ---------------------------------------------------------------------------
// Canonical labeling

namespace detail {

inline std::vector<int> rooted_encoding(const FatGraph& g, int root) {
    std::vector<int> num(g.half_edge_count(), -1);
    std::vector<int> order;
    num[root] = 0;
    order.push_back(root);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int h = order[k];
        for (int nb : {g.sigma(h), g.pair(h)}) {
            if (num[nb] < 0) {
                num[nb] = static_cast<int>(order.size());
                order.push_back(nb);
            }
        }
    }
    std::vector<int> enc;
    enc.reserve(order.size() * 3 + 1);
    enc.push_back(static_cast<int>(order.size()));
    for (int h : order) {
        enc.push_back(num[g.sigma(h)]);
        enc.push_back(num[g.pair(h)]);
        const auto l = g.leaf_at(g.source(h));
        enc.push_back(l ? 2 * l->index + static_cast<int>(l->direction) : -1);
    }
    return enc;
}

}  // namespace detail

/// Byte string that is equal for two graphs iff they are isomorphic as fat
/// graphs with labeled leaves.
inline std::string canonical_label(const FatGraph& g) {
    const auto comps = connected_components(g);
    std::vector<std::vector<int>> per_comp;
    for (const auto& comp : comps) {
        std::set<int> cv(comp.begin(), comp.end());
        std::vector<int> seeds;
        for (int h = 0; h < g.half_edge_count(); ++h) {
            if (!cv.count(g.source(h))) continue;
            if (g.leaf_at(g.source(h))) seeds.push_back(h);
        }
        if (seeds.empty())
            for (int h = 0; h < g.half_edge_count(); ++h)
                if (cv.count(g.source(h))) seeds.push_back(h);
        std::vector<int> best;
        for (int s : seeds) {
            auto enc = detail::rooted_encoding(g, s);
            if (best.empty() || enc < best) best = std::move(enc);
        }
        per_comp.push_back(std::move(best));
    }
    std::sort(per_comp.begin(), per_comp.end());
    std::string out;
    for (const auto& enc : per_comp) {
        out.push_back('|');
        for (int x : enc) {
            const auto u = static_cast<std::uint32_t>(x);
            for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics

using Rational = boost::rational<std::int64_t>;

struct MetricAssignment {
    std::vector<Rational> lengths;  // indexed by edge id
};

/// Checks the length-function conditions; each violated condition is
/// reported separately.
inline Violations validate_metric(const FatGraph& g, const MetricAssignment& m) {
    Violations out;
    const auto edges = g.edges();
    if (m.lengths.size() != edges.size()) {
        out.push_back({"shape", "expected " + std::to_string(edges.size()) + " lengths"});
        return out;
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& len = m.lengths[e];
        if (len < Rational(0) || len > Rational(1))
            out.push_back({"range", "edge " + std::to_string(e) + " has length outside [0,1]"});
        if (g.is_leaf_edge(edges[e].first) && len != Rational(1))
            out.push_back({"leaf-length", "leaf edge " + std::to_string(e) + " does not have length 1"});
    }
    std::vector<int> zero;
    bool zero_has_leaf = false;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (m.lengths[e] == Rational(0)) {
            zero.push_back(static_cast<int>(e));
            if (g.is_leaf_edge(edges[e].first)) zero_has_leaf = true;
        }
    if (!zero_has_leaf) {
        try {
            const auto q = collapse_forest(g, zero);
            if (!validate_closed(q).empty() || !is_admissible(q))
                out.push_back({"zero-set", "collapsing the zero set breaks admissibility"});
        } catch (const Error& err) {
            out.push_back({"zero-set", std::string("zero set is not a forest: ") + err.what()});
        }
    } else {
        out.push_back({"zero-set", "zero set contains a leaf edge"});
    }
    const auto em = g.edge_index_map();
    for (const auto& c : admissible_cycles(g)) {
        Rational sum(0);
        for (int h : c.half_edges) sum += m.lengths[em[h]];
        if (sum != Rational(1))
            out.push_back({"cycle-sum", "admissible cycle of leaf " + std::to_string(c.leaf_index) +
                                            " has total length " + std::to_string(sum.numerator()) + "/" +
                                            std::to_string(sum.denominator())});
    }
    return out;
}

/// Uniform metric: admissible edges 1/(cycle size), leaves 1, remaining
/// edges 1/(their count).
inline MetricAssignment uniform_metric(const FatGraph& g) {
    MetricAssignment m;
    const auto edges = g.edges();
    m.lengths.assign(edges.size(), Rational(0));
    const auto em = g.edge_index_map();
    std::set<int> on_cycles;
    for (const auto& c : admissible_cycles(g)) {
        const auto k = static_cast<std::int64_t>(c.half_edges.size());
        for (int h : c.half_edges) {
            m.lengths[em[h]] = Rational(1, k);
            on_cycles.insert(em[h]);
        }
    }
    std::vector<int> rest;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (on_cycles.count(static_cast<int>(e))) continue;
        if (g.is_leaf_edge(edges[e].first))
            m.lengths[e] = Rational(1);
        else
            rest.push_back(static_cast<int>(e));
    }
    for (int e : rest) m.lengths[e] = Rational(1, static_cast<std::int64_t>(rest.size()));
    return m;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const FatGraph& g) {
    nlohmann::json leaves = nlohmann::json::array();
    for (const auto& l : g.leaves())
        leaves.push_back({{"vertex", l.vertex}, {"index", l.index}, {"direction", to_string(l.direction)}});
    return {{"half_edges", g.half_edge_count()},
            {"source", g.source()},
            {"pairing", g.pairing()},
            {"sigma", g.sigma()},
            {"leaves", leaves}};
}

inline FatGraph fat_graph_from_json(const nlohmann::json& j) {
    auto sigma = j.at("sigma").get<std::vector<int>>();
    auto pairing = j.at("pairing").get<std::vector<int>>();
    const auto source = j.at("source").get<std::vector<int>>();
    if (j.contains("half_edges") && j.at("half_edges").get<int>() != static_cast<int>(sigma.size()))
        throw Error("half_edges does not match sigma length");
    std::vector<LeafSpec> specs;
    for (const auto& l : j.at("leaves")) {
        const int v = l.at("vertex").get<int>();
        const auto dir = l.at("direction").get<std::string>() == "in" ? LeafDirection::incoming
                                                                      : LeafDirection::outgoing;
        int he = -1;
        for (std::size_t h = 0; h < source.size(); ++h)
            if (source[h] == v) he = static_cast<int>(h);
        if (he < 0) throw Error("leaf vertex without half-edge");
        specs.push_back({he, l.at("index").get<int>(), dir});
    }
    auto g = FatGraph::from_rotation(std::move(sigma), std::move(pairing), specs);
    if (g.source() != source) throw Error("source map is inconsistent with sigma cycles");
    return g;
}

/// Graphviz rendering; admissible cycle edges are drawn bold when the graph
/// is admissible.
inline std::string to_dot(const FatGraph& g, const std::string& name = "fatgraph") {
    std::set<int> bold;
    try {
        if (validate_closed(g).empty() && is_admissible(g)) bold = admissible_edges(g);
    } catch (const Error&) {
    }
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
        os << "  v" << v;
        if (auto l = g.leaf_at(v))
            os << " [shape=plaintext, label=\"" << to_string(l->direction) << l->index << "\"]";
        else
            os << " [shape=point]";
        os << ";\n";
    }
    const auto edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        os << "  v" << g.source(edges[e].first) << " -- v" << g.source(edges[e].second);
        if (bold.count(static_cast<int>(e))) os << " [penwidth=3]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace modcell

#endif  // MODCELL_FAT_GRAPH_HPP
