#ifndef MODCELL_CRITICAL_HPP
#define MODCELL_CRITICAL_HPP

// Critical graphs of radial combinatorial types and their unfoldings.
//
// Each annulus contributes its inner circle, subdivided at the feet of the
// radial dividers, with the incoming leaf hanging inside at angle 0. The
// indices stacked on a divider run radially outward from its foot; pieces
// between consecutive radius ranks are shared by neighbours in the stack as
// long as the fold between them reaches that rank. Slit tips are glued to
// the tips of their partners, parametrization points end in outgoing leaves.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "modcell/fat_graph.hpp"
#include "modcell/radial.hpp"

namespace modcell {

enum class PieceKind { arc, stem, terminal, incoming_leaf, outgoing_leaf, tip };

struct Piece {
    PieceKind kind = PieceKind::arc;
    int annulus = 0;
    int divider = 0;  // divider of a stem/terminal piece, chamber of an arc
    int band = -1;    // annular chamber of a radial piece
    int element = -1; // index whose segment carries a radial piece
    int multiplicity = 1;  // number of segments folded onto this piece
};

/// Fat graph together with the pieces each of its edges is made of.
struct TracedGraph {
    FatGraph graph;
    std::vector<std::vector<int>> edge_pieces;  // per edge id: indices into pieces
    std::vector<Piece> pieces;
};

/// Fold bits per stacked pair, ordered by annulus, position, then pair.
using UnfoldingVector = std::vector<bool>;

inline int unfolding_length(const CombinatorialType& t) {
    int d = 0;
    for (const auto& a : t.annuli)
        for (const auto& s : a.positions) d += static_cast<int>(s.size()) - 1;
    return d;
}

inline UnfoldingVector all_fold(const CombinatorialType& t) { return UnfoldingVector(unfolding_length(t), true); }
inline UnfoldingVector all_unfold(const CombinatorialType& t) { return UnfoldingVector(unfolding_length(t), false); }

namespace detail {

class CriticalBuilder {
public:
    CriticalBuilder(const CombinatorialType& t, const UnfoldingVector& u) : t_(t), u_(u) {}

    TracedGraph run() {
        if (static_cast<int>(u_.size()) != unfolding_length(t_))
            throw Error("unfolding vector has length " + std::to_string(u_.size()) + ", expected " +
                        std::to_string(unfolding_length(t_)));
        if (const auto vs = validate_type(t_); !vs.empty()) throw Error("invalid type: " + describe(vs));
        if (t_.at_inner) throw Error("slits touch the inner boundary; the quotient is not a closed fat graph");
        tip_half_.assign(t_.slit_count(), -1);
        for (int s = 0; s < t_.slit_count(); ++s)
            if (s < t_.pairing[s]) {
                const int h = edge({PieceKind::tip});
                tip_half_[s] = h;
                tip_half_[t_.pairing[s]] = h + 1;
            }
        int bit = 0;
        for (int a = 0; a < t_.n(); ++a) build_annulus(a, bit);
        for (int s = 0; s < t_.slit_count(); ++s)
            if (s < t_.pairing[s]) {
                if (rb_.is_loop(tip_half_[s]))
                    throw Error("slits " + std::to_string(s) + " and " + std::to_string(t_.pairing[s]) +
                                " are squeezed; the quotient is not a closed fat graph");
                rb_.contract(tip_half_[s]);
            }
        fold_coinciding();
        count_multiplicities();
        rb_.smooth_all();
        auto res = rb_.build();
        TracedGraph out{std::move(res.graph), std::move(res.edge_tags), std::move(pieces_)};
        const auto vs = validate_closed(out.graph);
        if (!vs.empty()) throw Error("degenerate type: " + describe(vs));
        if (!is_admissible(out.graph)) throw Error("degenerate type: critical graph is not admissible");
        return out;
    }

private:
    int edge(Piece p, bool radial = false) {
        pieces_.push_back(p);
        const int h = rb_.new_edge({static_cast<int>(pieces_.size()) - 1});
        bottom_.push_back(radial ? 1 : 0);
        bottom_.push_back(0);
        return h;
    }

    void build_annulus(int a, int& bit) {
        const auto ds = dividers(t_.annuli[a]);
        const int count = static_cast<int>(ds.size());
        std::vector<int> feet(count);
        for (auto& f : feet) f = rb_.new_vertex();
        std::vector<int> fwd(count), back(count);
        for (int c = 0; c < count; ++c) {
            const int h = edge({PieceKind::arc, a, c});
            fwd[c] = h;
            back[(c + 1) % count] = h + 1;
        }
        const int leaf = rb_.new_leaf({a, LeafDirection::incoming});
        const int lh = edge({PieceKind::incoming_leaf, a});
        rb_.set_rotation(leaf, {lh});
        for (int d = 0; d < count; ++d) {
            const auto& stack = ds[d];
            const int size = static_cast<int>(stack.size());
            std::vector<char> fold(size + 1, 0);  // fold[k]: gap before stack[k]
            for (int k = 1; k < size; ++k) fold[k] = u_[bit++] ? 1 : 0;
            std::vector<int> rot{back[d]};
            for (int k = 0; k < size; ++k) {
                const int first = chain(a, d, stack[k], fold[k] != 0, fold[k + 1] != 0);
                rb_.set_flat(rot.back(), k > 0 && fold[k]);
                rot.push_back(first);
            }
            rb_.set_flat(rot.back(), false);
            rot.push_back(fwd[d]);
            if (d == 0) rot.push_back(lh + 1);
            rb_.set_rotation(feet[d], rot);
        }
    }

    /// Chain of pieces from the foot to the end of index x; returns the
    /// half-edge at the foot.
    int chain(int a, int d, int x, bool cw_flat, bool ccw_flat) {
        const int top = height(t_, x);
        int first = -1;
        int below = -1;
        for (int b = 0; b < top; ++b) {
            const int h = edge({PieceKind::terminal, a, d, b, x}, true);
            if (b == 0) {
                first = h;
            } else {
                node(below, h, cw_flat, ccw_flat);
            }
            below = h + 1;
        }
        int end;
        if (t_.is_slit(x)) {
            end = tip_half_[x];
        } else {
            const int leaf = rb_.new_leaf({x - t_.slit_count(), LeafDirection::outgoing});
            const int h = edge({PieceKind::outgoing_leaf, -1, -1});
            rb_.set_rotation(leaf, {h + 1});
            end = h;
        }
        node(below, end, cw_flat, ccw_flat);
        return first;
    }

    void node(int down, int up, bool cw_flat, bool ccw_flat) {
        const int v = rb_.new_vertex();
        rb_.set_rotation(v, {down, up});
        rb_.set_flat(down, cw_flat);
        rb_.set_flat(up, ccw_flat);
    }

    /// Folds pairs of radial pieces that leave a vertex through a corner of
    /// zero width, until none is left.
    void fold_coinciding() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < rb_.vertex_slots() && !changed; ++v) {
                const auto rot = rb_.rotation(v);
                if (rot.size() < 2) continue;
                for (int e1 : rot) {
                    const int e2 = rb_.next(e1);
                    if (e1 == e2 || !rb_.flat(e1) || !bottom_[e1] || !bottom_[e2]) continue;
                    const auto t1 = rb_.tags(e1);
                    const auto t2 = rb_.tags(e2);
                    if (!rb_.fold(e1, e2))
                        throw Error("coinciding segments close up; the quotient is not a closed fat graph");
                    for (int p : t1)
                        for (int q : t2) merged_.emplace_back(p, q);
                    changed = true;
                    break;
                }
            }
        }
    }

    void count_multiplicities() {
        std::vector<int> parent(pieces_.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto [p, q] : merged_) parent[find(p)] = find(q);
        std::vector<int> size(pieces_.size(), 0);
        for (std::size_t p = 0; p < pieces_.size(); ++p) ++size[find(static_cast<int>(p))];
        for (std::size_t p = 0; p < pieces_.size(); ++p) pieces_[p].multiplicity = size[find(static_cast<int>(p))];
    }

    const CombinatorialType& t_;
    const UnfoldingVector& u_;
    RibbonBuilder rb_;
    std::vector<std::pair<int, int>> merged_;
    std::vector<Piece> pieces_;
    std::vector<char> bottom_;
    std::vector<int> tip_half_;
};

}  // namespace detail

/// The graph in which stacked pairs are identified exactly where u folds.
inline TracedGraph traced_partial_graph(const CombinatorialType& t, const UnfoldingVector& u) {
    return detail::CriticalBuilder(t, u).run();
}

inline FatGraph partial_graph(const CombinatorialType& t, const UnfoldingVector& u) {
    return traced_partial_graph(t, u).graph;
}

inline FatGraph critical_graph(const CombinatorialType& t) { return partial_graph(t, all_fold(t)); }

inline FatGraph unfolded_graph(const CombinatorialType& t) { return partial_graph(t, all_unfold(t)); }

/// Distinct graphs (by canonical label) over the jump orbit and all corner
/// unfolding vectors.
inline std::vector<FatGraph> corner_family(const CombinatorialType& t) {
    std::map<std::string, FatGraph> found;
    for (const auto& u : jump_orbit(t)) {
        const int d = unfolding_length(u);
        for (long mask = 0; mask < (1L << d); ++mask) {
            UnfoldingVector bits(d);
            for (int k = 0; k < d; ++k) bits[k] = (mask >> k) & 1;
            auto g = partial_graph(u, bits);
            found.emplace(canonical_label(g), std::move(g));
        }
    }
    std::vector<FatGraph> out;
    for (auto& [label, g] : found) out.push_back(std::move(g));
    return out;
}

/// Barycentric display metric on a critical graph.
inline MetricAssignment barycentric_metric(const FatGraph& g) { return uniform_metric(g); }

namespace detail {

inline std::vector<int> edges_made_of(const TracedGraph& tg, const std::function<bool(const Piece&)>& pred) {
    std::vector<int> out;
    for (std::size_t e = 0; e < tg.edge_pieces.size(); ++e) {
        const auto& ps = tg.edge_pieces[e];
        if (ps.empty()) continue;
        if (std::all_of(ps.begin(), ps.end(), [&](int p) { return pred(tg.pieces[p]); }))
            out.push_back(static_cast<int>(e));
    }
    return out;
}

/// stem if all its pieces are shared by two or more segments, terminal if
/// none is, otherwise the kind of its first piece.
inline PieceKind edge_kind(const TracedGraph& tg, int e) {
    const auto& ps = tg.edge_pieces[e];
    if (ps.empty()) return PieceKind::arc;
    bool shared = true;
    for (int p : ps) {
        const auto& piece = tg.pieces[p];
        if (piece.kind != PieceKind::terminal) return tg.pieces[ps.front()].kind;
        shared = shared && piece.multiplicity >= 2;
    }
    return shared ? PieceKind::stem : PieceKind::terminal;
}

inline bool is_radial_edge(const TracedGraph& tg, int e) {
    const auto& ps = tg.edge_pieces[e];
    return !ps.empty() &&
           std::all_of(ps.begin(), ps.end(), [&](int p) { return tg.pieces[p].kind == PieceKind::terminal; });
}

}  // namespace detail

struct AnnularCollapse {
    FatGraph source;          // critical graph of t
    std::vector<int> forest;  // edge ids in source
    FatGraph collapsed;       // source with the forest collapsed
};

/// Collapse of annular chamber j: contracts the edges of the critical graph
/// lying entirely in that chamber.
inline AnnularCollapse annular_collapse(const CombinatorialType& t, int j) {
    const auto deg = multi_degree(t);
    if (j < 0 || j > deg.annular || deg.annular < 1) throw Error("annular chamber index out of range");
    const auto tg = traced_partial_graph(t, all_fold(t));
    AnnularCollapse out;
    out.source = tg.graph;
    out.forest = detail::edges_made_of(tg, [&](const Piece& p) {
        return p.kind == PieceKind::terminal && p.band == j;
    });
    out.collapsed = collapse_forest(tg.graph, out.forest);
    return out;
}

struct RadialZigzag {
    FatGraph source;                // critical graph of t
    std::vector<int> source_forest;
    FatGraph middle;                // face unfolded on the merged segment
    FatGraph target;                // critical graph of the face
    std::vector<int> target_forest;
};

/// Collapse of radial chamber j on annulus i, realized as two forest
/// collapses meeting in a partially unfolded graph of the face.
inline RadialZigzag radial_collapse_zigzag(const CombinatorialType& t, int i, int j) {
    const auto deg = multi_degree(t);
    if (i < 0 || i >= t.n()) throw Error("annulus index out of range");
    const int q = deg.radial[i];
    if (q < 1 || j < 0 || j > q) throw Error("radial chamber index out of range");
    const auto tf = face(t, i, j);
    const int left = j;
    const int right = (j + 1) % (q + 1);
    const int special = j < q ? j : 0;

    RadialZigzag z;
    const auto src = traced_partial_graph(t, all_fold(t));
    z.source = src.graph;
    for (int e = 0; e < static_cast<int>(src.edge_pieces.size()); ++e) {
        const auto& ps = src.edge_pieces[e];
        if (ps.empty() || src.pieces[ps.front()].annulus != i) continue;
        const auto& p = src.pieces[ps.front()];
        if (p.kind == PieceKind::arc && ps.size() == 1 && p.divider == j) z.source_forest.push_back(e);
        if (detail::is_radial_edge(src, e) && detail::edge_kind(src, e) == PieceKind::stem &&
            std::all_of(ps.begin(), ps.end(), [&](int k) {
                const auto& q = src.pieces[k];
                return q.annulus == i && (q.divider == left || q.divider == right);
            }))
            z.source_forest.push_back(e);
    }

    UnfoldingVector u;
    for (int a = 0; a < tf.n(); ++a) {
        const auto ds = dividers(tf.annuli[a]);
        for (int d = 0; d < static_cast<int>(ds.size()); ++d)
            for (std::size_t k = 0; k + 1 < ds[d].size(); ++k) u.push_back(!(a == i && d == special));
    }
    z.middle = partial_graph(tf, u);

    const auto tgt = traced_partial_graph(tf, all_fold(tf));
    z.target = tgt.graph;
    for (int e = 0; e < static_cast<int>(tgt.edge_pieces.size()); ++e) {
        const auto& ps = tgt.edge_pieces[e];
        if (detail::is_radial_edge(tgt, e) && detail::edge_kind(tgt, e) == PieceKind::stem &&
            std::all_of(ps.begin(), ps.end(), [&](int k) {
                return tgt.pieces[k].annulus == i && tgt.pieces[k].divider == special;
            }))
            z.target_forest.push_back(e);
    }
    return z;
}

inline nlohmann::json to_json(const RadialZigzag& z) {
    return {{"source_forest", z.source_forest},
            {"middle_graph", to_json(z.middle)},
            {"target_forest", z.target_forest}};
}

}  // namespace modcell

#endif  // MODCELL_CRITICAL_HPP
