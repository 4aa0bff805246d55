#ifndef MODCELL_SULLIVAN_HPP
#define MODCELL_SULLIVAN_HPP

// Sullivan diagrams: chords attached to parametrized circles.
//
// Chord ends 0..2h-1 belong to two-ended chords (paired by `pairing`), ends
// 2h..2h+m-1 are the free ends, i.e. chords ending in the outgoing leaves.
// Each circle lists its attachment sites counterclockwise from the
// basepoint; `first_at_zero` says whether the first site is the basepoint.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modcell/critical.hpp"
#include "modcell/fat_graph.hpp"
#include "modcell/radial.hpp"

namespace modcell {

struct SullivanDiagram {
    int chords = 0;  // two-ended chords
    int m = 1;       // free ends
    std::vector<Annulus> circles;
    std::vector<int> pairing;  // chord end -> other end

    int n() const { return static_cast<int>(circles.size()); }
    int end_count() const { return 2 * chords + m; }
    bool is_chord_end(int e) const { return e < 2 * chords; }

    auto operator<=>(const SullivanDiagram&) const = default;
};

struct TopologicalType {
    int genus = 0;
    int n = 0;
    int m = 0;

    auto operator<=>(const TopologicalType&) const = default;
};

namespace detail {

inline CombinatorialType as_type(const SullivanDiagram& d) {
    CombinatorialType t;
    t.h = d.chords;
    t.m = d.m;
    t.annuli = d.circles;
    t.pairing = d.pairing;
    t.level.assign(2 * d.chords, 1);
    t.levels = d.chords > 0 ? 1 : 0;
    t.at_outer = d.chords > 0;
    return t;
}

inline SullivanDiagram from_type(const CombinatorialType& t) {
    SullivanDiagram d;
    d.chords = t.h;
    d.m = t.m;
    d.circles = t.annuli;
    d.pairing = t.pairing;
    return d;
}

inline Violations structure_violations(const SullivanDiagram& d) {
    Violations out;
    if (d.chords < 0 || d.m < 0) out.push_back({"structure", "negative chord or free end count"});
    if (static_cast<int>(d.pairing.size()) != 2 * d.chords)
        out.push_back({"structure", "pairing has " + std::to_string(d.pairing.size()) + " entries, expected " +
                                        std::to_string(2 * d.chords)});
    if (!out.empty()) return out;
    for (int e = 0; e < 2 * d.chords; ++e) {
        const int f = d.pairing[e];
        if (f < 0 || f >= 2 * d.chords || f == e || d.pairing[f] != e)
            out.push_back({"structure", "pairing is not a fixed-point-free involution at end " + std::to_string(e)});
    }
    std::map<int, int> seen;
    for (int c = 0; c < d.n(); ++c) {
        if (d.circles[c].positions.empty())
            out.push_back({"attachment", "circle " + std::to_string(c) + " has no attached chord"});
        for (const auto& site : d.circles[c].positions) {
            if (site.empty()) out.push_back({"structure", "empty site on circle " + std::to_string(c)});
            for (int e : site) ++seen[e];
        }
    }
    for (auto [e, k] : seen) {
        if (e < 0) out.push_back({"structure", "negative chord end " + std::to_string(e)});
        if (k > 1) out.push_back({"structure", "chord end " + std::to_string(e) + " attached " + std::to_string(k) + " times"});
    }
    for (int e = 0; e < 2 * d.chords; ++e)
        if (!seen.count(e)) out.push_back({"structure", "chord end " + std::to_string(e) + " is not attached"});
    int free = 0;
    for (auto [e, k] : seen)
        if (e >= 2 * d.chords) ++free;
    bool labels_ok = true;
    for (int k = 0; k < free; ++k) labels_ok = labels_ok && seen.count(2 * d.chords + k);
    if (free != d.m || !labels_ok)
        out.push_back({"free-ends", "expected free ends " + std::to_string(2 * d.chords) + ".." +
                                        std::to_string(2 * d.chords + d.m - 1) + ", found " + std::to_string(free)});
    return out;
}

struct InducedGraph {
    FatGraph graph;
    std::vector<std::vector<int>> arcs;  // per circle, per site: edge id towards the next site
};

/// Fat graph with one vertex per site, rotation (arc in, ends, arc out) and
/// the incoming leaf after the arc out at the basepoint.
inline InducedGraph induce(const SullivanDiagram& d) {
    RibbonBuilder rb;
    std::vector<int> end_half(d.end_count(), -1);
    for (int e = 0; e < 2 * d.chords; ++e)
        if (e < d.pairing[e]) {
            const int h = rb.new_edge();
            end_half[e] = h;
            end_half[d.pairing[e]] = h + 1;
        }
    for (int k = 0; k < d.m; ++k) {
        const int h = rb.new_edge();
        const int leaf = rb.new_leaf({k, LeafDirection::outgoing});
        rb.set_rotation(leaf, {h + 1});
        end_half[2 * d.chords + k] = h;
    }
    std::vector<std::vector<int>> fwd_half(d.n());
    for (int c = 0; c < d.n(); ++c) {
        const auto ds = dividers(d.circles[c]);
        const int count = static_cast<int>(ds.size());
        std::vector<int> fwd(count), back(count);
        for (int s = 0; s < count; ++s) {
            const int h = rb.new_edge();
            fwd[s] = h;
            back[(s + 1) % count] = h + 1;
        }
        const int leaf = rb.new_leaf({c, LeafDirection::incoming});
        const int lh = rb.new_edge();
        rb.set_rotation(leaf, {lh});
        for (int s = 0; s < count; ++s) {
            std::vector<int> rot{back[s]};
            for (int e : ds[s]) rot.push_back(end_half[e]);
            rot.push_back(fwd[s]);
            if (s == 0) rot.push_back(lh + 1);
            rb.set_rotation(rb.new_vertex(), rot);
        }
        fwd_half[c] = fwd;
    }
    auto res = rb.build();
    InducedGraph out{std::move(res.graph), {}};
    for (const auto& fwd : fwd_half) {
        std::vector<int> ids;
        for (int h : fwd) ids.push_back(out.graph.edge_of(res.half_edge_map[h]));
        out.arcs.push_back(std::move(ids));
    }
    return out;
}

}  // namespace detail

/// All violated conditions; empty when d is a valid diagram.
inline Violations validate_diagram(const SullivanDiagram& d) {
    auto out = detail::structure_violations(d);
    if (!out.empty()) return out;
    const auto g = detail::induce(d).graph;
    for (auto& v : validate_closed(g)) out.push_back({"closed", v.message});
    if (!out.empty()) return out;
    if (!is_admissible(g)) out.push_back({"admissible", "induced fat graph is not admissible"});
    if (connected_components(g).size() != 1) out.push_back({"connected", "induced fat graph is disconnected"});
    const auto cycles = boundary_cycles(g);
    const int outgoing = static_cast<int>(cycles.size()) - d.n();
    if (outgoing != d.m)
        out.push_back({"outgoing-cycles", std::to_string(outgoing) + " outgoing boundary cycles, expected " +
                                              std::to_string(d.m)});
    return out;
}

inline bool is_valid(const SullivanDiagram& d) { return validate_diagram(d).empty(); }

/// Induced fat graph of a valid diagram.
inline FatGraph induced_fat_graph(const SullivanDiagram& d) {
    if (const auto vs = validate_diagram(d); !vs.empty()) throw Error("invalid diagram: " + describe(vs));
    return detail::induce(d).graph;
}

inline TopologicalType topological_type(const SullivanDiagram& d) {
    const auto st = surface_type(induced_fat_graph(d));
    return {st.genus, d.n(), d.m};
}

inline std::vector<int> encode(const SullivanDiagram& d) { return encode(detail::as_type(d)); }

/// Least encoding over slides, with chord ends renamed by first appearance.
inline SullivanDiagram canonicalize(const SullivanDiagram& d) {
    return detail::from_type(canonicalize(detail::as_type(d)));
}

/// Diagram of an admissible fat graph: every vertex off the admissible
/// cycles is slid onto them, then the chord data is read off and normalized.
inline SullivanDiagram from_admissible(FatGraph g) {
    if (!is_admissible(g)) throw Error("fat graph is not admissible");
    for (;;) {
        std::set<int> on_circle;
        for (const auto& c : admissible_cycles(g)) on_circle.insert(c.vertices.begin(), c.vertices.end());
        int pick = -1;
        const auto edges = g.edges();
        for (int e = 0; e < static_cast<int>(edges.size()) && pick < 0; ++e) {
            const auto [a, b] = edges[e];
            if (g.is_leaf_edge(a) || g.source(a) == g.source(b)) continue;
            if (!on_circle.count(g.source(a)) || !on_circle.count(g.source(b))) pick = e;
        }
        if (pick < 0) break;
        g = collapse_forest(g, {pick});
    }

    const auto cycles = admissible_cycles(g);
    std::set<int> circle_half;
    for (const auto& c : cycles)
        for (int h : c.half_edges) {
            circle_half.insert(h);
            circle_half.insert(g.pair(h));
        }
    std::map<int, int> vertex_circle;
    for (std::size_t c = 0; c < cycles.size(); ++c)
        for (int v : cycles[c].vertices) vertex_circle[v] = static_cast<int>(c);

    SullivanDiagram d;
    int outgoing = 0;
    for (const auto& l : g.leaves())
        if (l.direction == LeafDirection::outgoing) ++outgoing;
    std::vector<int> label(g.half_edge_count(), -1);
    std::vector<std::pair<int, int>> chord_halves;  // (label, half-edge)
    int next_label = 0;
    std::vector<std::vector<std::vector<int>>> stacks(cycles.size());
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& cyc = cycles[c];
        const auto in = g.find_leaf(cyc.leaf_index, LeafDirection::incoming);
        const int hb = g.pair(g.leaf_half_edge(*in));
        std::vector<std::size_t> order{0};
        for (std::size_t k = cyc.half_edges.size(); k-- > 1;) order.push_back(k);
        for (std::size_t k : order) {
            std::vector<int> stack;
            for (int x = g.sigma(cyc.half_edges[k]); !circle_half.count(x) && x != hb; x = g.sigma(x)) {
                const int y = g.pair(x);
                if (const auto l = g.leaf_at(g.source(y)); l && l->direction == LeafDirection::outgoing) {
                    stack.push_back(-1 - l->index);
                } else if (vertex_circle.count(g.source(y))) {
                    label[x] = next_label++;
                    chord_halves.emplace_back(label[x], x);
                    stack.push_back(label[x]);
                } else {
                    throw Error("vertex " + std::to_string(g.source(y)) + " is off the admissible cycles");
                }
            }
            stacks[c].push_back(std::move(stack));
        }
    }
    d.chords = next_label / 2;
    d.m = outgoing;
    d.pairing.assign(next_label, -1);
    for (auto [lab, x] : chord_halves) d.pairing[lab] = label[g.pair(x)];
    for (auto& ss : stacks) {
        Annulus a;
        a.first_at_zero = !ss[0].empty();
        for (std::size_t k = 0; k < ss.size(); ++k) {
            if (k == 0 && ss[k].empty()) continue;
            for (int& e : ss[k])
                if (e < 0) e = 2 * d.chords + (-1 - e);
            a.positions.push_back(ss[k]);
        }
        d.circles.push_back(std::move(a));
    }
    return canonicalize(d);
}

/// Diagram of the unfolded graph of a unilevel type.
inline SullivanDiagram f_map(const CombinatorialType& t) {
    if (!is_unilevel(t)) throw Error("f_map expects a unilevel type");
    return from_admissible(unfolded_graph(t));
}

/// Unilevel type with positions at the sites and slits at the chords.
inline CombinatorialType g_map(const SullivanDiagram& d) {
    if (const auto vs = validate_diagram(d); !vs.empty()) throw Error("invalid diagram: " + describe(vs));
    return canonicalize(detail::as_type(d));
}

/// Number of admissible edges minus the number of circles.
inline int dimension(const SullivanDiagram& d) { return multi_degree(detail::as_type(d)).radial_dimension(); }

/// Collapses edge j of circle i; edge j runs from site j to the next site
/// counterclockwise, with the basepoint counted as site 0.
inline SullivanDiagram sd_face(const SullivanDiagram& d, int i, int j) {
    if (const auto vs = validate_diagram(d); !vs.empty()) throw Error("invalid diagram: " + describe(vs));
    if (i < 0 || i >= d.n()) throw Error("circle index " + std::to_string(i) + " out of range");
    const auto ind = detail::induce(d);
    const int count = static_cast<int>(ind.arcs[i].size());
    if (count < 2 || j < 0 || j >= count)
        throw Error("edge index " + std::to_string(j) + " out of range for circle " + std::to_string(i));
    return from_admissible(collapse_forest(ind.graph, {ind.arcs[i][j]}));
}

/// Canonical diagrams of topological type (g, n, m), sorted by encoding.
inline std::vector<SullivanDiagram> enumerate_diagrams(int g, int n, int m, int workers = 1) {
    if (n < 1 || m < 1) throw Error("diagrams need at least one circle and one free end");
    if (g < 0) throw Error("genus must be nonnegative");
    const int h = slit_pairs_for(g, n, m);
    const int total = 2 * h + m;
    if (total < n) return {};

    // words: free ends placed at distinct slots, chords matched on the rest
    std::vector<std::vector<int>> words;
    std::vector<int> word(total, -1);
    std::function<void(int)> match = [&](int next) {
        const auto it = std::find(word.begin(), word.end(), -1);
        if (it == word.end()) {
            words.push_back(word);
            return;
        }
        *it = next;
        for (auto jt = it + 1; jt != word.end(); ++jt)
            if (*jt == -1) {
                *jt = next + 1;
                match(next + 2);
                *jt = -1;
            }
        *it = -1;
    };
    std::function<void(int)> place = [&](int k) {
        if (k == m) {
            match(0);
            return;
        }
        for (int s = 0; s < total; ++s)
            if (word[s] == -1) {
                word[s] = 2 * h + k;
                place(k + 1);
                word[s] = -1;
            }
    };
    place(0);

    std::vector<int> pairing(2 * h);
    for (int e = 0; e < 2 * h; ++e) pairing[e] = e ^ 1;
    auto per = parallel_map(
        words,
        [&](const std::vector<int>& w) {
            std::map<std::vector<int>, SullivanDiagram> found;
            // n nonempty blocks, each split into sites, with or without a
            // basepoint site
            std::vector<int> cuts{0};
            std::function<void(int)> split = [&](int left) {
                if (left == 0) {
                    if (cuts.back() != total) return;
                    SullivanDiagram d;
                    d.chords = h;
                    d.m = m;
                    d.pairing = pairing;
                    std::function<void(int)> shape = [&](int c) {
                        if (c == n) {
                            if (!validate_diagram(d).empty()) return;
                            if (topological_type(d).genus != g) return;
                            auto k = canonicalize(d);
                            found.emplace(encode(k), std::move(k));
                            return;
                        }
                        const int lo = cuts[c], len = cuts[c + 1] - cuts[c];
                        for (int mask = 0; mask < (1 << (len - 1)); ++mask)
                            for (int z = 0; z < 2; ++z) {
                                Annulus a;
                                a.first_at_zero = z == 1;
                                std::vector<int> site{w[lo]};
                                for (int k = 1; k < len; ++k) {
                                    if (mask & (1 << (k - 1))) {
                                        a.positions.push_back(site);
                                        site.clear();
                                    }
                                    site.push_back(w[lo + k]);
                                }
                                a.positions.push_back(site);
                                d.circles.push_back(std::move(a));
                                shape(c + 1);
                                d.circles.pop_back();
                            }
                    };
                    shape(0);
                    return;
                }
                for (int c = cuts.back() + 1; c <= total - (left - 1); ++c) {
                    cuts.push_back(c);
                    split(left - 1);
                    cuts.pop_back();
                }
            };
            split(n);
            return found;
        },
        workers);
    std::map<std::vector<int>, SullivanDiagram> all;
    for (auto& f : per) all.insert(f.begin(), f.end());
    std::vector<SullivanDiagram> out;
    for (auto& [code, d] : all) out.push_back(std::move(d));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const SullivanDiagram& d) {
    nlohmann::json circles = nlohmann::json::array();
    std::vector<nlohmann::json> where(d.end_count());
    for (int c = 0; c < d.n(); ++c) {
        const auto ds = dividers(d.circles[c]);
        nlohmann::json sites = nlohmann::json::array();
        for (int s = 0; s < static_cast<int>(ds.size()); ++s) {
            sites.push_back(ds[s]);
            for (int k = 0; k < static_cast<int>(ds[s].size()); ++k) where[ds[s][k]] = {c, s, k};
        }
        circles.push_back(sites);
    }
    nlohmann::json chords = nlohmann::json::array();
    for (int e = 0; e < 2 * d.chords; ++e)
        if (e < d.pairing[e]) chords.push_back({{"ends", {where[e], where[d.pairing[e]]}}});
    nlohmann::json free_order = nlohmann::json::array();
    for (int k = 0; k < d.m; ++k) {
        chords.push_back({{"ends", {where[2 * d.chords + k], "free"}}});
        free_order.push_back(2 * d.chords + k);
    }
    return {{"circles", circles}, {"chords", chords}, {"free_order", free_order}};
}

/// Reads the layout written by to_json: site 0 of every circle is the
/// basepoint site, possibly empty.
inline SullivanDiagram diagram_from_json(const nlohmann::json& j) {
    SullivanDiagram d;
    const auto& chords = j.at("chords");
    int two_ended = 0;
    for (const auto& ch : chords)
        if (!ch.at("ends").at(1).is_string()) ++two_ended;
    d.chords = two_ended;
    d.m = static_cast<int>(chords.size()) - two_ended;
    d.pairing.assign(2 * two_ended, -1);
    std::map<std::vector<int>, int> end_at;
    int e = 0;
    for (const auto& ch : chords) {
        const auto& ends = ch.at("ends");
        if (ends.at(1).is_string()) continue;
        end_at[ends.at(0).get<std::vector<int>>()] = e;
        end_at[ends.at(1).get<std::vector<int>>()] = e + 1;
        d.pairing[e] = e + 1;
        d.pairing[e + 1] = e;
        e += 2;
    }
    int free = 2 * two_ended;
    for (const auto& ch : chords)
        if (ch.at("ends").at(1).is_string()) end_at[ch.at("ends").at(0).get<std::vector<int>>()] = free++;
    const auto& circles = j.at("circles");
    for (int c = 0; c < static_cast<int>(circles.size()); ++c) {
        std::vector<std::vector<int>> ds;
        for (int s = 0; s < static_cast<int>(circles[c].size()); ++s) {
            std::vector<int> site;
            for (int k = 0; k < static_cast<int>(circles[c][s].size()); ++k) {
                const auto it = end_at.find({c, s, k});
                if (it == end_at.end()) throw Error("site slot without a chord end");
                site.push_back(it->second);
            }
            ds.push_back(std::move(site));
        }
        if (ds.empty()) ds.emplace_back();
        d.circles.push_back(from_dividers(std::move(ds)));
    }
    return d;
}

inline std::string to_text(const SullivanDiagram& d) {
    std::ostringstream os;
    for (int c = 0; c < d.n(); ++c) {
        if (c) os << " / ";
        os << (d.circles[c].first_at_zero ? "0" : "~");
        for (const auto& s : d.circles[c].positions) {
            os << "[";
            for (std::size_t k = 0; k < s.size(); ++k) os << (k ? " " : "") << s[k];
            os << "]";
        }
    }
    os << " chords=";
    for (int e = 0; e < 2 * d.chords; ++e) os << (e ? "," : "") << d.pairing[e];
    return os.str();
}

}  // namespace modcell

#endif  // MODCELL_SULLIVAN_HPP
