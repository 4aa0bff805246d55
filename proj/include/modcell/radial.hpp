#ifndef MODCELL_RADIAL_HPP
#define MODCELL_RADIAL_HPP

// Combinatorial types of radial slit configurations.
//
// Indices: slits are 0..2h-1, parametrization points are 2h..2h+m-1.
// Each annulus lists its angular positions counterclockwise from angle 0;
// every position holds a stack of indices ordered clockwise to
// counterclockwise (the infinitesimal order of coinciding segments).
// Levels are 1..levels, increasing with radius.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modcell/error.hpp"
#include "modcell/parallel.hpp"

namespace modcell {

struct Annulus {
    bool first_at_zero = false;
    std::vector<std::vector<int>> positions;

    auto operator<=>(const Annulus&) const = default;
};

struct CombinatorialType {
    int h = 0;
    int m = 1;
    std::vector<Annulus> annuli;
    std::vector<int> pairing;  // slit -> paired slit
    std::vector<int> level;    // slit -> 1..levels
    int levels = 0;
    bool at_inner = false;
    bool at_outer = false;

    int n() const { return static_cast<int>(annuli.size()); }
    int slit_count() const { return 2 * h; }
    int xi_count() const { return 2 * h + m; }
    bool is_slit(int x) const { return x < 2 * h; }

    auto operator<=>(const CombinatorialType&) const = default;
};

struct MultiDegree {
    std::vector<int> radial;
    int annular = 0;

    int dimension() const { return std::accumulate(radial.begin(), radial.end(), annular); }
    int radial_dimension() const { return std::accumulate(radial.begin(), radial.end(), 0); }

    bool operator==(const MultiDegree&) const = default;
};

enum class TypeFilter { nondegenerate, unilevel, all };

// ---------------------------------------------------------------------------
// Parameters

/// Genus of a connected cobordism with 2h slits, n incoming and m outgoing
/// boundary components; throws when h - n - m + 2 is negative or odd.
inline int genus_for(int h, int n, int m) {
    const int twice = h - n - m + 2;
    if (h < 0 || n < 1 || m < 1 || twice < 0 || twice % 2 != 0)
        throw Error("inconsistent parameters (h=" + std::to_string(h) + ", n=" + std::to_string(n) +
                    ", m=" + std::to_string(m) + "): 2h = 2(2g-2+n+m) needs a nonnegative integer genus g");
    return twice / 2;
}

inline int slit_pairs_for(int g, int n, int m) {
    if (g < 0 || n < 1 || m < 1) throw Error("need g >= 0, n >= 1 and m >= 1");
    return 2 * g - 2 + n + m;
}

// ---------------------------------------------------------------------------
// Heights and chambers

/// Number of strictly interior levels.
inline int interior_levels(const CombinatorialType& t) {
    return t.levels - (t.at_inner ? 1 : 0) - (t.at_outer ? 1 : 0);
}

/// Radius rank of a level: 0 is the inner boundary, p+1 the outer radius.
inline int level_rank(const CombinatorialType& t, int lvl) { return t.at_inner ? lvl - 1 : lvl; }

/// Height of an index used by jumps and folds: slits sit at the rank of
/// their level, parametrization points above everything.
inline int height(const CombinatorialType& t, int x) {
    if (t.is_slit(x)) return level_rank(t, t.level[x]);
    return interior_levels(t) + 2;
}

/// Stacks on the radial dividers D_0 (positive real line) .. D_q. D_0 is
/// empty when no position lies on the real line.
inline std::vector<std::vector<int>> dividers(const Annulus& a) {
    std::vector<std::vector<int>> out;
    if (!a.first_at_zero) out.emplace_back();
    for (const auto& s : a.positions) out.push_back(s);
    return out;
}

inline Annulus from_dividers(std::vector<std::vector<int>> ds) {
    Annulus a;
    a.first_at_zero = !ds.empty() && !ds[0].empty();
    for (std::size_t k = 0; k < ds.size(); ++k) {
        if (k == 0 && ds[0].empty()) continue;
        a.positions.push_back(std::move(ds[k]));
    }
    return a;
}

inline MultiDegree multi_degree(const CombinatorialType& t) {
    MultiDegree d;
    for (const auto& a : t.annuli)
        d.radial.push_back(static_cast<int>(a.positions.size()) + (a.first_at_zero ? 0 : 1) - 1);
    d.annular = t.h == 0 ? 0 : interior_levels(t);
    return d;
}

/// Indices of an annulus in cyclic counterclockwise order from angle 0.
inline std::vector<int> cyclic_sequence(const Annulus& a) {
    std::vector<int> out;
    for (const auto& s : a.positions) out.insert(out.end(), s.begin(), s.end());
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

/// Successor of each slit among the slits of its annulus (the permutation
/// omega). Returns -1 entries for malformed input.
inline std::vector<int> slit_successor(const CombinatorialType& t) {
    std::vector<int> omega(t.slit_count(), -1);
    for (const auto& a : t.annuli) {
        std::vector<int> slits;
        for (int x : cyclic_sequence(a))
            if (t.is_slit(x)) slits.push_back(x);
        for (std::size_t k = 0; k < slits.size(); ++k) omega[slits[k]] = slits[(k + 1) % slits.size()];
    }
    return omega;
}

}  // namespace detail

/// Outgoing boundary components: each entry lists the slits whose following
/// outer arc belongs to it, or is empty for an annulus without slits.
struct OutgoingComponent {
    std::vector<int> slits;
    int annulus = -1;  // set for slit-free annuli
};

inline std::vector<OutgoingComponent> outgoing_components(const CombinatorialType& t) {
    const auto omega = detail::slit_successor(t);
    std::vector<OutgoingComponent> out;
    std::vector<char> seen(t.slit_count(), 0);
    for (int s = 0; s < t.slit_count(); ++s) {
        if (seen[s] || omega[s] < 0) continue;
        OutgoingComponent c;
        int x = s;
        while (!seen[x]) {
            seen[x] = 1;
            c.slits.push_back(x);
            x = t.pairing[omega[x]];
        }
        out.push_back(std::move(c));
    }
    for (int a = 0; a < t.n(); ++a) {
        bool has_slit = false;
        for (int x : cyclic_sequence(t.annuli[a]))
            if (t.is_slit(x)) has_slit = true;
        if (!has_slit) out.push_back({{}, a});
    }
    return out;
}

/// Component index of each parametrization point (indexed by point number).
inline std::vector<int> point_components(const CombinatorialType& t, const std::vector<OutgoingComponent>& comps) {
    std::map<int, int> of_slit, of_annulus;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        for (int s : comps[c].slits) of_slit[s] = static_cast<int>(c);
        if (comps[c].annulus >= 0) of_annulus[comps[c].annulus] = static_cast<int>(c);
    }
    std::vector<int> out(t.m, -1);
    for (int a = 0; a < t.n(); ++a) {
        const auto seq = cyclic_sequence(t.annuli[a]);
        int last_slit = -1;
        for (int x : seq)
            if (t.is_slit(x)) last_slit = x;
        for (int x : seq) {
            if (t.is_slit(x)) {
                last_slit = x;
                continue;
            }
            const int p = x - t.slit_count();
            out[p] = last_slit < 0 ? of_annulus[a] : of_slit[last_slit];
        }
    }
    return out;
}

inline Violations validate_type(const CombinatorialType& t) {
    Violations out;
    const int total = t.xi_count();
    if (t.h < 0 || t.m < 1 || t.annuli.empty()) {
        out.push_back({"(vi)", "need h >= 0, m >= 1 and at least one annulus"});
        return out;
    }
    if (static_cast<int>(t.pairing.size()) != t.slit_count() || static_cast<int>(t.level.size()) != t.slit_count()) {
        out.push_back({"(vi)", "pairing and level must have 2h entries"});
        return out;
    }
    for (int s = 0; s < t.slit_count(); ++s) {
        const int q = t.pairing[s];
        if (q < 0 || q >= t.slit_count() || q == s || t.pairing[q] != s) {
            out.push_back({"(ii)", "slit pairing is not a fixed-point-free involution"});
            return out;
        }
    }
    std::vector<int> count(total, 0);
    bool range_ok = true;
    for (const auto& a : t.annuli)
        for (const auto& s : a.positions) {
            if (s.empty()) out.push_back({"(vi)", "empty stack"});
            for (int x : s) {
                if (x < 0 || x >= total)
                    range_ok = false;
                else
                    ++count[x];
            }
        }
    if (!range_ok) {
        out.push_back({"(iii)", "index out of range"});
        return out;
    }
    for (int x = 0; x < total; ++x)
        if (count[x] != 1)
            out.push_back({"(iii)", "index " + std::to_string(x) + " appears " + std::to_string(count[x]) + " times"});
    for (int a = 0; a < t.n(); ++a)
        if (t.annuli[a].positions.empty()) out.push_back({"(iii)", "annulus " + std::to_string(a) + " is empty"});
    if (!out.empty()) return out;

    if (t.h == 0) {
        if (t.levels != 0 || t.at_inner || t.at_outer) out.push_back({"(i)", "level data without slits"});
    } else {
        if (t.levels < 1) out.push_back({"(i)", "no levels"});
        if (t.levels == 1 && t.at_inner && t.at_outer)
            out.push_back({"(i)", "one level cannot be both inner and outer"});
        std::vector<char> used(std::max(t.levels, 0) + 1, 0);
        for (int s = 0; s < t.slit_count(); ++s) {
            if (t.level[s] < 1 || t.level[s] > t.levels) {
                out.push_back({"(i)", "slit " + std::to_string(s) + " has level out of range"});
                return out;
            }
            used[t.level[s]] = 1;
        }
        for (int l = 1; l <= t.levels; ++l)
            if (!used[l]) out.push_back({"levels", "level " + std::to_string(l) + " carries no slit"});
        for (int s = 0; s < t.slit_count(); ++s)
            if (t.level[s] != t.level[t.pairing[s]]) {
                out.push_back({"(ii)", "slits " + std::to_string(s) + " and " + std::to_string(t.pairing[s]) +
                                           " lie on different levels"});
                break;
            }
    }
    const auto comps = outgoing_components(t);
    if (static_cast<int>(comps.size()) != t.m)
        out.push_back({"(iv)", "boundary component permutation has " + std::to_string(comps.size()) +
                                   " cycles, expected " + std::to_string(t.m)});
    const auto pc = point_components(t, comps);
    std::vector<int> per(comps.size(), 0);
    for (int c : pc)
        if (c >= 0) ++per[c];
    for (std::size_t c = 0; c < comps.size(); ++c)
        if (per[c] != 1) {
            out.push_back({"(v)", "outgoing arc set " + std::to_string(c) + " holds " + std::to_string(per[c]) +
                                      " parametrization points"});
            break;
        }
    return out;
}

inline bool is_valid(const CombinatorialType& t) { return validate_type(t).empty(); }

/// True when the glued surface is connected, i.e. the annuli are linked by
/// slit pairs into one piece.
inline bool is_connected(const CombinatorialType& t) {
    std::vector<int> annulus_of(t.xi_count(), 0);
    for (int a = 0; a < t.n(); ++a)
        for (int x : cyclic_sequence(t.annuli[a])) annulus_of[x] = a;
    std::vector<int> parent(t.n());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int s = 0; s < t.slit_count(); ++s) parent[find(annulus_of[s])] = find(annulus_of[t.pairing[s]]);
    for (int a = 0; a < t.n(); ++a)
        if (find(a) != find(0)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Encoding and relabeling

inline std::vector<int> encode(const CombinatorialType& t) {
    std::vector<int> e{t.h, t.m, t.n()};
    for (const auto& a : t.annuli) {
        e.push_back(a.first_at_zero ? 1 : 0);
        e.push_back(static_cast<int>(a.positions.size()));
        for (const auto& s : a.positions) {
            e.push_back(static_cast<int>(s.size()));
            e.insert(e.end(), s.begin(), s.end());
        }
    }
    e.insert(e.end(), t.pairing.begin(), t.pairing.end());
    e.insert(e.end(), t.level.begin(), t.level.end());
    e.push_back(t.levels);
    e.push_back(t.at_inner ? 1 : 0);
    e.push_back(t.at_outer ? 1 : 0);
    return e;
}

/// Renames slits by order of first appearance (annuli in order, positions
/// from angle 0, stacks bottom-up).
inline CombinatorialType relabel_slits(const CombinatorialType& t) {
    std::vector<int> map(t.xi_count());
    std::iota(map.begin(), map.end(), 0);
    int next = 0;
    for (const auto& a : t.annuli)
        for (int x : cyclic_sequence(a))
            if (t.is_slit(x)) map[x] = next++;
    CombinatorialType r = t;
    for (auto& a : r.annuli)
        for (auto& s : a.positions)
            for (int& x : s) x = map[x];
    for (int s = 0; s < t.slit_count(); ++s) {
        r.pairing[map[s]] = map[t.pairing[s]];
        r.level[map[s]] = t.level[s];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Jumps

namespace detail {

struct Location {
    int annulus = -1;
    int position = -1;
    int slot = -1;
};

inline Location locate(const CombinatorialType& t, int x) {
    for (int a = 0; a < t.n(); ++a)
        for (int p = 0; p < static_cast<int>(t.annuli[a].positions.size()); ++p) {
            const auto& s = t.annuli[a].positions[p];
            for (int k = 0; k < static_cast<int>(s.size()); ++k)
                if (s[k] == x) return {a, p, k};
        }
    throw Error("index " + std::to_string(x) + " not found");
}

/// Moves x next to slit target: after it when `after`, else before.
inline CombinatorialType move_next_to(const CombinatorialType& t, int x, int target, bool after) {
    CombinatorialType r = t;
    const auto from = locate(r, x);
    auto& src = r.annuli[from.annulus].positions[from.position];
    src.erase(src.begin() + from.slot);
    const auto to = locate(r, target);
    auto& dst = r.annuli[to.annulus].positions[to.position];
    dst.insert(dst.begin() + to.slot + (after ? 1 : 0), x);
    if (src.empty()) {
        auto& ps = r.annuli[from.annulus].positions;
        const bool was_first = from.position == 0;
        ps.erase(ps.begin() + from.position);
        if (was_first) r.annuli[from.annulus].first_at_zero = false;
    }
    return r;
}

}  // namespace detail

/// Types reachable from t by one slit or parametrization-point jump.
inline std::vector<CombinatorialType> jump_neighbors(const CombinatorialType& t) {
    std::vector<CombinatorialType> out;
    for (const auto& a : t.annuli)
        for (const auto& s : a.positions)
            for (int k = 0; k < static_cast<int>(s.size()); ++k) {
                const int j = s[k];
                if (!t.is_slit(j)) continue;
                const int target = t.pairing[j];
                if (k > 0) {
                    const int x = s[k - 1];
                    if (x != target && height(t, x) >= height(t, j))
                        out.push_back(detail::move_next_to(t, x, target, true));
                }
                if (k + 1 < static_cast<int>(s.size())) {
                    const int x = s[k + 1];
                    if (x != target && height(t, x) >= height(t, j))
                        out.push_back(detail::move_next_to(t, x, target, false));
                }
            }
    return out;
}

/// Closure of {t} under jumps, in breadth-first discovery order.
inline std::vector<CombinatorialType> jump_orbit(const CombinatorialType& t) {
    std::vector<CombinatorialType> out{t};
    std::set<std::vector<int>> seen{encode(t)};
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto next = jump_neighbors(out[k]);
        for (auto& u : next)
            if (seen.insert(encode(u)).second) out.push_back(std::move(u));
    }
    return out;
}

inline CombinatorialType canonicalize(const CombinatorialType& t) {
    std::optional<CombinatorialType> best;
    std::vector<int> best_code;
    for (const auto& u : jump_orbit(t)) {
        auto r = relabel_slits(u);
        auto code = encode(r);
        if (!best || code < best_code) {
            best_code = std::move(code);
            best = std::move(r);
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Degeneracy

/// Paired slits in one stack with every index strictly between them at
/// least as high as they are.
inline bool has_squeezed_pair(const CombinatorialType& t) {
    for (const auto& a : t.annuli)
        for (const auto& s : a.positions)
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!t.is_slit(s[i])) continue;
                for (std::size_t k = i + 1; k < s.size(); ++k) {
                    if (s[k] == t.pairing[s[i]]) return true;
                    if (height(t, s[k]) < height(t, s[i])) break;
                }
            }
    return false;
}

inline bool is_degenerate(const CombinatorialType& t) {
    if (t.at_inner || t.at_outer) return true;
    for (const auto& u : jump_orbit(t))
        if (has_squeezed_pair(u)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Face maps

/// Collapses chamber j on axis i. Axes 0..n-1 are the annuli (radial
/// chambers); axis n is annular.
inline CombinatorialType face(const CombinatorialType& t, int i, int j) {
    const auto deg = multi_degree(t);
    if (i < 0 || i > t.n()) throw Error("axis index out of range");
    if (i < t.n()) {
        const int q = deg.radial[i];
        if (q < 1 || j < 0 || j > q) throw Error("radial chamber index out of range");
        auto ds = dividers(t.annuli[i]);
        std::vector<std::vector<int>> nd;
        if (j < q) {
            for (int k = 0; k < static_cast<int>(ds.size()); ++k) {
                if (k == j + 1) continue;
                if (k == j) {
                    auto merged = ds[j];
                    merged.insert(merged.end(), ds[j + 1].begin(), ds[j + 1].end());
                    nd.push_back(std::move(merged));
                } else {
                    nd.push_back(ds[k]);
                }
            }
        } else {
            auto merged = ds[q];
            merged.insert(merged.end(), ds[0].begin(), ds[0].end());
            nd.push_back(std::move(merged));
            for (int k = 1; k < q; ++k) nd.push_back(ds[k]);
        }
        CombinatorialType r = t;
        r.annuli[i] = from_dividers(std::move(nd));
        return r;
    }
    const int p = deg.annular;
    if (p < 1 || j < 0 || j > p) throw Error("annular chamber index out of range");
    CombinatorialType r = t;
    const bool lower_is_boundary = j == 0 && !t.at_inner;
    const bool upper_is_boundary = j == p && !t.at_outer;
    if (lower_is_boundary) {
        r.at_inner = true;
    } else if (upper_is_boundary) {
        r.at_outer = true;
    } else {
        const int lower = t.at_inner ? j + 1 : j;
        for (int s = 0; s < t.slit_count(); ++s)
            if (r.level[s] > lower) --r.level[s];
        --r.levels;
    }
    return r;
}

inline int face_sign(const MultiDegree& d, int i, int j) {
    int e = j;
    for (int k = 0; k < i && k < static_cast<int>(d.radial.size()); ++k) e += d.radial[k];
    return e % 2 == 0 ? 1 : -1;
}

inline CombinatorialType unilevel_projection(const CombinatorialType& t) {
    CombinatorialType r = t;
    if (t.h == 0) return r;
    std::fill(r.level.begin(), r.level.end(), 1);
    r.levels = 1;
    r.at_inner = false;
    r.at_outer = true;
    return r;
}

inline bool is_unilevel(const CombinatorialType& t) {
    return t.h == 0 || (t.levels == 1 && t.at_outer && !t.at_inner);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

/// Calls fn for every ordered set partition of {0..k-1} into blocks,
/// given as block index per element (blocks numbered 0..b-1, all used).
inline void for_each_ordered_partition(int k, const std::function<void(const std::vector<int>&, int)>& fn) {
    std::vector<int> block(k, 0);
    std::function<void(int, int)> rec = [&](int idx, int used) {
        if (idx == k) {
            // every surjection onto {0..used-1} is produced via the bound
            std::vector<char> hit(used, 0);
            for (int b : block) hit[b] = 1;
            if (std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; })) fn(block, used);
            return;
        }
        for (int b = 0; b < k; ++b) {
            block[idx] = b;
            rec(idx + 1, std::max(used, b + 1));
        }
    };
    if (k == 0) {
        fn(block, 0);
        return;
    }
    rec(0, 0);
}

inline void for_each_matching(std::vector<int>& pairing, const std::function<void()>& fn) {
    const int n = static_cast<int>(pairing.size());
    int first = -1;
    for (int s = 0; s < n; ++s)
        if (pairing[s] < 0) {
            first = s;
            break;
        }
    if (first < 0) {
        fn();
        return;
    }
    for (int s = first + 1; s < n; ++s) {
        if (pairing[s] >= 0) continue;
        pairing[first] = s;
        pairing[s] = first;
        for_each_matching(pairing, fn);
        pairing[first] = pairing[s] = -1;
    }
}

/// Skeletons: annuli with stacks filled by points (>= 2h) and slit
/// placeholders numbered in order of appearance.
inline std::vector<std::vector<Annulus>> annulus_skeletons(int h, int n, int m) {
    const int total = 2 * h + m;
    std::vector<std::vector<Annulus>> out;
    // sequence of ξ kinds: choose positions of the m labeled points among
    // total slots, then split the sequence into n nonempty annulus blocks
    std::vector<int> seq(total, -1);
    std::function<void(int)> place = [&](int p) {
        if (p == m) {
            std::vector<int> labeled = seq;
            int next = 0;
            for (int& x : labeled)
                if (x < 0) x = next++;
            // split into n consecutive nonempty blocks
            std::vector<int> cuts;
            std::function<void(int, int)> split = [&](int start, int left) {
                if (left == 1) {
                    cuts.push_back(total);
                    std::vector<std::vector<int>> blocks;
                    int prev = 0;
                    for (int c : cuts) {
                        blocks.emplace_back(labeled.begin() + prev, labeled.begin() + c);
                        prev = c;
                    }
                    // per block: position breaks and zero flag
                    std::vector<Annulus> cur;
                    std::function<void(std::size_t)> shape = [&](std::size_t b) {
                        if (b == blocks.size()) {
                            out.push_back(cur);
                            return;
                        }
                        const auto& blk = blocks[b];
                        const int len = static_cast<int>(blk.size());
                        for (int mask = 0; mask < (1 << (len - 1)); ++mask)
                            for (int z = 0; z < 2; ++z) {
                                Annulus a;
                                a.first_at_zero = z == 1;
                                std::vector<int> stack{blk[0]};
                                for (int k = 1; k < len; ++k) {
                                    if (mask & (1 << (k - 1))) {
                                        a.positions.push_back(stack);
                                        stack.clear();
                                    }
                                    stack.push_back(blk[k]);
                                }
                                a.positions.push_back(stack);
                                cur.push_back(std::move(a));
                                shape(b + 1);
                                cur.pop_back();
                            }
                    };
                    shape(0);
                    cuts.pop_back();
                    return;
                }
                for (int c = start + 1; c <= total - (left - 1); ++c) {
                    cuts.push_back(c);
                    split(c, left - 1);
                    cuts.pop_back();
                }
            };
            split(0, n);
            return;
        }
        for (int k = 0; k < total; ++k) {
            if (seq[k] >= 0) continue;
            seq[k] = 2 * h + p;
            place(p + 1);
            seq[k] = -1;
        }
    };
    if (total < n) return out;
    place(0);
    return out;
}

inline bool passes(const CombinatorialType& t, TypeFilter f) {
    if (f == TypeFilter::unilevel) return is_unilevel(t);
    if (f == TypeFilter::nondegenerate) return !is_degenerate(t);
    return true;
}

}  // namespace detail

/// Canonical representatives of all connected valid types with the given
/// parameters and filter, sorted by encoding.
inline std::vector<CombinatorialType> enumerate_types(int h, int n, int m, TypeFilter filter, int workers = 1) {
    genus_for(h, n, m);
    const auto skeletons = detail::annulus_skeletons(h, n, m);
    auto per = parallel_map(
        skeletons,
        [&](const std::vector<Annulus>& sk) {
            std::map<std::vector<int>, CombinatorialType> found;
            CombinatorialType t;
            t.h = h;
            t.m = m;
            t.annuli = sk;
            std::vector<int> pairing(2 * h, -1);
            auto with_levels = [&]() {
                t.pairing = pairing;
                // pairs listed by smallest slit
                std::vector<int> reps;
                for (int s = 0; s < 2 * h; ++s)
                    if (s < pairing[s]) reps.push_back(s);
                detail::for_each_ordered_partition(h, [&](const std::vector<int>& block, int used) {
                    t.level.assign(2 * h, 0);
                    for (int k = 0; k < h; ++k) t.level[reps[k]] = t.level[pairing[reps[k]]] = block[k] + 1;
                    t.levels = used;
                    for (int flags = 0; flags < (h == 0 ? 1 : 4); ++flags) {
                        t.at_inner = flags & 1;
                        t.at_outer = flags & 2;
                        if (filter == TypeFilter::unilevel && !is_unilevel(t)) continue;
                        if (filter == TypeFilter::nondegenerate && (t.at_inner || t.at_outer)) continue;
                        if (!is_valid(t) || !is_connected(t)) continue;
                        auto c = canonicalize(t);
                        auto code = encode(c);
                        if (found.count(code)) continue;
                        if (!detail::passes(c, filter)) continue;
                        found.emplace(std::move(code), std::move(c));
                    }
                });
            };
            detail::for_each_matching(pairing, with_levels);
            return found;
        },
        workers);
    std::map<std::vector<int>, CombinatorialType> all;
    for (auto& f : per) all.insert(f.begin(), f.end());
    std::vector<CombinatorialType> out;
    for (auto& [code, t] : all) out.push_back(std::move(t));
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const CombinatorialType& t) {
    nlohmann::json annuli = nlohmann::json::array();
    for (const auto& a : t.annuli) annuli.push_back({{"first_at_zero", a.first_at_zero}, {"positions", a.positions}});
    return {{"h", t.h},           {"m", t.m},           {"annuli", annuli},
            {"pairing", t.pairing}, {"level", t.level},   {"levels", t.levels},
            {"at_inner", t.at_inner}, {"at_outer", t.at_outer}};
}

inline CombinatorialType type_from_json(const nlohmann::json& j) {
    CombinatorialType t;
    t.h = j.at("h").get<int>();
    t.m = j.at("m").get<int>();
    for (const auto& a : j.at("annuli"))
        t.annuli.push_back({a.at("first_at_zero").get<bool>(), a.at("positions").get<std::vector<std::vector<int>>>()});
    t.pairing = j.at("pairing").get<std::vector<int>>();
    t.level = j.at("level").get<std::vector<int>>();
    t.levels = j.at("levels").get<int>();
    t.at_inner = j.at("at_inner").get<bool>();
    t.at_outer = j.at("at_outer").get<bool>();
    return t;
}

/// One-line text form, e.g. "0|[0 1][4]|[2 3] pairs=1,0,3,2 levels=1,1,2,2/2".
inline std::string to_text(const CombinatorialType& t) {
    std::ostringstream os;
    for (int a = 0; a < t.n(); ++a) {
        if (a) os << " / ";
        os << (t.annuli[a].first_at_zero ? "0" : "~");
        for (const auto& s : t.annuli[a].positions) {
            os << "[";
            for (std::size_t k = 0; k < s.size(); ++k) os << (k ? " " : "") << s[k];
            os << "]";
        }
    }
    os << " pairs=";
    for (int s = 0; s < t.slit_count(); ++s) os << (s ? "," : "") << t.pairing[s];
    os << " levels=";
    for (int s = 0; s < t.slit_count(); ++s) os << (s ? "," : "") << t.level[s];
    os << "/" << t.levels << (t.at_inner ? " inner" : "") << (t.at_outer ? " outer" : "");
    return os.str();
}

}  // namespace modcell

#endif  // MODCELL_RADIAL_HPP
