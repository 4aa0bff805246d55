#ifndef MODCELL_VERIFY_HPP
#define MODCELL_VERIFY_HPP

// Exhaustive consistency suites over one family (h, n, m).

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modcell/critical.hpp"
#include "modcell/parallel.hpp"
#include "modcell/radial.hpp"
#include "modcell/sullivan.hpp"

namespace modcell {

struct CheckResult {
    std::string name;
    long checked = 0;
    long failed = 0;
    std::optional<std::string> counterexample;  // first failure

    bool pass() const { return failed == 0; }
};

inline nlohmann::json to_json(const CheckResult& r) {
    nlohmann::json j{{"check", r.name}, {"status", r.pass() ? "pass" : "fail"}, {"checked", r.checked},
                     {"failed", r.failed}};
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    return j;
}

namespace detail {

struct Tally {
    long checked = 0;
    long failed = 0;
    std::optional<std::string> first;

    void add(bool ok, const std::string& what) {
        ++checked;
        if (ok) return;
        ++failed;
        if (!first) first = what;
    }
    void merge(const Tally& o) {
        checked += o.checked;
        failed += o.failed;
        if (!first) first = o.first;
    }
};

inline CheckResult finish(std::string name, const std::vector<Tally>& parts) {
    Tally all;
    for (const auto& p : parts) all.merge(p);
    return {std::move(name), all.checked, all.failed, all.first};
}

}  // namespace detail

/// f and g are mutually inverse and commute with every face map.
inline std::vector<CheckResult> verify_bijection(int h, int n, int m, int workers = 1) {
    const int g = genus_for(h, n, m);
    const auto types = enumerate_types(h, n, m, TypeFilter::unilevel, workers);
    const auto diagrams = enumerate_diagrams(g, n, m, workers);
    std::set<std::vector<int>> known;
    for (const auto& d : diagrams) known.insert(encode(d));

    auto from_types = parallel_map(
        types,
        [&](const CombinatorialType& t) {
            std::array<detail::Tally, 3> r;
            try {
                const auto d = f_map(t);
                r[0].add(known.count(encode(d)) && g_map(d) == t, "g(f(t)) != t for " + to_text(t));
                const auto deg = multi_degree(t);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; deg.radial[i] > 0 && j <= deg.radial[i]; ++j)
                        r[1].add(f_map(canonicalize(face(t, i, j))) == sd_face(d, i, j),
                                 "f(face) != sd_face(f) for " + to_text(t) + " at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
            } catch (const std::exception& e) {
                r[0].add(false, to_text(t) + ": " + e.what());
            }
            return r;
        },
        workers);
    auto from_diagrams = parallel_map(
        diagrams,
        [&](const SullivanDiagram& d) {
            std::array<detail::Tally, 2> r;
            try {
                const auto t = g_map(d);
                r[0].add(f_map(t) == d, "f(g(d)) != d for " + to_text(d));
                const auto deg = multi_degree(t);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; deg.radial[i] > 0 && j <= deg.radial[i]; ++j)
                        r[1].add(g_map(sd_face(d, i, j)) == canonicalize(face(t, i, j)),
                                 "g(sd_face) != face(g) for " + to_text(d) + " at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
            } catch (const std::exception& e) {
                r[0].add(false, to_text(d) + ": " + e.what());
            }
            return r;
        },
        workers);

    std::vector<detail::Tally> gf, fg, f_faces, g_faces;
    for (auto& r : from_types) {
        gf.push_back(r[0]);
        f_faces.push_back(r[1]);
    }
    for (auto& r : from_diagrams) {
        fg.push_back(r[0]);
        g_faces.push_back(r[1]);
    }
    detail::Tally counts;
    counts.add(types.size() == diagrams.size(), std::to_string(types.size()) + " unilevel types but " +
                                                    std::to_string(diagrams.size()) + " diagrams");
    return {detail::finish("cell-counts", {counts}), detail::finish("g-after-f", gf),
            detail::finish("f-after-g", fg), detail::finish("f-faces", f_faces),
            detail::finish("g-faces", g_faces)};
}

/// Surface law, admissible cycle count and jump invariance of critical
/// graphs of nondegenerate types.
inline std::vector<CheckResult> verify_critical(int h, int n, int m, int workers = 1) {
    const int g = genus_for(h, n, m);
    const auto types = enumerate_types(h, n, m, TypeFilter::nondegenerate, workers);
    auto parts = parallel_map(
        types,
        [&](const CombinatorialType& t) {
            std::array<detail::Tally, 2> r;
            try {
                const auto cg = critical_graph(t);
                const auto st = surface_type(cg);
                r[0].add(st.genus == g && st.boundary_count == n + m &&
                             static_cast<int>(admissible_cycles(cg).size()) == n,
                         "surface law fails for " + to_text(t));
                const auto label = canonical_label(cg);
                bool same = true;
                for (const auto& u : jump_orbit(t)) same = same && canonical_label(critical_graph(u)) == label;
                r[1].add(same, "jump changes the critical graph of " + to_text(t));
            } catch (const std::exception& e) {
                r[0].add(false, to_text(t) + ": " + e.what());
            }
            return r;
        },
        workers);
    std::vector<detail::Tally> law, jump;
    for (auto& r : parts) {
        law.push_back(r[0]);
        jump.push_back(r[1]);
    }
    return {detail::finish("surface-law", law), detail::finish("jump-invariance", jump)};
}

/// Chamber collapse coherence: the annular collapse map and both legs of the
/// radial zigzag, over all nondegenerate faces of nondegenerate types.
inline std::vector<CheckResult> verify_zigzag(int h, int n, int m, int workers = 1) {
    const auto types = enumerate_types(h, n, m, TypeFilter::nondegenerate, workers);
    auto parts = parallel_map(
        types,
        [&](const CombinatorialType& t) {
            std::array<detail::Tally, 3> r;
            const auto deg = multi_degree(t);
            for (int i = 0; i <= t.n(); ++i) {
                const int q = i < t.n() ? deg.radial[i] : deg.annular;
                for (int j = 0; q > 0 && j <= q; ++j) {
                    const auto f = face(t, i, j);
                    if (is_degenerate(f)) continue;
                    const std::string where =
                        to_text(t) + " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
                    const auto target = canonical_label(critical_graph(f));
                    if (i == t.n()) {
                        try {
                            r[0].add(canonical_label(annular_collapse(t, j).collapsed) == target,
                                     "annular collapse misses the face graph for " + where);
                        } catch (const std::exception& e) {
                            r[0].add(false, where + ": " + e.what());
                        }
                        continue;
                    }
                    const auto z = radial_collapse_zigzag(t, i, j);
                    const auto middle = canonical_label(z.middle);
                    try {
                        r[1].add(canonical_label(collapse_forest(z.source, z.source_forest)) == middle,
                                 "source collapse misses the middle graph for " + where);
                    } catch (const std::exception& e) {
                        r[1].add(false, where + ": " + e.what());
                    }
                    try {
                        r[2].add(canonical_label(collapse_forest(z.target, z.target_forest)) == middle,
                                 "target collapse misses the middle graph for " + where);
                    } catch (const std::exception& e) {
                        r[2].add(false, where + ": " + e.what());
                    }
                }
            }
            return r;
        },
        workers);
    std::vector<detail::Tally> ann, src, tgt;
    for (auto& r : parts) {
        ann.push_back(r[0]);
        src.push_back(r[1]);
        tgt.push_back(r[2]);
    }
    return {detail::finish("annular-collapse", ann), detail::finish("zigzag-source", src),
            detail::finish("zigzag-target", tgt)};
}

}  // namespace modcell

#endif  // MODCELL_VERIFY_HPP
