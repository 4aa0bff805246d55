#ifndef MODCELL_HOMOLOGY_HPP
#define MODCELL_HOMOLOGY_HPP

// Integer cellular chain complexes of the unilevel and Sullivan cell
// models, and their homology via Smith normal form.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "modcell/error.hpp"
#include "modcell/parallel.hpp"
#include "modcell/radial.hpp"
#include "modcell/sullivan.hpp"

namespace modcell {

using Integer = boost::multiprecision::cpp_int;
using Matrix = std::vector<std::vector<Integer>>;

/// Integer matrix in coordinate form; entries are nonzero and sorted.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::tuple<int, int, long long>> entries;

    Matrix dense() const {
        Matrix m(rows, std::vector<Integer>(cols, 0));
        for (auto [r, c, v] : entries) m[r][c] = v;
        return m;
    }
};

struct ChainComplex {
    std::vector<std::vector<std::string>> cells;  // per degree
    std::vector<SparseMatrix> boundary;           // boundary[k]: degree k -> degree k-1

    int top_degree() const { return static_cast<int>(cells.size()) - 1; }
};

/// A cell with the signed list of its codimension-one faces.
struct CellData {
    std::string id;
    int degree = 0;
    std::vector<std::pair<std::string, int>> faces;
};

/// Assembles the complex; coincident faces add up. Throws when a face is
/// not among the cells.
inline ChainComplex build_complex(const std::vector<CellData>& cells) {
    ChainComplex c;
    int top = -1;
    for (const auto& x : cells) top = std::max(top, x.degree);
    c.cells.resize(top + 1);
    std::map<std::string, std::pair<int, int>> where;
    std::vector<const CellData*> sorted;
    for (const auto& x : cells) sorted.push_back(&x);
    std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return std::pair(a->degree, a->id) < std::pair(b->degree, b->id); });
    for (const auto* x : sorted) {
        if (x->degree < 0) throw Error("negative degree for cell " + x->id);
        auto& list = c.cells[x->degree];
        if (!where.emplace(x->id, std::pair(x->degree, static_cast<int>(list.size()))).second)
            throw Error("duplicate cell " + x->id);
        list.push_back(x->id);
    }
    std::set<std::string> missing;
    for (const auto& x : cells)
        for (const auto& [f, s] : x.faces) {
            const auto it = where.find(f);
            if (it == where.end() || it->second.first != x.degree - 1) missing.insert(f);
        }
    if (!missing.empty()) {
        std::string msg = "cell family is not closed under faces; missing:";
        for (const auto& f : missing) msg += " " + f;
        throw Error(msg);
    }
    c.boundary.resize(top + 1);
    for (int k = 0; k <= top; ++k) {
        c.boundary[k].rows = k > 0 ? static_cast<int>(c.cells[k - 1].size()) : 0;
        c.boundary[k].cols = static_cast<int>(c.cells[k].size());
    }
    std::vector<std::map<std::pair<int, int>, long long>> acc(top + 1);
    for (const auto& x : cells) {
        const int col = where[x.id].second;
        for (const auto& [f, s] : x.faces) acc[x.degree][{where[f].second, col}] += s;
    }
    for (int k = 0; k <= top; ++k)
        for (const auto& [rc, v] : acc[k])
            if (v != 0) c.boundary[k].entries.emplace_back(rc.first, rc.second, v);
    return c;
}

/// Cells of the unilevel model: all unilevel types, faces along the radial
/// axes only.
inline std::vector<CellData> unilevel_cells(int h, int n, int m, int workers = 1) {
    const auto types = enumerate_types(h, n, m, TypeFilter::unilevel, workers);
    return parallel_map(
        types,
        [](const CombinatorialType& t) {
            CellData c{to_text(t), multi_degree(t).radial_dimension(), {}};
            const auto d = multi_degree(t);
            for (int i = 0; i < t.n(); ++i)
                for (int j = 0; d.radial[i] > 0 && j <= d.radial[i]; ++j)
                    c.faces.emplace_back(to_text(canonicalize(face(t, i, j))), face_sign(d, i, j));
            return c;
        },
        workers);
}

/// Cells of the Sullivan diagram model.
inline std::vector<CellData> sd_cells(int g, int n, int m, int workers = 1) {
    const auto ds = enumerate_diagrams(g, n, m, workers);
    return parallel_map(
        ds,
        [](const SullivanDiagram& x) {
            const auto deg = multi_degree(detail::as_type(x));
            CellData c{to_text(x), deg.radial_dimension(), {}};
            for (int i = 0; i < x.n(); ++i)
                for (int j = 0; deg.radial[i] > 0 && j <= deg.radial[i]; ++j)
                    c.faces.emplace_back(to_text(sd_face(x, i, j)), face_sign(deg, i, j));
            return c;
        },
        workers);
}

// ---------------------------------------------------------------------------
// Boundary check

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t inner = b.size();
    const std::size_t cols = inner ? b[0].size() : 0;
    Matrix out(a.size(), std::vector<Integer>(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

/// True iff every composite of consecutive boundary maps vanishes.
inline bool boundary_check(const ChainComplex& c) {
    for (int k = 1; k + 1 < static_cast<int>(c.boundary.size()); ++k) {
        const auto& lo = c.boundary[k];
        const auto& hi = c.boundary[k + 1];
        std::vector<std::map<int, long long>> lo_cols(lo.cols);
        for (auto [r, col, v] : lo.entries) lo_cols[col][r] += v;
        std::vector<std::map<int, Integer>> out(hi.cols);
        for (auto [r, col, v] : hi.entries)
            for (auto [r2, v2] : lo_cols[r]) out[col][r2] += Integer(v) * v2;
        for (const auto& col : out)
            for (const auto& [r, v] : col)
                if (v != 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithForm {
    Matrix diagonal_matrix;              // D
    Matrix row_ops;                      // U, unimodular
    Matrix col_ops;                      // V, unimodular
    std::vector<Integer> invariants;     // nonzero diagonal entries, each dividing the next
};

namespace detail {

inline Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

/// Reduces a in place to Smith form; u and v (when given) accumulate the
/// row and column operations so that u * a_in * v = a_out.
inline std::vector<Integer> smith_in_place(Matrix& a, Matrix* u, Matrix* v) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        if (u) std::swap((*u)[i], (*u)[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& r : a) std::swap(r[i], r[j]);
        if (v)
            for (auto& r : *v) std::swap(r[i], r[j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {  // row dst += f * row src
        for (std::size_t c = 0; c < cols; ++c) a[dst][c] += f * a[src][c];
        if (u)
            for (std::size_t c = 0; c < rows; ++c) (*u)[dst][c] += f * (*u)[src][c];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t r = 0; r < rows; ++r) a[r][dst] += f * a[r][src];
        if (v)
            for (std::size_t r = 0; r < cols; ++r) (*v)[r][dst] += f * (*v)[r][src];
    };
    auto negate_row = [&](std::size_t i) {
        for (auto& x : a[i]) x = -x;
        if (u)
            for (auto& x : (*u)[i]) x = -x;
    };
    // (x, y) -> (s x + c y, -(y/g) x + (x/g) y) with g = s x + c y = gcd(x, y)
    auto bezout = [](const Integer& x, const Integer& y, Integer& s, Integer& c, Integer& g) {
        Integer r0 = x, r1 = y, s0 = 1, s1 = 0, c0 = 0, c1 = 1;
        while (r1 != 0) {
            const Integer q = r0 / r1;
            Integer next = r0 - q * r1;
            r0 = std::exchange(r1, next);
            next = s0 - q * s1;
            s0 = std::exchange(s1, next);
            next = c0 - q * c1;
            c0 = std::exchange(c1, next);
        }
        s = s0;
        c = c0;
        g = r0;
    };
    auto combine = [](std::vector<Integer>& p, std::vector<Integer>& q, const Integer& s, const Integer& c,
                      const Integer& x, const Integer& y) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            const Integer np = s * p[k] + c * q[k];
            q[k] = x * q[k] - y * p[k];
            p[k] = np;
        }
    };
    auto mix_rows = [&](std::size_t t, std::size_t r) {
        Integer s, c, g;
        bezout(a[t][t], a[r][t], s, c, g);
        const Integer x = a[t][t] / g, y = a[r][t] / g;
        combine(a[t], a[r], s, c, x, y);
        if (u) combine((*u)[t], (*u)[r], s, c, x, y);
    };
    auto column = [](Matrix& mat, std::size_t j) {
        std::vector<Integer> out;
        for (const auto& row : mat) out.push_back(row[j]);
        return out;
    };
    auto store = [](Matrix& mat, std::size_t j, const std::vector<Integer>& col) {
        for (std::size_t r = 0; r < mat.size(); ++r) mat[r][j] = col[r];
    };
    auto mix_cols = [&](std::size_t t, std::size_t c) {
        Integer s, k, g;
        bezout(a[t][t], a[t][c], s, k, g);
        const Integer x = a[t][t] / g, y = a[t][c] / g;
        auto p = column(a, t), q = column(a, c);
        combine(p, q, s, k, x, y);
        store(a, t, p);
        store(a, c, q);
        if (v) {
            auto vp = column(*v, t), vq = column(*v, c);
            combine(vp, vq, s, k, x, y);
            store(*v, t, vp);
            store(*v, c, vq);
        }
    };

    std::vector<Integer> inv;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        // least nonzero entry of the remaining block
        bool found = false;
        std::size_t pr = t, pc = t;
        Integer best;
        for (std::size_t r = t; r < rows; ++r)
            for (std::size_t c = t; c < cols; ++c)
                if (a[r][c] != 0 && (!found || abs(a[r][c]) < best)) {
                    found = true;
                    best = abs(a[r][c]);
                    pr = r;
                    pc = c;
                }
        if (!found) break;
        swap_rows(t, pr);
        swap_cols(t, pc);
        for (;;) {
            for (std::size_t r = t + 1; r < rows; ++r) {
                if (a[r][t] == 0) continue;
                if (a[r][t] % a[t][t] == 0)
                    add_row(r, t, -(a[r][t] / a[t][t]));
                else
                    mix_rows(t, r);
            }
            bool clean = true;
            for (std::size_t c = t + 1; c < cols; ++c) {
                if (a[t][c] == 0) continue;
                if (a[t][c] % a[t][t] == 0) {
                    add_col(c, t, -(a[t][c] / a[t][t]));
                } else {
                    mix_cols(t, c);
                    clean = false;
                }
            }
            if (!clean) continue;
            // the pivot must divide the rest of the block
            bool divides = true;
            for (std::size_t r = t + 1; r < rows && divides; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (a[r][c] % a[t][t] != 0) {
                        add_row(t, r, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (a[t][t] < 0) negate_row(t);
        inv.push_back(a[t][t]);
    }
    return inv;
}

}  // namespace detail

/// U * M * V = D with D diagonal, d1 | d2 | ..., U and V unimodular.
inline SmithForm smith_normal_form(const Matrix& m) {
    SmithForm s;
    s.diagonal_matrix = m;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    s.row_ops = detail::identity(rows);
    s.col_ops = detail::identity(cols);
    s.invariants = detail::smith_in_place(s.diagonal_matrix, &s.row_ops, &s.col_ops);
    return s;
}

/// Nonzero invariant factors of a sparse matrix. Unit pivots are
/// eliminated first, choosing the pivot of least fill-in; the remainder is
/// reduced densely.
inline std::vector<Integer> invariant_factors(const SparseMatrix& sm) {
    std::vector<std::map<int, Integer>> rows(sm.rows);
    std::vector<std::set<int>> col_rows(sm.cols);
    for (auto [r, c, v] : sm.entries) {
        rows[r][c] = v;
        col_rows[c].insert(r);
    }
    std::vector<char> row_alive(sm.rows, 1), col_alive(sm.cols, 1);
    std::size_t units = 0;
    for (;;) {
        long best_cost = -1;
        int pr = -1, pc = -1;
        for (int r = 0; r < sm.rows; ++r) {
            if (!row_alive[r]) continue;
            for (const auto& [c, v] : rows[r]) {
                if (v != 1 && v != -1) continue;
                const long cost = static_cast<long>(rows[r].size() - 1) * static_cast<long>(col_rows[c].size() - 1);
                if (best_cost < 0 || cost < best_cost) {
                    best_cost = cost;
                    pr = r;
                    pc = c;
                }
            }
            if (best_cost == 0) break;
        }
        if (pr < 0) break;
        ++units;
        const Integer pv = rows[pr][pc];
        const auto pivot_row = rows[pr];
        const std::vector<int> others(col_rows[pc].begin(), col_rows[pc].end());
        for (int r : others) {
            if (r == pr) continue;
            const Integer f = rows[r][pc] * pv;  // pv is its own inverse
            for (const auto& [c, v] : pivot_row) {
                Integer& x = rows[r][c];
                x -= f * v;
                if (x == 0) {
                    rows[r].erase(c);
                    col_rows[c].erase(r);
                } else {
                    col_rows[c].insert(r);
                }
            }
        }
        for (const auto& [c, v] : pivot_row) col_rows[c].erase(pr);
        rows[pr].clear();
        row_alive[pr] = 0;
        col_alive[pc] = 0;
    }
    std::vector<int> rest_rows, rest_cols;
    for (int r = 0; r < sm.rows; ++r)
        if (row_alive[r] && !rows[r].empty()) rest_rows.push_back(r);
    std::map<int, int> col_index;
    for (int c = 0; c < sm.cols; ++c)
        if (col_alive[c] && !col_rows[c].empty()) {
            col_index[c] = static_cast<int>(rest_cols.size());
            rest_cols.push_back(c);
        }
    Matrix rest(rest_rows.size(), std::vector<Integer>(rest_cols.size(), 0));
    for (std::size_t i = 0; i < rest_rows.size(); ++i)
        for (const auto& [c, v] : rows[rest_rows[i]]) rest[i][col_index[c]] = v;
    std::vector<Integer> out(units, Integer(1));
    const auto tail = detail::smith_in_place(rest, nullptr, nullptr);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

struct HomologyGroup {
    int degree = 0;
    int betti = 0;
    std::vector<Integer> torsion;  // invariant factors greater than one
};

inline std::vector<HomologyGroup> homology(const ChainComplex& c) {
    if (!boundary_check(c)) throw Error("boundary maps do not compose to zero");
    const int top = c.top_degree();
    std::vector<std::vector<Integer>> inv(top + 2);
    for (int k = 1; k <= top; ++k) inv[k] = invariant_factors(c.boundary[k]);
    std::vector<HomologyGroup> out;
    for (int k = 0; k <= top; ++k) {
        HomologyGroup hg;
        hg.degree = k;
        const int rank_out = static_cast<int>(inv[k].size());
        const int rank_in = static_cast<int>(inv[k + 1].size());
        hg.betti = static_cast<int>(c.cells[k].size()) - rank_out - rank_in;
        for (const auto& d : inv[k + 1])
            if (d > 1) hg.torsion.push_back(d);
        out.push_back(std::move(hg));
    }
    return out;
}

inline long euler_characteristic(const ChainComplex& c) {
    long chi = 0;
    for (int k = 0; k <= c.top_degree(); ++k) chi += (k % 2 ? -1 : 1) * static_cast<long>(c.cells[k].size());
    return chi;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const ChainComplex& c) {
    nlohmann::json boundary = nlohmann::json::array();
    for (int k = 1; k <= c.top_degree(); ++k) {
        nlohmann::json entries = nlohmann::json::array();
        for (auto [r, col, v] : c.boundary[k].entries) entries.push_back({r, col, v});
        boundary.push_back({{"degree", k},
                            {"rows", c.boundary[k].rows},
                            {"cols", c.boundary[k].cols},
                            {"entries", entries}});
    }
    return {{"cells", c.cells}, {"boundary", boundary}};
}

inline std::string group_text(const HomologyGroup& g) {
    std::string s;
    if (g.betti > 0) s = g.betti == 1 ? "Z" : "Z^" + std::to_string(g.betti);
    for (const auto& t : g.torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + t.str();
    return s.empty() ? "0" : s;
}

inline nlohmann::json to_json(const HomologyGroup& g) {
    std::vector<std::string> torsion;
    for (const auto& t : g.torsion) torsion.push_back(t.str());
    return {{"degree", g.degree}, {"betti", g.betti}, {"torsion", torsion}, {"group", group_text(g)}};
}

}  // namespace modcell

#endif  // MODCELL_HOMOLOGY_HPP
