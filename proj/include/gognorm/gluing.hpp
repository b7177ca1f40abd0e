#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chain_complex.hpp"
#include "errors.hpp"
#include "lp.hpp"
#include "seminorm.hpp"

// Assembling relative cycles over a decomposition: pieces carry their own
// boundary subcomplexes, identifications match boundary cells across (or
// within) pieces up to sign, and the inner boundary left over after summing
// the piece cycles is absorbed by a minimal chain on the glued interfaces.

namespace gognorm {

struct GluePiece {
    std::string name;
    PairComplex pair;
    QVec cycle;  // relative cycle in the working degree
};

struct GlueMatch {
    size_t piece_a = 0, piece_b = 0;
    int degree = 0;
    std::string elt_a, elt_b;
    Rational sign = 1;  // the b-side cell maps to sign times the a-side cell
};

struct GlueResult {
    PairComplex glued;  // subcomplex = the leftover outer boundary
    int degree = 0;
    QVec total;         // the summed piece cycles in glued coordinates
    QVec correction;    // interface chain c' absorbing the inner boundary
    QVec glued_cycle;   // total - correction, a relative cycle
    Rational correction_l1 = 0;
    std::vector<std::vector<int>> interface_classes;  // glued indices per degree
    std::vector<LPProblem> problems;
    std::vector<LPResult> certificates;
};

namespace detail {

// union-find over basis cells with a sign relative to the parent
struct SignedUF {
    std::vector<int> parent;
    std::vector<Rational> sign;  // relative to parent

    explicit SignedUF(size_t n) : parent(n), sign(n, Rational(1)) {
        for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }

    std::pair<int, Rational> find(int x) {
        if (parent[static_cast<size_t>(x)] == x) return {x, Rational(1)};
        auto [root, s] = find(parent[static_cast<size_t>(x)]);
        parent[static_cast<size_t>(x)] = root;
        sign[static_cast<size_t>(x)] *= s;
        return {root, sign[static_cast<size_t>(x)]};
    }

    // declare phi(b) = rel * phi(a); false on an inconsistent orientation
    bool merge(int a, int b, const Rational& rel) {
        auto [ra, sa] = find(a);
        auto [rb, sb] = find(b);
        if (ra == rb) return sb == rel * sa;
        parent[static_cast<size_t>(rb)] = ra;
        sign[static_cast<size_t>(rb)] = rel * sa / sb;
        return true;
    }
};

}  // namespace detail

inline GlueResult glue_assemble(const std::vector<GluePiece>& pieces,
                                const std::vector<GlueMatch>& matches, int degree) {
    if (pieces.empty()) throw Error("nothing to glue");
    std::set<std::string> piece_names;
    int top = 0;
    for (const auto& gp : pieces) {
        if (!piece_names.insert(gp.name).second)
            throw Error("duplicate piece name '" + gp.name + "'");
        gp.pair.validate();
        top = std::max(top, gp.pair.X.top());
        if (gp.cycle.size() != gp.pair.X.dim(degree))
            throw MalformedProblemError("piece cycle has the wrong dimension");
        if (!sub_supported(gp.pair, degree - 1, boundary(gp.pair.X, degree, gp.cycle)))
            throw NotACycleError("piece cycle is not relative to the piece boundary");
    }

    // flat ids across (piece, degree, index)
    std::vector<std::vector<size_t>> offset(pieces.size(),
                                            std::vector<size_t>(static_cast<size_t>(top) + 1, 0));
    size_t total_cells = 0;
    for (size_t p = 0; p < pieces.size(); ++p)
        for (int n = 0; n <= top; ++n) {
            offset[p][static_cast<size_t>(n)] = total_cells;
            total_cells += pieces[p].pair.X.dim(n);
        }
    auto flat = [&](size_t p, int n, int i) {
        return static_cast<int>(offset[p][static_cast<size_t>(n)] + static_cast<size_t>(i));
    };

    detail::SignedUF uf(total_cells);
    std::vector<bool> matched(total_cells, false);
    for (const auto& m : matches) {
        if (m.piece_a >= pieces.size() || m.piece_b >= pieces.size())
            throw Error("gluing references a missing piece");
        if (m.sign != 1 && m.sign != -1) throw Error("gluing signs must be +1 or -1");
        const auto& A = pieces[m.piece_a].pair;
        const auto& B = pieces[m.piece_b].pair;
        int ia = A.X.index_of(m.degree, m.elt_a);
        int ib = B.X.index_of(m.degree, m.elt_b);
        if (ia < 0 || ib < 0)
            throw Error("gluing references a missing cell '" + m.elt_a + "'/'" + m.elt_b + "'");
        if (m.piece_a == m.piece_b && ia == ib)
            throw InterfaceMismatchError("a cell cannot be glued to itself");
        if (!A.sub_mask(m.degree)[static_cast<size_t>(ia)] ||
            !B.sub_mask(m.degree)[static_cast<size_t>(ib)])
            throw InterfaceMismatchError("interface cells must lie on piece boundaries");
        if (A.X.weights[static_cast<size_t>(m.degree)][static_cast<size_t>(ia)] !=
            B.X.weights[static_cast<size_t>(m.degree)][static_cast<size_t>(ib)])
            throw InterfaceMismatchError("identified cells carry different weights");
        int fa = flat(m.piece_a, m.degree, ia);
        int fb = flat(m.piece_b, m.degree, ib);
        matched[static_cast<size_t>(fa)] = matched[static_cast<size_t>(fb)] = true;
        if (!uf.merge(fa, fb, m.sign))
            throw InterfaceMismatchError("inconsistent orientations around an interface cell");
    }

    // glued basis: classes in piece-major order; the first member met is the
    // leader and fixes the orientation of the glued cell
    GlueResult out;
    out.degree = degree;
    FiniteChainComplex& G = out.glued.X;
    G.names.resize(static_cast<size_t>(top) + 1);
    G.weights.resize(static_cast<size_t>(top) + 1);
    G.d.resize(static_cast<size_t>(top) + 1);
    std::map<int, int> class_index;                          // root -> glued index (per degree)
    std::vector<int> glued_of(total_cells, -1);
    std::vector<Rational> sign_of(total_cells, Rational(1));  // phi(cell) = sign * glued
    std::vector<std::vector<bool>> class_matched(static_cast<size_t>(top) + 1);
    std::vector<std::vector<std::vector<std::pair<size_t, int>>>> members(
        static_cast<size_t>(top) + 1);  // per degree, per glued index: (piece, cell)
    for (int n = 0; n <= top; ++n) {
        class_index.clear();
        for (size_t p = 0; p < pieces.size(); ++p) {
            const auto& X = pieces[p].pair.X;
            for (int i = 0; i < static_cast<int>(X.dim(n)); ++i) {
                int fi = flat(p, n, i);
                auto [root, s] = uf.find(fi);
                auto [it, inserted] = class_index.try_emplace(
                    root, static_cast<int>(G.names[static_cast<size_t>(n)].size()));
                if (inserted) {
                    G.names[static_cast<size_t>(n)].push_back(
                        pieces[p].name + "." + X.names[static_cast<size_t>(n)][static_cast<size_t>(i)]);
                    G.weights[static_cast<size_t>(n)].push_back(
                        X.weights[static_cast<size_t>(n)][static_cast<size_t>(i)]);
                    class_matched[static_cast<size_t>(n)].push_back(false);
                    members[static_cast<size_t>(n)].push_back({});
                }
                glued_of[static_cast<size_t>(fi)] = it->second;
                members[static_cast<size_t>(n)][static_cast<size_t>(it->second)].push_back(
                    {p, i});
                if (matched[static_cast<size_t>(fi)])
                    class_matched[static_cast<size_t>(n)][static_cast<size_t>(it->second)] = true;
            }
        }
    }
    // orientation of each member against its class leader
    for (int n = 0; n <= top; ++n)
        for (size_t gi = 0; gi < members[static_cast<size_t>(n)].size(); ++gi) {
            auto& mem = members[static_cast<size_t>(n)][gi];
            auto [lp, li] = mem.front();
            auto [lr, ls] = uf.find(flat(lp, n, li));
            for (auto [p, i] : mem) {
                auto [r, s] = uf.find(flat(p, n, i));
                sign_of[static_cast<size_t>(flat(p, n, i))] = s / ls;
            }
        }

    // push a piece chain into glued coordinates
    auto push = [&](size_t p, int n, const QVec& c) {
        QVec g(G.dim(n), Rational(0));
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0) {
                int fi = flat(p, n, static_cast<int>(i));
                g[static_cast<size_t>(glued_of[static_cast<size_t>(fi)])] +=
                    sign_of[static_cast<size_t>(fi)] * c[i];
            }
        return g;
    };

    // the glued boundary of a class is the pushed boundary of its leader; the
    // identification is a chain map exactly when every member agrees
    for (int n = 1; n <= top; ++n) {
        QMat M(G.dim(n - 1), QVec(G.dim(n), Rational(0)));
        for (size_t gi = 0; gi < members[static_cast<size_t>(n)].size(); ++gi) {
            const auto& mem = members[static_cast<size_t>(n)][gi];
            QVec leader_col;
            for (size_t k = 0; k < mem.size(); ++k) {
                auto [p, i] = mem[k];
                const auto& X = pieces[p].pair.X;
                QVec e = zero_chain(X, n);
                e[static_cast<size_t>(i)] = 1;
                QVec col = push(p, n - 1, boundary(X, n, e));
                Rational s = sign_of[static_cast<size_t>(flat(p, n, i))];
                for (Rational& x : col) x /= s;
                if (k == 0)
                    leader_col = col;
                else if (col != leader_col)
                    throw InterfaceMismatchError(
                        "identification is not a chain map at '" +
                        G.names[static_cast<size_t>(n)][gi] + "'");
            }
            for (size_t rr = 0; rr < leader_col.size(); ++rr) M[rr][gi] = leader_col[rr];
        }
        G.d[static_cast<size_t>(n)] = std::move(M);
    }
    G.validate();

    // interface = downward closure of the matched classes; outer boundary =
    // piece-boundary classes that stay clear of it
    out.interface_classes.assign(static_cast<size_t>(top) + 1, {});
    std::vector<std::set<int>> iface(static_cast<size_t>(top) + 1);
    for (int n = top; n >= 0; --n) {
        for (size_t gi = 0; gi < G.dim(n); ++gi)
            if (class_matched[static_cast<size_t>(n)][gi]) iface[static_cast<size_t>(n)].insert(static_cast<int>(gi));
        for (int gi : iface[static_cast<size_t>(n)])
            if (n >= 1)
                for (size_t rr = 0; rr < G.dim(n - 1); ++rr)
                    if (G.d[static_cast<size_t>(n)][rr][static_cast<size_t>(gi)] != 0) {
                        // faces of interface cells are interface cells
                        class_matched[static_cast<size_t>(n) - 1][rr] = true;
                    }
    }
    for (int n = 0; n <= top; ++n)
        for (size_t gi = 0; gi < G.dim(n); ++gi)
            if (class_matched[static_cast<size_t>(n)][gi])
                out.interface_classes[static_cast<size_t>(n)].push_back(static_cast<int>(gi));

    // the outer boundary: piece-boundary classes clear of the interface,
    // closed downward (outer cells may well share faces with the interface,
    // as when two triangles share the endpoints of their common edge)
    std::vector<std::vector<bool>> ext(static_cast<size_t>(top) + 1);
    for (int n = 0; n <= top; ++n) {
        ext[static_cast<size_t>(n)].assign(G.dim(n), false);
        for (size_t gi = 0; gi < G.dim(n); ++gi) {
            bool on_piece_boundary = false;
            for (auto [p, i] : members[static_cast<size_t>(n)][gi])
                if (pieces[p].pair.sub_mask(n)[static_cast<size_t>(i)]) on_piece_boundary = true;
            if (on_piece_boundary && !class_matched[static_cast<size_t>(n)][gi])
                ext[static_cast<size_t>(n)][gi] = true;
        }
    }
    for (int n = top; n >= 1; --n)
        for (size_t gi = 0; gi < G.dim(n); ++gi)
            if (ext[static_cast<size_t>(n)][gi])
                for (size_t rr = 0; rr < G.dim(n - 1); ++rr)
                    if (G.d[static_cast<size_t>(n)][rr][gi] != 0)
                        ext[static_cast<size_t>(n) - 1][rr] = true;
    out.glued.sub.assign(static_cast<size_t>(top) + 1, {});
    for (int n = 0; n <= top; ++n)
        for (size_t gi = 0; gi < G.dim(n); ++gi)
            if (ext[static_cast<size_t>(n)][gi])
                out.glued.sub[static_cast<size_t>(n)].push_back(static_cast<int>(gi));
    out.glued.validate();

    out.total = zero_chain(G, degree);
    for (size_t p = 0; p < pieces.size(); ++p) {
        QVec g = push(p, degree, pieces[p].cycle);
        for (size_t i = 0; i < g.size(); ++i) out.total[i] += g[i];
    }

    // absorb the inner boundary with a least-norm chain on the interfaces
    const auto& vars = out.interface_classes[static_cast<size_t>(degree)];
    LPBuilder bld;
    std::vector<int> cp, cm;
    for (int gi : vars) {
        Rational w = G.weights[static_cast<size_t>(degree)][static_cast<size_t>(gi)];
        cp.push_back(bld.add_var("c+" + G.names[static_cast<size_t>(degree)][static_cast<size_t>(gi)], w));
        cm.push_back(bld.add_var("c-" + G.names[static_cast<size_t>(degree)][static_cast<size_t>(gi)], w));
    }
    QVec dtotal = boundary(G, degree, out.total);
    std::vector<bool> ext = out.glued.sub_mask(degree - 1);
    for (size_t rr = 0; rr < G.dim(degree - 1); ++rr) {
        if (ext[rr]) continue;
        std::vector<std::pair<int, Rational>> row;
        for (size_t k = 0; k < vars.size(); ++k) {
            const Rational& co =
                G.d[static_cast<size_t>(degree)][rr][static_cast<size_t>(vars[k])];
            if (co != 0) {
                row.emplace_back(cp[k], co);
                row.emplace_back(cm[k], -co);
            }
        }
        bld.add_row(std::move(row), dtotal[rr]);
    }
    LPProblem prob = bld.build();
    LPResult res = lp_solve(prob);
    std::string err = lp_verify(prob, res);
    if (!err.empty()) throw Error(std::string("gluing: certificate failed: ") + err);
    if (res.status == LPStatus::Infeasible)
        throw UnfillableError("the interface chains cannot absorb the inner boundary");
    if (res.status != LPStatus::Optimal) throw Error("gluing: expected a bounded program");

    out.correction = zero_chain(G, degree);
    for (size_t k = 0; k < vars.size(); ++k)
        out.correction[static_cast<size_t>(vars[k])] =
            res.x[static_cast<size_t>(cp[k])] - res.x[static_cast<size_t>(cm[k])];
    out.correction_l1 = l1(G, degree, out.correction);
    out.glued_cycle = out.total;
    for (size_t i = 0; i < out.glued_cycle.size(); ++i) out.glued_cycle[i] -= out.correction[i];
    if (!sub_supported(out.glued, degree - 1, boundary(G, degree, out.glued_cycle)))
        throw Error("gluing: the corrected cycle is not relative to the outer boundary");
    out.problems.push_back(std::move(prob));
    out.certificates.push_back(std::move(res));
    return out;
}

// ---------------------------------------------------------------------------
// JSON form:
//   {"degree": 2,
//    "pieces": [{"name": "A", "pair": {...}, "cycle": {"cell": "p/q", ...}}],
//    "matches": [{"a": "A", "b": "B", "degree": 1,
//                 "elt_a": "x", "elt_b": "y", "sign": "-1"}]}

inline std::pair<std::vector<GluePiece>, std::vector<GlueMatch>> glue_from_json(
    const nlohmann::ordered_json& j, int& degree) {
    try {
        degree = j.at("degree").get<int>();
        std::vector<GluePiece> pieces;
        std::map<std::string, size_t> by_name;
        for (const auto& pj : j.at("pieces")) {
            GluePiece gp;
            gp.name = pj.at("name").get<std::string>();
            gp.pair = pair_from_json(pj.at("pair"));
            gp.cycle = chain_from_json(gp.pair.X, degree, pj.at("cycle"));
            by_name[gp.name] = pieces.size();
            pieces.push_back(std::move(gp));
        }
        std::vector<GlueMatch> matches;
        if (j.contains("matches"))
            for (const auto& mj : j.at("matches")) {
                GlueMatch m;
                auto a = mj.at("a").get<std::string>();
                auto b = mj.at("b").get<std::string>();
                if (!by_name.count(a) || !by_name.count(b))
                    throw Error("gluing references a missing piece");
                m.piece_a = by_name[a];
                m.piece_b = by_name[b];
                m.degree = mj.at("degree").get<int>();
                m.elt_a = mj.at("elt_a").get<std::string>();
                m.elt_b = mj.at("elt_b").get<std::string>();
                if (mj.contains("sign")) m.sign = parse_rational(mj.at("sign").get<std::string>());
                matches.push_back(std::move(m));
            }
        return {std::move(pieces), std::move(matches)};
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed gluing description: ") + e.what());
    }
}

}  // namespace gognorm
