#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "faults.hpp"
#include "lp.hpp"
#include "rational.hpp"

// Finite chain complexes over Q with weighted l^1 norms, subcomplex pairs,
// and the mapping cone of an inclusion.  Everything is exact; chains are
// dense coordinate vectors over named bases.

namespace gognorm {

struct FiniteChainComplex {
    // parallel per-degree data; d[n] maps degree n to degree n-1 and is an
    // empty matrix for n = 0
    std::vector<std::vector<std::string>> names;
    std::vector<QVec> weights;
    std::vector<QMat> d;

    int top() const { return static_cast<int>(names.size()) - 1; }

    size_t dim(int n) const {
        if (n < 0 || n > top()) return 0;
        return names[static_cast<size_t>(n)].size();
    }

    int index_of(int n, const std::string& name) const {
        if (n < 0 || n > top()) return -1;
        const auto& ns = names[static_cast<size_t>(n)];
        auto it = std::find(ns.begin(), ns.end(), name);
        return it == ns.end() ? -1 : static_cast<int>(it - ns.begin());
    }

    void validate() const {
        if (names.size() != weights.size() || names.size() != d.size())
            throw MalformedProblemError("per-degree arrays have different lengths");
        for (size_t n = 0; n < names.size(); ++n) {
            std::set<std::string> seen;
            for (const auto& nm : names[n]) {
                if (nm.empty()) throw MalformedProblemError("empty basis name");
                if (!seen.insert(nm).second)
                    throw MalformedProblemError("duplicate basis name '" + nm + "'");
            }
            if (weights[n].size() != names[n].size())
                throw MalformedProblemError("weight count disagrees with basis count");
            for (const Rational& w : weights[n])
                if (w <= 0) throw MalformedProblemError("weights must be positive");
        }
        for (size_t n = 1; n < d.size(); ++n) {
            if (d[n].size() != dim(static_cast<int>(n) - 1))
                throw MalformedProblemError("boundary matrix row count is off");
            for (const QVec& row : d[n])
                if (row.size() != dim(static_cast<int>(n)))
                    throw MalformedProblemError("boundary matrix column count is off");
        }
        // the composite of consecutive boundaries must vanish
        for (size_t n = 2; n < d.size(); ++n) {
            for (size_t i = 0; i < dim(static_cast<int>(n) - 2); ++i)
                for (size_t k = 0; k < dim(static_cast<int>(n)); ++k) {
                    Rational s = 0;
                    for (size_t j = 0; j < dim(static_cast<int>(n) - 1); ++j)
                        s += d[n - 1][i][j] * d[n][j][k];
                    if (s != 0)
                        throw MalformedProblemError(
                            "boundary squared is nonzero in degree " + std::to_string(n));
                }
        }
    }
};

inline QVec zero_chain(const FiniteChainComplex& X, int n) {
    return QVec(X.dim(n), Rational(0));
}

inline QVec boundary(const FiniteChainComplex& X, int n, const QVec& c) {
    if (c.size() != X.dim(n)) throw MalformedProblemError("chain has the wrong dimension");
    QVec out = zero_chain(X, n - 1);
    if (n < 1 || n > X.top()) return out;
    const QMat& M = X.d[static_cast<size_t>(n)];
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; j < c.size(); ++j)
            if (M[i][j] != 0 && c[j] != 0) out[i] += M[i][j] * c[j];
    return out;
}

inline Rational l1(const FiniteChainComplex& X, int n, const QVec& c) {
    if (c.size() != X.dim(n)) throw MalformedProblemError("chain has the wrong dimension");
    Rational s = 0;
    for (size_t i = 0; i < c.size(); ++i)
        s += X.weights[static_cast<size_t>(n)][i] * rational_abs(c[i]);
    return s;
}

inline Rational theta_norm(const FiniteChainComplex& X, int n, const QVec& c,
                           const Rational& theta) {
    if (theta < 0) throw NegativeThetaError("theta must be nonnegative");
    Rational s = l1(X, n, c);
    if (theta > 0) s += theta * l1(X, n - 1, boundary(X, n, c));
    return s;
}

inline QVec chain_from_map(const FiniteChainComplex& X, int n,
                           const std::map<std::string, Rational>& terms) {
    QVec c = zero_chain(X, n);
    for (const auto& [name, coeff] : terms) {
        int i = X.index_of(n, name);
        if (i < 0) throw Error("no basis element '" + name + "' in degree " + std::to_string(n));
        c[static_cast<size_t>(i)] = coeff;
    }
    return c;
}

// ---------------------------------------------------------------------------
// subcomplex pairs

struct PairComplex {
    FiniteChainComplex X;
    std::vector<std::vector<int>> sub;  // sub[n]: sorted column indices spanning Y_n

    size_t sub_dim(int n) const {
        if (n < 0 || n >= static_cast<int>(sub.size())) return 0;
        return sub[static_cast<size_t>(n)].size();
    }

    std::vector<bool> sub_mask(int n) const {
        std::vector<bool> m(X.dim(n), false);
        if (n >= 0 && n < static_cast<int>(sub.size()))
            for (int i : sub[static_cast<size_t>(n)]) m[static_cast<size_t>(i)] = true;
        return m;
    }

    void validate() const {
        X.validate();
        if (sub.size() != X.names.size())
            throw MalformedProblemError("subcomplex must list one index set per degree");
        for (size_t n = 0; n < sub.size(); ++n) {
            int prev = -1;
            for (int i : sub[n]) {
                if (i <= prev || i >= static_cast<int>(X.dim(static_cast<int>(n))))
                    throw MalformedProblemError("subcomplex indices must be sorted and in range");
                prev = i;
            }
        }
        // closure under the boundary: basis elements of the subcomplex may
        // only hit subcomplex rows
        for (size_t n = 1; n < sub.size(); ++n) {
            std::vector<bool> below = sub_mask(static_cast<int>(n) - 1);
            for (int j : sub[n])
                for (size_t i = 0; i < X.dim(static_cast<int>(n) - 1); ++i)
                    if (!below[i] && X.d[n][i][static_cast<size_t>(j)] != 0)
                        throw MalformedProblemError(
                            "subcomplex is not closed under the boundary");
        }
    }
};

inline PairComplex make_pair_complex(FiniteChainComplex X,
                                     const std::vector<std::vector<std::string>>& sub_names) {
    PairComplex P;
    P.X = std::move(X);
    P.sub.assign(P.X.names.size(), {});
    for (size_t n = 0; n < sub_names.size(); ++n) {
        if (n >= P.sub.size()) {
            if (!sub_names[n].empty())
                throw MalformedProblemError("subcomplex names beyond the top degree");
            continue;
        }
        for (const auto& nm : sub_names[n]) {
            int i = P.X.index_of(static_cast<int>(n), nm);
            if (i < 0) throw Error("no basis element '" + nm + "' in degree " + std::to_string(n));
            P.sub[n].push_back(i);
        }
        std::sort(P.sub[n].begin(), P.sub[n].end());
    }
    P.validate();
    return P;
}

// expand a coordinate vector over the subcomplex basis to a full chain
inline QVec include_sub(const PairComplex& P, int n, const QVec& v) {
    if (v.size() != P.sub_dim(n))
        throw MalformedProblemError("subcomplex chain has the wrong dimension");
    QVec c = zero_chain(P.X, n);
    for (size_t k = 0; k < v.size(); ++k)
        c[static_cast<size_t>(P.sub[static_cast<size_t>(n)][k])] = v[k];
    return c;
}

inline bool sub_supported(const PairComplex& P, int n, const QVec& c) {
    if (c.size() != P.X.dim(n)) throw MalformedProblemError("chain has the wrong dimension");
    std::vector<bool> m = P.sub_mask(n);
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0 && !m[i]) return false;
    return true;
}

// restrict a subcomplex-supported chain back to subcomplex coordinates
inline QVec restrict_sub(const PairComplex& P, int n, const QVec& c) {
    if (!sub_supported(P, n, c))
        throw MalformedProblemError("chain is not supported on the subcomplex");
    QVec v(P.sub_dim(n), Rational(0));
    for (size_t k = 0; k < v.size(); ++k)
        v[k] = c[static_cast<size_t>(P.sub[static_cast<size_t>(n)][k])];
    return v;
}

inline QVec sub_boundary(const PairComplex& P, int n, const QVec& v) {
    return restrict_sub(P, n - 1, boundary(P.X, n, include_sub(P, n, v)));
}

inline Rational sub_l1(const PairComplex& P, int n, const QVec& v) {
    return l1(P.X, n, include_sub(P, n, v));
}

// ---------------------------------------------------------------------------
// the mapping cone of the inclusion: degree n is X_n + Y_{n-1}

struct ConeChain {
    int degree = 0;
    QVec u;  // over X_degree
    QVec v;  // over the subcomplex basis in degree-1
};

inline ConeChain cone_chain(const PairComplex& P, int n, QVec u, QVec v) {
    if (u.size() != P.X.dim(n) || v.size() != P.sub_dim(n - 1))
        throw MalformedProblemError("cone chain has the wrong dimensions");
    return ConeChain{n, std::move(u), std::move(v)};
}

inline ConeChain cone_boundary(const PairComplex& P, const ConeChain& cc) {
    int n = cc.degree;
    QVec du = boundary(P.X, n, cc.u);
    QVec iv = include_sub(P, n - 1, cc.v);
    for (size_t i = 0; i < du.size(); ++i) du[i] += iv[i];
    QVec dv = sub_boundary(P, n - 1, cc.v);
    Rational sign = faults::cone_sign ? Rational(1) : Rational(-1);
    for (Rational& x : dv) x *= sign;
    return ConeChain{n - 1, std::move(du), std::move(dv)};
}

inline bool cone_is_cycle(const PairComplex& P, const ConeChain& cc) {
    ConeChain b = cone_boundary(P, cc);
    for (const Rational& x : b.u)
        if (x != 0) return false;
    for (const Rational& x : b.v)
        if (x != 0) return false;
    return true;
}

inline Rational cone_theta_norm(const PairComplex& P, const ConeChain& cc,
                                const Rational& theta) {
    if (theta <= 0) throw NegativeThetaError("cone norms need theta > 0");
    Rational s = l1(P.X, cc.degree, cc.u);
    s += theta * sub_l1(P, cc.degree - 1, cc.v);
    return s;
}

// materialize the cone as a complex of its own (basis: X names, then the
// shifted subcomplex names prefixed with "y:"); built through cone_boundary
// so the sign fault shows up in the matrices
inline FiniteChainComplex mapping_cone(const PairComplex& P) {
    FiniteChainComplex C;
    int t = P.X.top() + 1;
    C.names.resize(static_cast<size_t>(t) + 1);
    C.weights.resize(static_cast<size_t>(t) + 1);
    C.d.resize(static_cast<size_t>(t) + 1);
    for (int n = 0; n <= t; ++n) {
        auto& nm = C.names[static_cast<size_t>(n)];
        auto& w = C.weights[static_cast<size_t>(n)];
        for (size_t i = 0; i < P.X.dim(n); ++i) {
            nm.push_back(P.X.names[static_cast<size_t>(n)][i]);
            w.push_back(P.X.weights[static_cast<size_t>(n)][i]);
        }
        for (size_t k = 0; k < P.sub_dim(n - 1); ++k) {
            size_t idx = static_cast<size_t>(P.sub[static_cast<size_t>(n - 1)][k]);
            nm.push_back("y:" + P.X.names[static_cast<size_t>(n - 1)][idx]);
            w.push_back(P.X.weights[static_cast<size_t>(n - 1)][idx]);
        }
    }
    for (int n = 1; n <= t; ++n) {
        size_t rows = C.names[static_cast<size_t>(n - 1)].size();
        size_t cols = C.names[static_cast<size_t>(n)].size();
        QMat M(rows, QVec(cols, Rational(0)));
        size_t ux = P.X.dim(n);
        for (size_t j = 0; j < cols; ++j) {
            ConeChain e{n, zero_chain(P.X, n), QVec(P.sub_dim(n - 1), Rational(0))};
            if (j < ux)
                e.u[j] = 1;
            else
                e.v[j - ux] = 1;
            ConeChain b = cone_boundary(P, e);
            for (size_t i = 0; i < b.u.size(); ++i) M[i][j] = b.u[i];
            for (size_t k = 0; k < b.v.size(); ++k) M[P.X.dim(n - 1) + k][j] = b.v[k];
        }
        C.d[static_cast<size_t>(n)] = std::move(M);
    }
    return C;
}

// ---------------------------------------------------------------------------
// exact kernel basis (used to find fundamental cycles of instance complexes)

inline QMat matrix_kernel(const QMat& A, size_t ncols) {
    QMat R = A;
    size_t rank = 0;
    std::vector<size_t> pivot_col;
    for (size_t col = 0; col < ncols && rank < R.size(); ++col) {
        size_t pr = R.size();
        for (size_t i = rank; i < R.size(); ++i)
            if (R[i][col] != 0) {
                pr = i;
                break;
            }
        if (pr == R.size()) continue;
        std::swap(R[rank], R[pr]);
        Rational inv = Rational(1) / R[rank][col];
        for (auto& v : R[rank]) v *= inv;
        for (size_t i = 0; i < R.size(); ++i) {
            if (i == rank || R[i][col] == 0) continue;
            Rational f = R[i][col];
            for (size_t j = 0; j < ncols; ++j) R[i][j] -= f * R[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    QMat basis;
    for (size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(ncols, Rational(0));
        v[free] = 1;
        for (size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -R[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// JSON input and output
//
// Explicit form:
//   {"degrees": [{"names": [...], "weights": ["p/q", ...]?}, ...],
//    "boundary": [[], [[row, col, "p/q"], ...], ...]}
// Simplicial shorthand (vertex sets; faces are generated, canonically
// ordered by sorting vertex names, and signed by the alternating rule on
// that order):
//   {"simplicial": [["a","b","c"], ...], "weights": {"face": "p/q"}?}

inline std::string face_name(const std::vector<std::string>& verts) {
    std::string s;
    for (size_t i = 0; i < verts.size(); ++i) {
        if (i) s += '|';
        s += verts[i];
    }
    return s;
}

inline FiniteChainComplex simplicial_complex(
    const std::vector<std::vector<std::string>>& simplices) {
    std::vector<std::set<std::vector<std::string>>> faces;  // per degree, sorted tuples
    for (const auto& s : simplices) {
        if (s.empty()) throw Error("empty simplex");
        std::vector<std::string> verts = s;
        std::sort(verts.begin(), verts.end());
        if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
            throw Error("repeated vertex in simplex '" + face_name(s) + "'");
        size_t k = verts.size() - 1;
        if (faces.size() <= k) faces.resize(k + 1);
        // every subset is a face; walk them by bitmask
        for (size_t mask = 1; mask < (size_t{1} << verts.size()); ++mask) {
            std::vector<std::string> f;
            for (size_t i = 0; i < verts.size(); ++i)
                if (mask & (size_t{1} << i)) f.push_back(verts[i]);
            faces[f.size() - 1].insert(f);
        }
    }
    FiniteChainComplex X;
    X.names.resize(faces.size());
    X.weights.resize(faces.size());
    X.d.resize(faces.size());
    std::vector<std::map<std::vector<std::string>, size_t>> index(faces.size());
    for (size_t n = 0; n < faces.size(); ++n) {
        for (const auto& f : faces[n]) {
            index[n][f] = X.names[n].size();
            X.names[n].push_back(face_name(f));
            X.weights[n].push_back(1);
        }
    }
    for (size_t n = 1; n < faces.size(); ++n) {
        QMat M(X.names[n - 1].size(), QVec(X.names[n].size(), Rational(0)));
        for (const auto& f : faces[n]) {
            size_t col = index[n].at(f);
            for (size_t drop = 0; drop < f.size(); ++drop) {
                std::vector<std::string> sub;
                for (size_t i = 0; i < f.size(); ++i)
                    if (i != drop) sub.push_back(f[i]);
                Rational sign = (drop % 2 == 0) ? 1 : -1;
                M[index[n - 1].at(sub)][col] += sign;
            }
        }
        X.d[n] = std::move(M);
    }
    X.validate();
    return X;
}

inline FiniteChainComplex complex_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.contains("simplicial")) {
            std::vector<std::vector<std::string>> simplices =
                j.at("simplicial").get<std::vector<std::vector<std::string>>>();
            FiniteChainComplex X = simplicial_complex(simplices);
            if (j.contains("weights")) {
                for (const auto& [name, val] : j.at("weights").items()) {
                    bool found = false;
                    for (int n = 0; n <= X.top() && !found; ++n) {
                        int i = X.index_of(n, name);
                        if (i >= 0) {
                            X.weights[static_cast<size_t>(n)][static_cast<size_t>(i)] =
                                parse_rational(val.get<std::string>());
                            found = true;
                        }
                    }
                    if (!found) throw Error("weight for unknown face '" + name + "'");
                }
            }
            X.validate();
            return X;
        }
        FiniteChainComplex X;
        const auto& degs = j.at("degrees");
        for (const auto& dj : degs) {
            std::vector<std::string> nm = dj.at("names").get<std::vector<std::string>>();
            QVec w(nm.size(), Rational(1));
            if (dj.contains("weights")) {
                auto ws = dj.at("weights").get<std::vector<std::string>>();
                if (ws.size() != nm.size()) throw Error("weight count disagrees with names");
                for (size_t i = 0; i < ws.size(); ++i) w[i] = parse_rational(ws[i]);
            }
            X.names.push_back(std::move(nm));
            X.weights.push_back(std::move(w));
        }
        X.d.resize(X.names.size());
        if (j.contains("boundary")) {
            const auto& bnd = j.at("boundary");
            if (bnd.size() > X.names.size()) throw Error("more boundary blocks than degrees");
            for (size_t n = 1; n < bnd.size(); ++n) {
                QMat M(X.dim(static_cast<int>(n) - 1),
                       QVec(X.dim(static_cast<int>(n)), Rational(0)));
                for (const auto& trip : bnd[n]) {
                    if (trip.size() != 3) throw Error("boundary entries are [row, col, value]");
                    size_t r = trip[0].get<size_t>(), c = trip[1].get<size_t>();
                    if (r >= M.size() || (!M.empty() && c >= M[0].size()))
                        throw Error("boundary entry out of range");
                    M[r][c] += parse_rational(trip[2].get<std::string>());
                }
                X.d[n] = std::move(M);
            }
            if (!bnd.empty() && !bnd[0].empty()) throw Error("degree zero has no boundary");
        }
        for (size_t n = 1; n < X.d.size(); ++n)
            if (X.d[n].empty())
                X.d[n].assign(X.dim(static_cast<int>(n) - 1),
                              QVec(X.dim(static_cast<int>(n)), Rational(0)));
        X.validate();
        return X;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed complex description: ") + e.what());
    } catch (const ParseError& e) {
        throw Error(std::string("malformed complex description: ") + e.what());
    }
}

inline nlohmann::ordered_json complex_to_json(const FiniteChainComplex& X) {
    nlohmann::ordered_json j;
    j["degrees"] = nlohmann::ordered_json::array();
    for (size_t n = 0; n < X.names.size(); ++n) {
        nlohmann::ordered_json dj;
        dj["names"] = X.names[n];
        std::vector<std::string> w;
        for (const Rational& q : X.weights[n]) w.push_back(rational_to_string(q));
        dj["weights"] = w;
        j["degrees"].push_back(dj);
    }
    j["boundary"] = nlohmann::ordered_json::array();
    for (size_t n = 0; n < X.d.size(); ++n) {
        nlohmann::ordered_json block = nlohmann::ordered_json::array();
        if (n >= 1)
            for (size_t r = 0; r < X.d[n].size(); ++r)
                for (size_t c = 0; c < X.d[n][r].size(); ++c)
                    if (X.d[n][r][c] != 0)
                        block.push_back({r, c, rational_to_string(X.d[n][r][c])});
        j["boundary"].push_back(block);
    }
    return j;
}

inline PairComplex pair_from_json(const nlohmann::ordered_json& j) {
    try {
        FiniteChainComplex X = complex_from_json(j.at("complex"));
        std::vector<std::vector<std::string>> sub;
        if (j.contains("subcomplex"))
            sub = j.at("subcomplex").get<std::vector<std::vector<std::string>>>();
        sub.resize(X.names.size());
        return make_pair_complex(std::move(X), sub);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed pair description: ") + e.what());
    }
}

inline QVec chain_from_json(const FiniteChainComplex& X, int n,
                            const nlohmann::ordered_json& j) {
    try {
        std::map<std::string, Rational> terms;
        for (const auto& [name, val] : j.items())
            terms[name] = parse_rational(val.get<std::string>());
        return chain_from_map(X, n, terms);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed chain description: ") + e.what());
    } catch (const ParseError& e) {
        throw Error(std::string("malformed chain description: ") + e.what());
    }
}

inline nlohmann::ordered_json chain_to_json(const FiniteChainComplex& X, int n, const QVec& c) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) j[X.names[static_cast<size_t>(n)][i]] = rational_to_string(c[i]);
    return j;
}

}  // namespace gognorm
