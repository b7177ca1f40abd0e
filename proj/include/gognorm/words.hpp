#pragma once

/*
 * Elements of the building-block groups: free groups of finite rank and
 * finitely generated abelian groups given by invariant factors (factor 0
 * denotes an infinite cyclic summand).  Elements are kept in a canonical
 * form at all times, so structural equality is group equality:
 *   free     - reduced syllable list [(generator, exponent)], adjacent
 *              generators distinct, exponents nonzero;
 *   abelian  - coordinate vector, torsion coordinates reduced into [0, d).
 *
 * Also here: images of abelian groups inside these groups (the edge-group
 * monomorphisms of a graph of groups), with exact membership, preimage,
 * and shortlex-minimal coset representatives.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gognorm/errors.hpp"
#include "gognorm/intlinalg.hpp"
#include "gognorm/rational.hpp"

namespace gognorm {

enum class GroupKind { Free, Abelian };

struct GroupSpec {
    GroupKind kind = GroupKind::Free;
    std::vector<std::string> generators;
    // Abelian only: one invariant factor per generator, 0 = infinite order.
    std::vector<Integer> invariant_factors;

    size_t rank() const { return generators.size(); }
};

inline GroupSpec make_free_group(std::vector<std::string> gens) {
    GroupSpec s;
    s.kind = GroupKind::Free;
    s.generators = std::move(gens);
    return s;
}

inline GroupSpec make_abelian_group(std::vector<std::string> gens, std::vector<Integer> factors) {
    if (gens.size() != factors.size())
        throw GraphMismatchError("abelian group needs one invariant factor per generator");
    for (const Integer& d : factors)
        if (d < 0) throw GraphMismatchError("invariant factors must be nonnegative");
    GroupSpec s;
    s.kind = GroupKind::Abelian;
    s.generators = std::move(gens);
    s.invariant_factors = std::move(factors);
    return s;
}

struct GroupElt {
    // Exactly one of these is populated, matching the owning GroupSpec's kind
    // (both empty = identity of either kind).
    std::vector<std::pair<int, Integer>> word;  // free: reduced syllables
    IVec coords;                                // abelian: canonical coordinates

    bool operator==(const GroupElt& o) const { return word == o.word && coords == o.coords; }
    bool operator!=(const GroupElt& o) const { return !(*this == o); }
};

inline GroupElt ge_identity(const GroupSpec& spec) {
    GroupElt g;
    if (spec.kind == GroupKind::Abelian) g.coords.assign(spec.rank(), Integer(0));
    return g;
}

inline bool ge_is_identity(const GroupElt& g) {
    if (!g.word.empty()) return false;
    for (const Integer& c : g.coords)
        if (c != 0) return false;
    return true;
}

// Torsion coordinate canonicalized into [0, d); free coordinates untouched.
inline void ge_canonicalize_abelian(const GroupSpec& spec, GroupElt& g) {
    for (size_t i = 0; i < spec.rank(); ++i) {
        const Integer& d = spec.invariant_factors[i];
        if (d > 0) {
            Integer r = g.coords[i] % d;
            if (r < 0) r += d;
            g.coords[i] = r;
        }
    }
}

// Balanced representative of a torsion coordinate: value of least magnitude,
// ties to the positive one.  Used for word length and shortlex keys.
inline Integer ge_balanced_coord(const Integer& c, const Integer& d) {
    if (d == 0) return c;
    return 2 * c <= d ? c : c - d;
}

inline GroupElt ge_from_letters(const GroupSpec& spec,
                                const std::vector<std::pair<int, Integer>>& letters) {
    GroupElt g = ge_identity(spec);
    if (spec.kind == GroupKind::Abelian) {
        for (const auto& [gen, exp] : letters) {
            if (gen < 0 || static_cast<size_t>(gen) >= spec.rank())
                throw UnknownGeneratorError("generator index out of range");
            g.coords[gen] += exp;
        }
        ge_canonicalize_abelian(spec, g);
        return g;
    }
    for (const auto& [gen, exp] : letters) {
        if (gen < 0 || static_cast<size_t>(gen) >= spec.rank())
            throw UnknownGeneratorError("generator index out of range");
        if (exp == 0) continue;
        if (!g.word.empty() && g.word.back().first == gen) {
            g.word.back().second += exp;
            if (g.word.back().second == 0) g.word.pop_back();
        } else {
            g.word.emplace_back(gen, exp);
        }
    }
    return g;
}

inline GroupElt ge_mul(const GroupSpec& spec, const GroupElt& a, const GroupElt& b) {
    if (spec.kind == GroupKind::Abelian) {
        GroupElt g = a;
        for (size_t i = 0; i < spec.rank(); ++i) g.coords[i] += b.coords[i];
        ge_canonicalize_abelian(spec, g);
        return g;
    }
    GroupElt g = a;
    for (const auto& syl : b.word) {
        if (!g.word.empty() && g.word.back().first == syl.first) {
            g.word.back().second += syl.second;
            if (g.word.back().second == 0) g.word.pop_back();
        } else {
            g.word.push_back(syl);
        }
    }
    return g;
}

inline GroupElt ge_inv(const GroupSpec& spec, const GroupElt& a) {
    GroupElt g = ge_identity(spec);
    if (spec.kind == GroupKind::Abelian) {
        for (size_t i = 0; i < spec.rank(); ++i) g.coords[i] = -a.coords[i];
        ge_canonicalize_abelian(spec, g);
        return g;
    }
    g.word.reserve(a.word.size());
    for (auto it = a.word.rbegin(); it != a.word.rend(); ++it)
        g.word.emplace_back(it->first, -it->second);
    return g;
}

// w = s * c * s^-1 with c cyclically reduced (first and last generator
// distinct, or at most one syllable).
inline void ge_cyclic_decompose(const GroupElt& w, std::vector<std::pair<int, Integer>>& s,
                                std::vector<std::pair<int, Integer>>& c) {
    s.clear();
    c = w.word;
    while (c.size() >= 2 && c.front().first == c.back().first) {
        auto front = c.front();
        Integer merged = front.second + c.back().second;
        c.erase(c.begin());
        c.pop_back();
        if (merged != 0) c.emplace_back(front.first, merged);
        if (!s.empty() && s.back().first == front.first) {
            s.back().second += front.second;
            if (s.back().second == 0) s.pop_back();
        } else {
            s.push_back(front);
        }
    }
}

inline GroupElt ge_pow(const GroupSpec& spec, const GroupElt& a, const Integer& k) {
    if (spec.kind == GroupKind::Abelian) {
        GroupElt g = ge_identity(spec);
        for (size_t i = 0; i < spec.rank(); ++i) g.coords[i] = a.coords[i] * k;
        ge_canonicalize_abelian(spec, g);
        return g;
    }
    if (k == 0 || a.word.empty()) return ge_identity(spec);
    std::vector<std::pair<int, Integer>> s, c;
    ge_cyclic_decompose(a, s, c);
    GroupElt g;
    g.word = s;
    Integer n = k < 0 ? -k : k;
    if (c.size() == 1) {
        auto syl = c.front();
        syl.second *= k;
        g.word.push_back(syl);
    } else {
        // c cyclically reduced with >= 2 syllables: copies concatenate freely
        if (n > 1000000) throw Error("exponent too large for explicit free-group power");
        long reps = n.convert_to<long>();
        if (k > 0) {
            for (long i = 0; i < reps; ++i) g.word.insert(g.word.end(), c.begin(), c.end());
        } else {
            for (long i = 0; i < reps; ++i)
                for (auto it = c.rbegin(); it != c.rend(); ++it)
                    g.word.emplace_back(it->first, -it->second);
        }
    }
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        if (!g.word.empty() && g.word.back().first == it->first) {
            g.word.back().second += -it->second;
            if (g.word.back().second == 0) g.word.pop_back();
        } else {
            g.word.emplace_back(it->first, -it->second);
        }
    }
    GroupElt out;
    out.word = std::move(g.word);
    return out;
}

inline Integer ge_len(const GroupSpec& spec, const GroupElt& g) {
    Integer n = 0;
    if (spec.kind == GroupKind::Abelian) {
        for (size_t i = 0; i < spec.rank(); ++i) {
            Integer b = ge_balanced_coord(g.coords[i], spec.invariant_factors[i]);
            n += b < 0 ? -b : b;
        }
        return n;
    }
    for (const auto& syl : g.word) n += syl.second < 0 ? -syl.second : syl.second;
    return n;
}

// Canonical letter expansion (run-length): symbol = 2*gen + (1 if negative).
inline std::vector<std::pair<long, Integer>> ge_runs(const GroupSpec& spec, const GroupElt& g) {
    std::vector<std::pair<long, Integer>> runs;
    if (spec.kind == GroupKind::Abelian) {
        for (size_t i = 0; i < spec.rank(); ++i) {
            Integer b = ge_balanced_coord(g.coords[i], spec.invariant_factors[i]);
            if (b > 0)
                runs.emplace_back(2 * static_cast<long>(i), b);
            else if (b < 0)
                runs.emplace_back(2 * static_cast<long>(i) + 1, -b);
        }
        return runs;
    }
    for (const auto& syl : g.word) {
        if (syl.second > 0)
            runs.emplace_back(2 * static_cast<long>(syl.first), syl.second);
        else
            runs.emplace_back(2 * static_cast<long>(syl.first) + 1, -syl.second);
    }
    return runs;
}

// Lexicographic comparison of run-length encoded symbol strings:
// -1, 0, +1.  (Shorter prefix compares low; callers that want shortlex
// compare total lengths first.)
inline int runs_lex_cmp(const std::vector<std::pair<long, Integer>>& a,
                        const std::vector<std::pair<long, Integer>>& b) {
    size_t i = 0, j = 0;
    Integer ri = 0, rj = 0;  // consumed within current run
    while (i < a.size() && j < b.size()) {
        if (a[i].first != b[j].first) return a[i].first < b[j].first ? -1 : 1;
        Integer remi = a[i].second - ri, remj = b[j].second - rj;
        Integer step = remi < remj ? remi : remj;
        ri += step;
        rj += step;
        if (ri == a[i].second) { ++i; ri = 0; }
        if (rj == b[j].second) { ++j; rj = 0; }
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return 0;
}

// Shortlex: shorter first, ties by letter sequence with g < g^-1 < next
// generator for every generator g.
inline bool ge_less(const GroupSpec& spec, const GroupElt& a, const GroupElt& b) {
    Integer la = ge_len(spec, a), lb = ge_len(spec, b);
    if (la != lb) return la < lb;
    return runs_lex_cmp(ge_runs(spec, a), ge_runs(spec, b)) < 0;
}

inline size_t ge_hash(const GroupElt& g) {
    size_t h = 0x51ab3e7;
    for (const auto& syl : g.word) {
        hash_combine(h, static_cast<size_t>(syl.first));
        hash_combine(h, hash_integer(syl.second));
    }
    hash_combine(h, g.coords.size());
    for (const Integer& c : g.coords) hash_combine(h, hash_integer(c));
    return h;
}

inline std::string ge_to_string(const GroupSpec& spec, const GroupElt& g) {
    if (ge_is_identity(g)) return "1";
    std::string out;
    auto emit = [&](const std::string& name, const Integer& exp) {
        if (!out.empty()) out += "*";
        out += name;
        if (exp != 1) out += "^" + exp.str();
    };
    if (spec.kind == GroupKind::Abelian) {
        for (size_t i = 0; i < spec.rank(); ++i) {
            Integer b = ge_balanced_coord(g.coords[i], spec.invariant_factors[i]);
            if (b != 0) emit(spec.generators[i], b);
        }
    } else {
        for (const auto& syl : g.word) emit(spec.generators[syl.first], syl.second);
    }
    return out;
}

// All elements of word length <= bound, in no particular order.
inline std::vector<GroupElt> ge_ball(const GroupSpec& spec, const Integer& bound) {
    std::vector<GroupElt> out;
    if (spec.kind == GroupKind::Abelian) {
        GroupElt cur = ge_identity(spec);
        auto rec = [&](auto&& self, size_t i, Integer left) -> void {
            if (i == spec.rank()) {
                GroupElt g = cur;
                ge_canonicalize_abelian(spec, g);
                out.push_back(g);
                return;
            }
            const Integer& d = spec.invariant_factors[i];
            Integer lo, hi;
            if (d == 0) {
                lo = -left;
                hi = left;
            } else {
                // balanced representatives of Z/d within the budget
                Integer half = d / 2;
                hi = half < left ? half : left;
                Integer nlo = (d - 1) / 2;
                lo = -(nlo < left ? nlo : left);
            }
            for (Integer c = lo; c <= hi; ++c) {
                cur.coords[i] = c;
                Integer cost = c < 0 ? -c : c;
                self(self, i + 1, left - cost);
            }
            cur.coords[i] = 0;
        };
        rec(rec, 0, bound);
        // Distinct balanced tuples give distinct elements; no dedup needed.
        return out;
    }
    std::vector<std::pair<int, Integer>> word;
    auto rec = [&](auto&& self, Integer left) -> void {
        GroupElt g;
        g.word = word;
        out.push_back(g);
        if (left == 0) return;
        for (size_t gen = 0; gen < spec.rank(); ++gen) {
            if (!word.empty() && word.back().first == static_cast<int>(gen)) continue;
            for (Integer e = 1; e <= left; ++e) {
                word.emplace_back(static_cast<int>(gen), e);
                self(self, left - e);
                word.back().second = -e;
                self(self, left - e);
                word.pop_back();
            }
        }
    };
    rec(rec, bound);
    return out;
}

/*
 * Primitive root machinery for free groups.
 */

// Smallest period of a syllable list under exact equality.
inline size_t syllable_period(const std::vector<std::pair<int, Integer>>& c) {
    const size_t n = c.size();
    for (size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (size_t i = p; i < n && ok; ++i) ok = (c[i] == c[i % p]);
        if (ok) return p;
    }
    return n;
}

// w != 1 in a free group: returns (r, m) with w = r^m, m >= 1 maximal.
inline std::pair<GroupElt, Integer> ge_primitive_root(const GroupSpec& spec, const GroupElt& w) {
    std::vector<std::pair<int, Integer>> s, c;
    ge_cyclic_decompose(w, s, c);
    GroupElt core;
    Integer m;
    if (c.size() == 1) {
        Integer e = c.front().second;
        m = e < 0 ? -e : e;
        core.word.emplace_back(c.front().first, e < 0 ? Integer(-1) : Integer(1));
    } else {
        size_t p = syllable_period(c);
        m = Integer(c.size() / p);
        core.word.assign(c.begin(), c.begin() + static_cast<long>(p));
    }
    GroupElt sg, sginv;
    sg.word = s;
    sginv = ge_inv(spec, sg);
    return {ge_mul(spec, sg, ge_mul(spec, core, sginv)), m};
}

// x = r^t for primitive r: returns t, or nullopt.
inline std::optional<Integer> ge_dlog(const GroupSpec& spec, const GroupElt& x,
                                      const GroupElt& r) {
    if (ge_is_identity(x)) return Integer(0);
    std::vector<std::pair<int, Integer>> s, c;
    ge_cyclic_decompose(r, s, c);
    GroupElt sg, y;
    sg.word = s;
    y = ge_mul(spec, ge_inv(spec, sg), ge_mul(spec, x, sg));
    if (y.word.empty()) return Integer(0);
    if (c.size() == 1) {
        if (y.word.size() != 1 || y.word[0].first != c[0].first) return std::nullopt;
        Integer t = y.word[0].second;  // c exponent is +-1
        return c[0].second < 0 ? -t : t;
    }
    if (y.word.size() % c.size() != 0) return std::nullopt;
    Integer t = Integer(y.word.size() / c.size());
    GroupElt cc;
    cc.word = c;
    GroupElt probe = ge_pow(spec, cc, t);
    if (probe == y) return t;
    probe = ge_pow(spec, cc, -t);
    if (probe == y) return -t;
    return std::nullopt;
}

/*
 * SubgroupImage: the image of a finitely generated abelian group E inside a
 * vertex group V under a homomorphism given on generators.  Constructing one
 * checks well-definedness and injectivity; failures are reported in `issue`
 * so the graph validator can turn them into errors with context.
 */
class SubgroupImage {
public:
    SubgroupImage() = default;

    SubgroupImage(GroupSpec target, GroupSpec edge, std::vector<GroupElt> images)
        : target_(std::move(target)), edge_(std::move(edge)), images_(std::move(images)) {
        if (edge_.kind != GroupKind::Abelian) {
            issue = "edge group must be abelian";
            return;
        }
        if (images_.size() != edge_.rank()) {
            issue = "need one image per edge-group generator";
            return;
        }
        if (target_.kind == GroupKind::Free)
            build_free();
        else
            build_abelian();
    }

    std::string issue;  // empty = valid monomorphism

    bool valid() const { return issue.empty(); }
    const GroupSpec& target() const { return target_; }
    const GroupSpec& edge() const { return edge_; }

    bool trivial_image() const { return trivial_; }

    bool contains(const GroupElt& x) const {
        if (trivial_) return ge_is_identity(x);
        if (target_.kind == GroupKind::Free) {
            auto t = ge_dlog(target_, x, root_);
            return t && *t % gen_exp_ == 0;
        }
        return full_.contains(x.coords);
    }

    // Canonical E-coordinates of the preimage; x must lie in the image.
    IVec preimage(const GroupElt& x) const {
        IVec z(edge_.rank(), Integer(0));
        if (trivial_) return canon_edge(z);
        if (target_.kind == GroupKind::Free) {
            // post-validation the image is <root_^gen_exp_> with a single
            // nontrivial edge generator carrying that power
            auto t = ge_dlog(target_, x, root_);
            if (!t || *t % gen_exp_ != 0) throw Error("preimage of element outside subgroup image");
            z[free_gen_] = *t / gen_exp_;
            return canon_edge(z);
        }
        auto sol = solve_integer(aug_, x.coords);
        if (!sol) throw Error("preimage of element outside subgroup image");
        for (size_t j = 0; j < edge_.rank(); ++j) z[j] = (*sol)[j];
        return canon_edge(z);
    }

    GroupElt image_of(const IVec& ecoords) const {
        GroupElt g = ge_identity(target_);
        for (size_t j = 0; j < edge_.rank(); ++j)
            g = ge_mul(target_, g, ge_pow(target_, images_[j], ecoords[j]));
        return g;
    }

    // Shortlex-least element of g * H, H the image subgroup.  Cached; copies
    // of a SubgroupImage share the cache.
    GroupElt coset_rep(const GroupElt& g) const {
        std::lock_guard<std::mutex> lk(cache_->mu);
        auto it = cache_->reps.find(rep_key(g));
        if (it != cache_->reps.end()) return it->second;
        GroupElt r = compute_rep(g);
        cache_->reps.emplace(rep_key(g), r);
        return r;
    }

    bool same_coset(const GroupElt& a, const GroupElt& b) const {
        return contains(ge_mul(target_, ge_inv(target_, a), b));
    }

    // All shortlex-minimal coset representatives of word length <= bound.
    std::vector<GroupElt> coset_reps_within(const Integer& bound) const {
        std::vector<GroupElt> reps;
        std::map<std::string, bool> seen;
        for (const GroupElt& g : ge_ball(target_, bound)) {
            GroupElt r = coset_rep(g);
            std::string k = rep_key(r);
            if (!seen[k]) {
                seen[k] = true;
                reps.push_back(r);
            }
        }
        std::sort(reps.begin(), reps.end(),
                  [&](const GroupElt& a, const GroupElt& b) { return ge_less(target_, a, b); });
        return reps;
    }

private:
    GroupSpec target_, edge_;
    std::vector<GroupElt> images_;
    bool trivial_ = true;

    // free target: image subgroup = <root_^gen_exp_>, carried by edge
    // generator free_gen_
    GroupElt root_;
    Integer gen_exp_ = 1;
    size_t free_gen_ = 0;

    // abelian target
    Lattice full_;      // image + target relations, inside coordinate space
    IMat aug_;          // [M | R_V] for preimage solving
    IMat relv_;         // target relation generators as columns

    struct Cache {
        std::mutex mu;
        std::map<std::string, GroupElt> reps;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

    static std::string rep_key(const GroupElt& g) {
        std::string k;
        for (const auto& syl : g.word) k += std::to_string(syl.first) + "^" + syl.second.str() + ".";
        k += "|";
        for (const Integer& c : g.coords) k += c.str() + ",";
        return k;
    }

    IVec canon_edge(IVec z) const {
        for (size_t j = 0; j < edge_.rank(); ++j) {
            const Integer& d = edge_.invariant_factors[j];
            if (d > 0) {
                Integer r = z[j] % d;
                if (r < 0) r += d;
                z[j] = r;
            }
        }
        return z;
    }

    void build_free() {
        // Identify trivial-image case and check that generators with factor 1
        // map to the identity.
        std::vector<size_t> nontrivial;
        for (size_t j = 0; j < edge_.rank(); ++j) {
            const Integer& d = edge_.invariant_factors[j];
            if (d == 1) {
                if (!ge_is_identity(images_[j])) {
                    issue = "generator of order 1 must map to the identity";
                    return;
                }
                continue;
            }
            if (ge_is_identity(images_[j])) {
                // kernel contains this generator unless it is trivial in E
                issue = "nontrivial edge-group generator maps to the identity (not injective)";
                return;
            }
            if (d > 1) {
                issue = "torsion generator cannot embed in a free group";
                return;
            }
            nontrivial.push_back(j);
        }
        if (nontrivial.empty()) {
            trivial_ = true;
            // injective iff E itself is trivial
            for (size_t j = 0; j < edge_.rank(); ++j)
                if (edge_.invariant_factors[j] != 1) {
                    issue = "trivial image of a nontrivial edge group (not injective)";
                    return;
                }
            return;
        }
        if (nontrivial.size() > 1) {
            // Z^2 never embeds in a free group; also covers non-commuting images.
            issue = "edge group of rank >= 2 cannot embed in a free group";
            return;
        }
        trivial_ = false;
        free_gen_ = nontrivial[0];
        auto [r, m] = ge_primitive_root(target_, images_[free_gen_]);
        root_ = r;
        gen_exp_ = m;
    }

    void build_abelian() {
        const size_t nt = target_.rank(), ne = edge_.rank();
        // M columns = images, relv columns = d_r * e_r for torsion factors
        IMat mcols;  // stored column-wise for lattice building
        for (size_t j = 0; j < ne; ++j) mcols.push_back(images_[j].coords);
        std::vector<IVec> rel;
        for (size_t r = 0; r < nt; ++r) {
            const Integer& d = target_.invariant_factors[r];
            if (d > 0) {
                IVec v(nt, Integer(0));
                v[r] = d;
                rel.push_back(v);
            }
        }
        // well-definedness: c_j * M_j lies in the relation lattice
        for (size_t j = 0; j < ne; ++j) {
            const Integer& dj = edge_.invariant_factors[j];
            if (dj == 0) continue;
            for (size_t r = 0; r < nt; ++r) {
                Integer v = dj * images_[j].coords[r];
                const Integer& dr = target_.invariant_factors[r];
                bool ok = dr == 0 ? v == 0 : v % dr == 0;
                if (!ok) {
                    issue = "images do not respect the edge-group relations";
                    return;
                }
            }
        }
        // aug = [M | R_V], rows = target coords
        aug_.assign(nt, IVec(ne + rel.size(), Integer(0)));
        for (size_t r = 0; r < nt; ++r) {
            for (size_t j = 0; j < ne; ++j) aug_[r][j] = images_[j].coords[r];
            for (size_t j = 0; j < rel.size(); ++j) aug_[r][ne + j] = rel[j][r];
        }
        // injectivity: kernel of aug projected to the z-part must lie in E's
        // relation lattice
        for (const IVec& k : integer_kernel(aug_)) {
            for (size_t j = 0; j < ne; ++j) {
                const Integer& dj = edge_.invariant_factors[j];
                bool ok = dj == 0 ? k[j] == 0 : k[j] % dj == 0;
                if (!ok) {
                    issue = "monomorphism has nontrivial kernel";
                    return;
                }
            }
        }
        std::vector<IVec> gens = mcols;
        gens.insert(gens.end(), rel.begin(), rel.end());
        full_ = Lattice(nt, gens);
        relv_.assign(rel.begin(), rel.end());
        trivial_ = true;
        for (size_t j = 0; j < ne; ++j)
            if (!ge_is_identity(images_[j])) trivial_ = false;
    }

    GroupElt compute_rep(const GroupElt& g) const {
        if (trivial_) return g;
        if (target_.kind == GroupKind::Free) return rep_free(g);
        return rep_abelian(g);
    }

    // Scan g * w^k over the window where the length can still beat the best.
    GroupElt rep_free(const GroupElt& g) const {
        GroupElt w = ge_pow(target_, root_, gen_exp_);
        std::vector<std::pair<int, Integer>> s, c;
        ge_cyclic_decompose(w, s, c);
        Integer clen = 0;
        for (const auto& syl : c) clen += syl.second < 0 ? -syl.second : syl.second;
        GroupElt sg;
        sg.word = s;
        Integer slen = ge_len(target_, sg);
        GroupElt best = g;
        Integer bestlen = ge_len(target_, g);
        Integer glen = bestlen;
        for (Integer k = 1;; ++k) {
            // every candidate with |k'| >= k has length >= k*clen - glen - 2slen
            if (k * clen - glen - 2 * slen > bestlen) break;
            for (int sgn : {1, -1}) {
                GroupElt cand = ge_mul(target_, g, ge_pow(target_, w, sgn * k));
                if (ge_less(target_, cand, best)) {
                    best = cand;
                    bestlen = ge_len(target_, cand);
                }
            }
        }
        return best;
    }

    GroupElt rep_abelian(const GroupElt& g) const {
        // Cheap canonical point of the coset first, then exact refinement over
        // the coset elements whose balanced length can be minimal.
        IVec red = full_.reduce(g.coords);
        GroupElt g0;
        g0.coords = red;
        ge_canonicalize_abelian(target_, g0);
        Integer b0 = ge_len(target_, g0);
        size_t nfree = 0;
        Integer tor_sum = 0;
        for (const Integer& d : target_.invariant_factors) {
            if (d == 0)
                ++nfree;
            else
                tor_sum += d - 1;
        }
        Integer l1g0 = 0;
        for (const Integer& c : g0.coords) l1g0 += c < 0 ? -c : c;
        Integer radius = l1g0 + b0 * Integer(nfree) + tor_sum;
        GroupElt best = g0;
        for (const IVec& u : full_.l1_ball(radius)) {
            GroupElt cand;
            cand.coords.resize(target_.rank());
            for (size_t r = 0; r < target_.rank(); ++r) cand.coords[r] = g0.coords[r] + u[r];
            ge_canonicalize_abelian(target_, cand);
            if (ge_less(target_, cand, best)) best = cand;
        }
        return best;
    }
};

}  // namespace gognorm
