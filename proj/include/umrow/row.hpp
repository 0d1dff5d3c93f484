#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/groebner.hpp"
#include "umrow/finite_algebra.hpp"
#include "umrow/ring.hpp"

namespace umrow {

// Exact witness that sum c_i a_i + sum d_j g_j = 1 (g_j the ring relations).
struct Certificate {
    std::vector<Poly> row_cofactors;
    std::vector<Poly> relation_cofactors;
};

// Evidence of non-unimodularity: the reduced Groebner basis of
// (entries + relations), which does not contain 1.
struct Refutation {
    std::vector<Poly> basis;
};

struct Row {
    RingSpec ring;
    std::vector<Poly> entries;
    std::optional<Certificate> certificate;

    std::size_t length() const { return entries.size(); }

    void validate() const {
        ring.validate();
        if (entries.size() < 2) throw DomainError("row needs at least two entries");
        for (const auto& e : entries)
            if (e.nvars() != ring.nvars())
                throw RingMismatchError("row entry from a different ring");
        if (certificate) {
            const Certificate& c = *certificate;
            if (c.row_cofactors.size() != entries.size() ||
                c.relation_cofactors.size() != ring.relations.size())
                throw DomainError("certificate shape mismatch");
            Poly acc(ring.nvars());
            for (std::size_t i = 0; i < entries.size(); ++i)
                acc = acc + c.row_cofactors[i] * entries[i];
            for (std::size_t j = 0; j < ring.relations.size(); ++j)
                acc = acc + c.relation_cofactors[j] * ring.relations[j];
            if (!(acc == Poly::constant(ring.nvars(), 1)))
                throw DomainError("certificate does not re-expand to 1");
        }
    }
};

inline Row make_row(const RingSpec& ring, const std::vector<std::string>& entries) {
    Row r;
    r.ring = ring;
    for (const auto& s : entries) r.entries.push_back(parse_poly(s, ring));
    r.validate();
    return r;
}

// Decides 1 in (entries + relations) by Groebner membership; the certificate
// splits the cofactors back into row and relation parts.
inline std::variant<Certificate, Refutation> is_unimodular(const Row& row,
                                                           GroebnerOptions opt = {}) {
    row.validate();
    std::vector<Poly> gens = row.entries;
    gens.insert(gens.end(), row.ring.relations.begin(), row.ring.relations.end());
    MembershipResult res =
        membership_certificate(Poly::constant(row.ring.nvars(), 1), gens, row.ring, opt);
    if (res.member) {
        Certificate cert;
        cert.row_cofactors.assign(res.cofactors.begin(),
                                  res.cofactors.begin() + row.entries.size());
        cert.relation_cofactors.assign(res.cofactors.begin() + row.entries.size(),
                                       res.cofactors.end());
        return cert;
    }
    opt.with_cofactors = false;
    return Refutation{groebner(gens, row.ring, opt).basis};
}

inline Row certify(Row row, GroebnerOptions opt = {}) {
    auto verdict = is_unimodular(row, opt);
    if (std::holds_alternative<Refutation>(verdict))
        throw DomainError("row is not unimodular");
    row.certificate = std::get<Certificate>(verdict);
    row.validate();
    return row;
}

// a_i <- a_i + h * a_j
struct ElementaryOp {
    std::size_t i = 0;  // target (0-based)
    std::size_t j = 0;  // source
    Poly h;
};

inline Row apply_elementary(const Row& row, const std::vector<ElementaryOp>& ops) {
    Row out = row;
    for (const auto& op : ops) {
        if (op.i >= out.entries.size() || op.j >= out.entries.size())
            throw DomainError("elementary op index out of range");
        if (op.i == op.j) throw DomainError("elementary op needs distinct indices");
        if (op.h.nvars() != out.ring.nvars())
            throw RingMismatchError("elementary multiplier from a different ring");
        out.entries[op.i] = out.entries[op.i] + op.h * out.entries[op.j];
        if (out.certificate) {
            // a_i = a_i' - h a_j', so c_j picks up -h c_i; the identity stays exact.
            Certificate& c = *out.certificate;
            c.row_cofactors[op.j] = c.row_cofactors[op.j] - op.h * c.row_cofactors[op.i];
        }
    }
    out.validate();
    return out;
}

// --- naive homotopies ------------------------------------------------------

// A[t]: one fresh variable appended, relations lifted.
inline RingSpec extend_ring(const RingSpec& ring, const std::string& tname = "t") {
    if (ring.var_index(tname)) throw DomainError("ring already has a variable " + tname);
    RingSpec ext;
    ext.vars = ring.vars;
    ext.vars.push_back(tname);
    std::vector<std::size_t> idmap(ring.nvars());
    for (std::size_t i = 0; i < ring.nvars(); ++i) idmap[i] = i;
    for (const auto& g : ring.relations)
        ext.relations.push_back(g.map_vars(idmap, ring.nvars() + 1));
    ext.dim = ring.dim + 1;
    ext.complete_intersection = ring.complete_intersection;
    ext.validate();
    return ext;
}

namespace detail {

// Specialize the last variable to c and drop it; the input must not use any
// variable beyond base_nvars except the last.
inline Poly specialize_last(const Poly& p, std::size_t base_nvars, const Rat& c) {
    Poly sub = p.substitute(base_nvars, c);
    std::vector<std::size_t> idmap(base_nvars + 1, 0);
    for (std::size_t i = 0; i < base_nvars; ++i) idmap[i] = i;
    for (const auto& t : sub.terms())
        if (t.mono[base_nvars] != 0) throw DomainError("unexpected variable survives specialization");
    return sub.map_vars(idmap, base_nvars);
}

}  // namespace detail

struct HomotopyWitness {
    Row track;  // over extend_ring(end0.ring)
    Row end0;
    Row end1;
};

inline HomotopyWitness make_homotopy(const Row& end0, const Row& end1,
                                     const std::vector<Poly>& track_entries) {
    if (!same_ring(end0.ring, end1.ring)) throw RingMismatchError("endpoint rings differ");
    if (end0.entries.size() != end1.entries.size() ||
        end0.entries.size() != track_entries.size())
        throw DomainError("homotopy rows must share one length");
    HomotopyWitness w;
    w.end0 = end0;
    w.end1 = end1;
    w.track.ring = extend_ring(end0.ring);
    w.track.entries = track_entries;
    w.track.validate();
    return w;
}

// True iff the track row is unimodular over A[t] and its specializations at
// t = 0, 1 agree with the endpoints modulo the relations. A positive answer
// hands both endpoints a certificate by specializing the track's one.
inline bool check_homotopy(const HomotopyWitness& w, GroebnerOptions opt = {}) {
    const RingSpec& base = w.end0.ring;
    std::size_t nv = base.nvars();
    GroebnerBasis gb = groebner(base.relations, base, opt);
    for (int endpoint = 0; endpoint < 2; ++endpoint) {
        const Row& target = endpoint == 0 ? w.end0 : w.end1;
        for (std::size_t k = 0; k < w.track.entries.size(); ++k) {
            Poly spec = detail::specialize_last(w.track.entries[k], nv, Rat(endpoint));
            if (!reduce(spec - target.entries[k], gb).is_zero()) return false;
        }
    }
    auto verdict = is_unimodular(w.track, opt);
    if (std::holds_alternative<Refutation>(verdict)) return false;

    // invariant: a passing witness certifies both endpoints unimodular
    const Certificate& cert = std::get<Certificate>(verdict);
    for (int endpoint = 0; endpoint < 2; ++endpoint) {
        Poly acc(nv);
        for (std::size_t k = 0; k < w.track.entries.size(); ++k) {
            Poly c = detail::specialize_last(cert.row_cofactors[k], nv, Rat(endpoint));
            Poly a = detail::specialize_last(w.track.entries[k], nv, Rat(endpoint));
            acc = acc + c * a;
        }
        for (std::size_t j = 0; j < base.relations.size(); ++j) {
            Poly d = detail::specialize_last(cert.relation_cofactors[j], nv, Rat(endpoint));
            acc = acc + d * base.relations[j];
        }
        if (!reduce(acc - Poly::constant(nv, 1), gb).is_zero())
            throw DomainError("internal: specialized certificate fails");
    }
    return true;
}

// --- completions ------------------------------------------------------------

struct CompletionMatrix {
    std::vector<std::vector<Poly>> m;
};

inline bool verify_completion(const Row& row, const CompletionMatrix& cm,
                              GroebnerOptions opt = {}) {
    row.validate();
    std::size_t n = row.entries.size();
    if (cm.m.size() != n) throw DomainError("completion matrix size mismatch");
    for (const auto& r : cm.m)
        if (r.size() != n) throw DomainError("completion matrix not square");
    GroebnerBasis gb = groebner(row.ring.relations, row.ring, opt);
    for (std::size_t k = 0; k < n; ++k)
        if (!reduce(cm.m[0][k] - row.entries[k], gb).is_zero()) return false;
    Poly det = poly_det(cm.m);
    return reduce(det - Poly::constant(row.ring.nvars(), 1), gb).is_zero();
}

// --- regular-sequence preparation -------------------------------------------

namespace detail {

// The tail (a_2,...,a_{d+1}) cuts out a zero-dimensional subscheme iff the
// quotient by (relations + tail) has a finite staircase basis. The unit ideal
// counts: an empty vanishing locus is regular for our purposes.
inline bool tail_zero_dimensional(const Row& row, GroebnerOptions opt) {
    std::vector<Poly> gens(row.entries.begin() + 1, row.entries.end());
    gens.insert(gens.end(), row.ring.relations.begin(), row.ring.relations.end());
    GroebnerBasis gb = groebner(gens, row.ring, opt);
    if (gb.contains_one()) return true;
    try {
        quotient_basis(gb);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

}  // namespace detail

struct PrepResult {
    Row row;
    std::vector<ElementaryOp> ops;
};

// Elementary ops making (a_2,...,a_{d+1}) a regular sequence: the identity
// attempt, then the deterministic sweep a_i <- a_i + x_{i-1} a_1, then seeded
// degree-<=1 retries. Existence is guaranteed (not constructively), so running
// out of budget aborts rather than refutes.
inline PrepResult prep_regular(const Row& row, std::uint64_t seed,
                               GroebnerOptions opt = {}) {
    row.validate();
    if (!row.ring.complete_intersection)
        throw DomainError("prep_regular needs a complete-intersection ring");
    if (row.entries.size() != static_cast<std::size_t>(row.ring.dim) + 1)
        throw DomainError("prep_regular: row length must be dim + 1");
    Row base = row;
    if (!base.certificate) base = certify(base, opt);

    if (detail::tail_zero_dimensional(base, opt)) return {base, {}};

    std::size_t nv = row.ring.nvars();
    std::vector<ElementaryOp> sweep;
    for (std::size_t i = 1; i < row.entries.size(); ++i)
        sweep.push_back({i, 0, Poly::variable(nv, i - 1)});
    Row swept = apply_elementary(base, sweep);
    if (detail::tail_zero_dimensional(swept, opt)) return {swept, sweep};

    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<ElementaryOp> ops;
        for (std::size_t i = 1; i < row.entries.size(); ++i) {
            Poly h = Poly::constant(nv, Rat(static_cast<long>(rng() % 5) - 2));
            for (std::size_t v = 0; v < nv; ++v) {
                long c = static_cast<long>(rng() % 5) - 2;
                if (c != 0) h = h + Poly::variable(nv, v) * Poly::constant(nv, Rat(c));
            }
            if (!h.is_zero()) ops.push_back({i, 0, h});
        }
        Row cand = apply_elementary(base, ops);
        if (detail::tail_zero_dimensional(cand, opt)) return {cand, ops};
    }
    throw ResourceAbort("prep_regular: retry budget (32) exhausted");
}

// --- weak Mennicke-symbol relation instances ---------------------------------

struct WmsInstance {
    Row row_x;
    Row row_one_minus_x;
    Row row_product;
};

struct WmsRejection {
    std::string failing;  // "x", "1-x", or "x(1-x)"
};

inline std::variant<WmsInstance, WmsRejection> wms_relation_instance(
    const Poly& x, const std::vector<Poly>& v, const RingSpec& ring,
    GroebnerOptions opt = {}) {
    std::size_t nv = ring.nvars();
    Poly one = Poly::constant(nv, 1);
    std::vector<std::pair<std::string, Poly>> firsts = {
        {"x", x}, {"1-x", one - x}, {"x(1-x)", x * (one - x)}};
    WmsInstance inst;
    for (std::size_t k = 0; k < firsts.size(); ++k) {
        Row r;
        r.ring = ring;
        r.entries.push_back(firsts[k].second);
        r.entries.insert(r.entries.end(), v.begin(), v.end());
        auto verdict = is_unimodular(r, opt);
        if (std::holds_alternative<Refutation>(verdict)) return WmsRejection{firsts[k].first};
        r.certificate = std::get<Certificate>(verdict);
        (k == 0 ? inst.row_x : k == 1 ? inst.row_one_minus_x : inst.row_product) = r;
    }
    return inst;
}

// --- rows from points on spheres ---------------------------------------------

// Recognizes Q[x_1..x_{d+1}]/(sum x_i^2 - 1).
inline bool is_sphere_spec(const RingSpec& ring) {
    if (ring.relations.size() != 1 || ring.nvars() < 2) return false;
    std::size_t nv = ring.nvars();
    Poly want(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        Monomial m(nv, 0);
        m[i] = 2;
        want = want + Poly::term(nv, m, 1);
    }
    want = want - Poly::constant(nv, 1);
    return ring.relations[0] == want || ring.relations[0] == (Poly(nv) - want);
}

enum class Pole { North, South };

// The row (a, x_1,...,x_d) with a affine-linear in x_{d+1}, a = alpha at the
// chosen pole and 1 at the opposite one.
inline Row row_from_point(const RingSpec& ring, Pole pole, const Rat& alpha,
                          GroebnerOptions opt = {}) {
    if (!is_sphere_spec(ring)) throw DomainError("row_from_point needs a sphere ring");
    if (alpha == 0) throw DomainError("row_from_point: alpha must be nonzero");
    std::size_t nv = ring.nvars();
    // a = u + v * x_last with a(pole) = alpha, a(-pole) = 1
    Rat u = (alpha + 1) / 2;
    Rat v = (alpha - 1) / 2;
    if (pole == Pole::South) v = -v;
    Poly a = Poly::constant(nv, u) + Poly::variable(nv, nv - 1) * Poly::constant(nv, v);
    Row r;
    r.ring = ring;
    r.entries.push_back(a);
    for (std::size_t i = 0; i + 1 < nv; ++i) r.entries.push_back(Poly::variable(nv, i));
    return certify(r, opt);
}

}  // namespace umrow
