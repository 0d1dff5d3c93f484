#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/rational.hpp"
#include "umrow/upoly.hpp"

namespace umrow {

enum class FieldKind { Reals, Complexes, Rationals, PrimeField, RationalFunctionQ };

struct BaseField {
    FieldKind kind = FieldKind::Rationals;
    long p = 0;

    static BaseField reals() { return {FieldKind::Reals, 0}; }
    static BaseField complexes() { return {FieldKind::Complexes, 0}; }
    static BaseField rationals() { return {FieldKind::Rationals, 0}; }
    static BaseField prime(long p) {
        if (p < 3 || p % 2 == 0) throw DomainError("prime field requires an odd prime");
        for (long d = 3; d * d <= p; d += 2)
            if (p % d == 0) throw DomainError("prime field requires an odd prime");
        return {FieldKind::PrimeField, p};
    }
    static BaseField rational_function() { return {FieldKind::RationalFunctionQ, 0}; }

    friend bool operator==(const BaseField& a, const BaseField& b) {
        return a.kind == b.kind && a.p == b.p;
    }

    std::string name() const {
        switch (kind) {
            case FieldKind::Reals: return "R";
            case FieldKind::Complexes: return "C";
            case FieldKind::Rationals: return "Q";
            case FieldKind::PrimeField: return "F" + std::to_string(p);
            case FieldKind::RationalFunctionQ: return "Q(t)";
        }
        return "?";
    }
};

// Entries are exact rationals for R, C, Q and F_p (reduced mod p on demand),
// and rational functions over Q(t).
using FieldElem = std::variant<Rat, RationalFunction>;

inline bool elem_is_zero(const FieldElem& e, const BaseField& base) {
    if (std::holds_alternative<RationalFunction>(e))
        return std::get<RationalFunction>(e).is_zero();
    const Rat& q = std::get<Rat>(e);
    if (base.kind == FieldKind::PrimeField) {
        if (q.get_den() % base.p == 0) throw DomainError("entry has p in the denominator");
        return q.get_num() % base.p == 0;
    }
    return q == 0;
}

// --- F_p helpers ---------------------------------------------------------

inline long fp_reduce(const Rat& q, long p) {
    mpz_class den = q.get_den() % p;
    if (den == 0) throw DomainError("entry has p in the denominator");
    long n = mpz_class((q.get_num() % p + p) % p).get_si();
    long d = mpz_class((den + p) % p).get_si();
    long inv = 1, base = d, e = p - 2;
    while (e) {
        if (e & 1) inv = (inv * base) % p;
        base = (base * base) % p;
        e >>= 1;
    }
    return (n * inv) % p;
}

inline bool fp_is_square(long a, long p) {
    a = ((a % p) + p) % p;
    if (a == 0) throw DomainError("square test of zero");
    long r = 1, base = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = (r * base) % p;
        base = (base * base) % p;
        e >>= 1;
    }
    return r == 1;
}

inline long fp_least_nonsquare(long p) {
    for (long a = 2; a < p; ++a)
        if (!fp_is_square(a, p)) return a;
    throw DomainError("no nonsquare found");
}

// --- Diagonal forms ------------------------------------------------------

struct DiagonalForm {
    BaseField base;
    std::vector<FieldElem> entries;

    std::size_t dim() const { return entries.size(); }

    void validate() const {
        for (const auto& e : entries) {
            if (elem_is_zero(e, base)) throw DomainError("zero entry in diagonal form");
            bool is_rf = std::holds_alternative<RationalFunction>(e);
            if (is_rf != (base.kind == FieldKind::RationalFunctionQ))
                throw DomainError("entry type does not match base field");
        }
    }
};

inline DiagonalForm form_make(BaseField base, std::vector<FieldElem> entries) {
    DiagonalForm f{std::move(base), std::move(entries)};
    f.validate();
    return f;
}

inline DiagonalForm form_from_rats(BaseField base, const std::vector<Rat>& entries) {
    std::vector<FieldElem> es(entries.begin(), entries.end());
    return form_make(std::move(base), std::move(es));
}

inline DiagonalForm form_sum(const DiagonalForm& a, const DiagonalForm& b) {
    if (!(a.base == b.base)) throw DomainError("base field mismatch");
    DiagonalForm out = a;
    out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
    return out;
}

inline FieldElem elem_mul(const FieldElem& x, const FieldElem& y) {
    if (std::holds_alternative<Rat>(x) && std::holds_alternative<Rat>(y))
        return std::get<Rat>(x) * std::get<Rat>(y);
    if (std::holds_alternative<RationalFunction>(x) && std::holds_alternative<RationalFunction>(y))
        return std::get<RationalFunction>(x) * std::get<RationalFunction>(y);
    throw DomainError("mixed field elements");
}

inline DiagonalForm form_tensor(const DiagonalForm& a, const DiagonalForm& b) {
    if (!(a.base == b.base)) throw DomainError("base field mismatch");
    DiagonalForm out;
    out.base = a.base;
    for (const auto& x : a.entries)
        for (const auto& y : b.entries) out.entries.push_back(elem_mul(x, y));
    out.validate();
    return out;
}

inline DiagonalForm form_scale(const DiagonalForm& a, const FieldElem& s) {
    if (elem_is_zero(s, a.base)) throw DomainError("scaling a form by zero");
    DiagonalForm out;
    out.base = a.base;
    for (const auto& x : a.entries) out.entries.push_back(elem_mul(x, s));
    return out;
}

inline DiagonalForm form_neg(const DiagonalForm& a) {
    DiagonalForm out;
    out.base = a.base;
    for (const auto& x : a.entries) {
        if (std::holds_alternative<Rat>(x)) out.entries.push_back(-std::get<Rat>(x));
        else out.entries.push_back(-std::get<RationalFunction>(x));
    }
    return out;
}

// n-fold Pfister form <<a_1,...,a_n>> = tensor of <1, -a_i>.
inline DiagonalForm pfister(const BaseField& base, const std::vector<FieldElem>& slots) {
    DiagonalForm out;
    out.base = base;
    out.entries = {FieldElem(Rat(1))};
    if (base.kind == FieldKind::RationalFunctionQ)
        out.entries = {FieldElem(RationalFunction::constant(Rat(1)))};
    for (const auto& a : slots) {
        if (elem_is_zero(a, base)) throw DomainError("pfister: zero slot");
        DiagonalForm step;
        step.base = base;
        if (std::holds_alternative<Rat>(a)) {
            step.entries = {FieldElem(Rat(1)), FieldElem(-std::get<Rat>(a))};
        } else {
            step.entries = {FieldElem(RationalFunction::constant(Rat(1))),
                            FieldElem(-std::get<RationalFunction>(a))};
        }
        out = form_tensor(out, step);
    }
    return out;
}

inline long long signature(const DiagonalForm& f) {
    if (f.base.kind != FieldKind::Reals && f.base.kind != FieldKind::Rationals)
        throw DomainError("signature requires an ordered base (R or Q)");
    long long s = 0;
    for (const auto& e : f.entries) s += rat_sign(std::get<Rat>(e));
    return s;
}

// Signed discriminant (-1)^{n(n-1)/2} * det as an exact field element.
inline Rat signed_disc_rat(const DiagonalForm& f) {
    Rat d(1);
    for (const auto& e : f.entries) d *= std::get<Rat>(e);
    std::size_t n = f.dim();
    if (((n * (n - 1)) / 2) % 2 == 1) d = -d;
    return d;
}

// --- Witt decomposition --------------------------------------------------

struct WittDecomposition {
    DiagonalForm anisotropic;
    std::size_t witt_index = 0;
};

inline WittDecomposition witt_decompose(const DiagonalForm& f) {
    f.validate();
    WittDecomposition out;
    out.anisotropic.base = f.base;
    switch (f.base.kind) {
        case FieldKind::Reals: {
            long long pos = 0, neg = 0;
            for (const auto& e : f.entries) (rat_sign(std::get<Rat>(e)) > 0 ? pos : neg)++;
            out.witt_index = static_cast<std::size_t>(std::min(pos, neg));
            long long s = pos - neg;
            for (long long i = 0; i < (s > 0 ? s : -s); ++i)
                out.anisotropic.entries.push_back(Rat(s > 0 ? 1 : -1));
            return out;
        }
        case FieldKind::Complexes: {
            out.witt_index = f.dim() / 2;
            if (f.dim() % 2) out.anisotropic.entries.push_back(Rat(1));
            return out;
        }
        case FieldKind::PrimeField: {
            long p = f.base.p;
            std::size_t n = f.dim();
            long det = 1;
            for (const auto& e : f.entries) det = (det * fp_reduce(std::get<Rat>(e), p)) % p;
            long dpm = det;
            if (((n * (n - 1)) / 2) % 2 == 1) dpm = (p - dpm) % p;
            bool disc_square = n == 0 ? true : fp_is_square(dpm, p);
            long ns = fp_least_nonsquare(p);
            if (n % 2 == 0) {
                // Even dimension: the class is zero iff the signed
                // discriminant is a square; otherwise the anisotropic part is
                // the unique binary form <1, -ns> with signed disc ns.
                if (!disc_square)
                    out.anisotropic.entries = {FieldElem(Rat(1)), FieldElem(Rat(-ns))};
            } else {
                long rep = disc_square ? 1 : ns;
                out.anisotropic.entries = {FieldElem(Rat(rep))};
            }
            out.witt_index = (n - out.anisotropic.entries.size()) / 2;
            return out;
        }
        default:
            throw DomainError("witt_decompose: base field " + f.base.name() +
                              " has no decision procedure here");
    }
}

inline bool witt_is_zero(const DiagonalForm& f) {
    return witt_decompose(f).anisotropic.dim() == 0;
}

inline bool witt_equal(const DiagonalForm& f, const DiagonalForm& g) {
    if (!(f.base == g.base)) throw DomainError("base field mismatch");
    return witt_is_zero(form_sum(f, form_neg(g)));
}

// Membership of the Witt class in I^n, for the decidable bases.
inline bool in_fundamental_power(const DiagonalForm& f, int n) {
    f.validate();
    if (n <= 0) return true;
    switch (f.base.kind) {
        case FieldKind::Reals: {
            // I^n(R) is generated by the 2^n-dimensional Pfister class, so
            // membership is divisibility of the signature by 2^n.
            long long s = signature(f);
            if (s == 0) return true;
            if (n >= 62) return false;
            return s % (1LL << n) == 0;
        }
        case FieldKind::Complexes: {
            return f.dim() % 2 == 0;
        }
        case FieldKind::PrimeField: {
            if (f.dim() % 2 != 0) return false;
            if (n == 1) return true;
            // I^2 = 0 over a finite field: need the class to vanish.
            return witt_is_zero(f);
        }
        default:
            throw DomainError("in_fundamental_power: base field " + f.base.name() +
                              " has no decision procedure here");
    }
}

// --- Second residue over Q(t) --------------------------------------------

struct Place {
    // Degree-1 monic polynomial t - c, or infinity.
    bool at_infinity = false;
    UPoly pi;  // valid when !at_infinity

    static Place infinity() { return {true, UPoly()}; }
    static Place linear(const UPoly& poly) {
        if (poly.degree() != 1)
            throw DomainError("only degree-1 places and infinity are supported");
        Place pl;
        pl.at_infinity = false;
        pl.pi = upoly_monic(poly);
        return pl;
    }
    Rat root() const {
        if (at_infinity) throw DomainError("infinity has no root");
        return -pi.coeff(0);
    }
};

inline int rf_valuation(const RationalFunction& f, const Place& pl, Rat* unit_value) {
    if (f.is_zero()) throw DomainError("valuation of zero entry");
    if (pl.at_infinity) {
        int val = f.den.degree() - f.num.degree();
        if (unit_value) *unit_value = f.num.lc() / f.den.lc();
        return val;
    }
    auto [kn, un] = upoly_valuation(f.num, pl.pi);
    auto [kd, ud] = upoly_valuation(f.den, pl.pi);
    if (unit_value) {
        Rat c = pl.root();
        *unit_value = un.eval(c) / ud.eval(c);
    }
    return kn - kd;
}

// Second residue homomorphism: keep odd-valuation entries, evaluate their
// unit parts in the residue field Q.
inline DiagonalForm residue_second(const DiagonalForm& f, const Place& pl) {
    if (f.base.kind != FieldKind::RationalFunctionQ)
        throw DomainError("residue_second expects a form over Q(t)");
    f.validate();
    DiagonalForm out;
    out.base = BaseField::rationals();
    for (const auto& e : f.entries) {
        const auto& rf = std::get<RationalFunction>(e);
        Rat u;
        int val = rf_valuation(rf, pl, &u);
        if (val % 2 != 0) out.entries.push_back(u);
    }
    return out;
}

// --- Witt equality over Q(t) via residues + splitting ---------------------

enum class WittVerdictKind { Equal, Unequal, Undecided };

struct WittVerdict {
    WittVerdictKind verdict = WittVerdictKind::Undecided;
    std::string reason;
};

namespace detail {

inline bool factors_over(const UPoly& p, const std::vector<UPoly>& base) {
    UPoly u = p;
    for (const auto& b : base) {
        if (b.degree() < 1) throw DomainError("constant factor-base element");
        u = upoly_valuation(u, b).second;
    }
    return u.degree() == 0;
}

// Witt-class invariants of a diagonal form over Q: (dim mod 2, signature,
// signed discriminant square class). Equal classes have equal triples.
struct QClassInvariants {
    int parity;
    long long sig;
    mpz_class disc;
    friend bool operator==(const QClassInvariants&, const QClassInvariants&) = default;
};

inline QClassInvariants q_invariants(const DiagonalForm& f) {
    QClassInvariants out{};
    out.parity = static_cast<int>(f.dim() % 2);
    out.sig = 0;
    Rat d(1);
    for (const auto& e : f.entries) {
        out.sig += rat_sign(std::get<Rat>(e));
        d *= std::get<Rat>(e);
    }
    std::size_t n = f.dim();
    if (((n * (n - 1)) / 2) % 2 == 1) d = -d;
    out.disc = (n == 0) ? mpz_class(1) : rat_square_class(d);
    return out;
}

// Symmetric congruence diagonalization over Q(t); returns the diagonal.
inline std::vector<RationalFunction> rf_diagonalize(
    std::vector<std::vector<RationalFunction>> m) {
    std::size_t n = m.size();
    std::vector<RationalFunction> diag;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (!m[i][i].is_zero()) { piv = i; break; }
        if (piv == n) {
            std::size_t oi = n, oj = n;
            for (std::size_t i = k; i < n && oi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!m[i][j].is_zero()) { oi = i; oj = j; break; }
            if (oi == n) break;
            for (std::size_t c = 0; c < n; ++c) m[oi][c] = m[oi][c] + m[oj][c];
            for (std::size_t r = 0; r < n; ++r) m[r][oi] = m[r][oi] + m[r][oj];
            piv = oi;
        }
        if (piv != k) {
            std::swap(m[piv], m[k]);
            for (std::size_t r = 0; r < n; ++r) std::swap(m[r][piv], m[r][k]);
        }
        RationalFunction d = m[k][k];
        diag.push_back(d);
        for (std::size_t r = k + 1; r < n; ++r) {
            if (m[r][k].is_zero()) continue;
            RationalFunction f = m[r][k] / d;
            for (std::size_t c = 0; c < n; ++c) m[r][c] = m[r][c] - f * m[k][c];
            for (std::size_t c = 0; c < n; ++c) m[c][r] = m[c][r] - f * m[c][k];
        }
    }
    return diag;
}

// Tries to prove that the diagonal form with the given entries is hyperbolic
// by explicit pair cancellation and bounded isotropic-vector search.
inline bool prove_hyperbolic(std::vector<RationalFunction> d,
                             const std::vector<UPoly>& factor_base, int depth = 0) {
    if (depth > 16) return false;
    // cancel pairs whose ratio is minus a square
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < d.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < d.size() && !changed; ++j) {
                if (rf_is_square(-(d[i] / d[j]))) {
                    d.erase(d.begin() + j);
                    d.erase(d.begin() + i);
                    changed = true;
                }
            }
    }
    if (d.empty()) return true;
    if (d.size() % 2 != 0 || d.size() > 6) return false;

    std::vector<RationalFunction> candidates = {RationalFunction::constant(Rat(0)),
                                                RationalFunction::constant(Rat(1)),
                                                RationalFunction::constant(Rat(-1))};
    for (const auto& b : factor_base) {
        candidates.push_back(RationalFunction::from_poly(b));
        candidates.push_back(-RationalFunction::from_poly(b));
    }

    std::size_t n = d.size();
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        RationalFunction s;
        bool nonzero_vec = false;
        std::vector<RationalFunction> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = candidates[pick[i]];
            if (!v[i].is_zero()) nonzero_vec = true;
            s = s + d[i] * v[i] * v[i];
        }
        if (nonzero_vec && s.is_zero()) {
            // split off the hyperbolic plane spanned by v and a partner
            std::size_t k = n;
            RationalFunction bu;
            for (std::size_t i = 0; i < n; ++i) {
                if (!v[i].is_zero()) { k = i; bu = d[i] * v[i]; break; }
            }
            std::vector<RationalFunction> u1 = v;
            // w = e_k scaled so B(v, w) = 1
            std::vector<RationalFunction> w(n);
            w[k] = RationalFunction::constant(Rat(1)) / bu;
            // make w isotropic: w' = w - (B(w,w)/2) v
            RationalFunction bww = d[k] * w[k] * w[k];
            RationalFunction half = RationalFunction::constant(Rat(1, 2));
            std::vector<RationalFunction> w2(n);
            for (std::size_t i = 0; i < n; ++i) w2[i] = w[i] - half * bww * v[i];
            // complement: c_i = e_i - B(e_i, w2) u1 - B(e_i, u1) w2
            std::vector<std::vector<RationalFunction>> comp;
            for (std::size_t i = 0; i < n; ++i) {
                RationalFunction biw = d[i] * w2[i];
                RationalFunction biu = d[i] * v[i];
                std::vector<RationalFunction> c(n);
                for (std::size_t t2 = 0; t2 < n; ++t2) {
                    c[t2] = (t2 == i ? RationalFunction::constant(Rat(1)) : RationalFunction());
                    c[t2] = c[t2] - biw * u1[t2] - biu * w2[t2];
                }
                comp.push_back(std::move(c));
            }
            // choose n-2 independent rows by Gaussian elimination
            std::vector<std::vector<RationalFunction>> rows;
            std::vector<std::vector<RationalFunction>> echelon;
            for (auto& c : comp) {
                std::vector<RationalFunction> red = c;
                for (const auto& e : echelon) {
                    std::size_t lead = 0;
                    while (lead < n && e[lead].is_zero()) ++lead;
                    if (lead < n && !red[lead].is_zero()) {
                        RationalFunction f = red[lead] / e[lead];
                        for (std::size_t t2 = 0; t2 < n; ++t2)
                            red[t2] = red[t2] - f * e[t2];
                    }
                }
                bool zero = true;
                for (const auto& x : red)
                    if (!x.is_zero()) { zero = false; break; }
                if (!zero) {
                    echelon.push_back(red);
                    rows.push_back(c);
                    if (rows.size() == n - 2) break;
                }
            }
            if (rows.size() != n - 2) return false;
            std::vector<std::vector<RationalFunction>> gram(
                n - 2, std::vector<RationalFunction>(n - 2));
            for (std::size_t a = 0; a < n - 2; ++a)
                for (std::size_t b = a; b < n - 2; ++b) {
                    RationalFunction s2;
                    for (std::size_t t2 = 0; t2 < n; ++t2)
                        s2 = s2 + d[t2] * rows[a][t2] * rows[b][t2];
                    gram[a][b] = s2;
                    gram[b][a] = s2;
                }
            auto diag = rf_diagonalize(gram);
            if (diag.size() != n - 2) return false;
            return prove_hyperbolic(diag, factor_base, depth + 1);
        }
        // next candidate vector
        std::size_t i = 0;
        while (i < n) {
            if (++pick[i] < candidates.size()) break;
            pick[i] = 0;
            ++i;
        }
        if (i == n) break;
    }
    return false;
}

}  // namespace detail

inline WittVerdict witt_equal_via_residues(const DiagonalForm& f, const DiagonalForm& g,
                                           const std::vector<UPoly>& factor_base) {
    if (f.base.kind != FieldKind::RationalFunctionQ ||
        g.base.kind != FieldKind::RationalFunctionQ)
        throw DomainError("witt_equal_via_residues expects forms over Q(t)");
    f.validate();
    g.validate();

    if (f.dim() % 2 != g.dim() % 2)
        return {WittVerdictKind::Unequal, "rank parity differs"};

    // every entry must factor over the factor base
    for (const auto* form : {&f, &g})
        for (const auto& e : form->entries) {
            const auto& rf = std::get<RationalFunction>(e);
            if (!detail::factors_over(rf.num, factor_base) ||
                !detail::factors_over(rf.den, factor_base))
                return {WittVerdictKind::Undecided,
                        "an entry does not factor over the supplied factor base"};
        }

    // residues at the degree-1 places of the factor base and at infinity
    for (const auto& b : factor_base) {
        if (b.degree() != 1) continue;
        Place pl = Place::linear(b);
        auto inv_f = detail::q_invariants(residue_second(f, pl));
        auto inv_g = detail::q_invariants(residue_second(g, pl));
        if (!(inv_f == inv_g))
            return {WittVerdictKind::Unequal,
                    "second residues differ at t=" + rat_to_string(pl.root())};
    }
    {
        auto inv_f = detail::q_invariants(residue_second(f, Place::infinity()));
        auto inv_g = detail::q_invariants(residue_second(g, Place::infinity()));
        if (!(inv_f == inv_g))
            return {WittVerdictKind::Unequal, "second residues differ at infinity"};
    }

    // real specializations
    for (long num = -9; num <= 9; ++num) {
        for (long den = 1; den <= 3; ++den) {
            Rat c{num, den};
            c.canonicalize();
            long long sf = 0, sg = 0;
            bool ok = true;
            for (const auto* form : {&f, &g})
                for (const auto& e : form->entries) {
                    auto v = std::get<RationalFunction>(e).eval(c);
                    if (!v || *v == 0) { ok = false; break; }
                }
            if (!ok) continue;
            for (const auto& e : f.entries) sf += rat_sign(*std::get<RationalFunction>(e).eval(c));
            for (const auto& e : g.entries) sg += rat_sign(*std::get<RationalFunction>(e).eval(c));
            if (sf != sg)
                return {WittVerdictKind::Unequal,
                        "signatures differ under specialization t=" + rat_to_string(c)};
        }
    }

    // attempt an explicit hyperbolicity proof of f + (-g)
    std::vector<RationalFunction> diff;
    for (const auto& e : f.entries) diff.push_back(std::get<RationalFunction>(e));
    for (const auto& e : g.entries) diff.push_back(-std::get<RationalFunction>(e));
    if (detail::prove_hyperbolic(diff, factor_base))
        return {WittVerdictKind::Equal, "explicit splitting of the difference form"};

    return {WittVerdictKind::Undecided, "no sound invariant differs and no splitting found"};
}

}  // namespace umrow
