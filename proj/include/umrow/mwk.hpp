#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/qform.hpp"
#include "umrow/rational.hpp"

namespace umrow {

// A word eta^k [a_1]...[a_m]; degree m - k. Slots are exact rationals whose
// meaning (and nonvanishing) is checked against a base field at evaluation.
struct MWWord {
    int eta = 0;
    std::vector<Rat> slots;

    int degree() const { return static_cast<int>(slots.size()) - eta; }

    friend bool operator==(const MWWord& a, const MWWord& b) {
        return a.eta == b.eta && a.slots == b.slots;
    }
};

// Integer combination of same-degree words.
struct MWExpr {
    std::optional<int> degree;
    std::vector<std::pair<mpz_class, MWWord>> terms;

    bool is_zero() const { return terms.empty(); }

    void add_term(const mpz_class& c, const MWWord& w) {
        if (c == 0) return;
        if (degree && *degree != w.degree())
            throw DomainError("mixed degrees in a symbol sum (" + std::to_string(*degree) +
                              " vs " + std::to_string(w.degree()) + ")");
        if (!degree) degree = w.degree();
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i].second == w) {
                terms[i].first += c;
                if (terms[i].first == 0) terms.erase(terms.begin() + i);
                return;
            }
        terms.push_back({c, w});
    }
};

inline MWExpr mw_scale(const mpz_class& c, const MWExpr& e) {
    MWExpr out;
    out.degree = e.degree;
    for (const auto& [coef, word] : e.terms) out.add_term(c * coef, word);
    return out;
}

inline MWExpr mw_add(const MWExpr& a, const MWExpr& b) {
    MWExpr out = a;
    if (!out.degree) out.degree = b.degree;
    for (const auto& [coef, word] : b.terms) out.add_term(coef, word);
    return out;
}

inline MWExpr mw_sub(const MWExpr& a, const MWExpr& b) { return mw_add(a, mw_scale(-1, b)); }

inline MWExpr mw_product(const MWExpr& a, const MWExpr& b) {
    MWExpr out;
    if (a.degree && b.degree) out.degree = *a.degree + *b.degree;
    for (const auto& [ca, wa] : a.terms)
        for (const auto& [cb, wb] : b.terms) {
            MWWord w;
            w.eta = wa.eta + wb.eta;
            w.slots = wa.slots;
            w.slots.insert(w.slots.end(), wb.slots.begin(), wb.slots.end());
            out.add_term(ca * cb, w);
        }
    return out;
}

inline MWExpr mw_symbol(const std::vector<Rat>& slots) {
    MWExpr e;
    MWWord w;
    w.slots = slots;
    e.add_term(1, w);
    return e;
}

inline MWExpr mw_eta(int power = 1) {
    MWExpr e;
    MWWord w;
    w.eta = power;
    e.add_term(1, w);
    return e;
}

inline MWExpr mw_int(const mpz_class& n) {
    MWExpr e;
    e.degree = 0;
    if (n != 0) e.add_term(n, MWWord{});
    return e;
}

// --- parser ---------------------------------------------------------------
//
// expr   := ['-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := integer | 'eta' | '[' rational ']'

namespace detail {

struct MWParser {
    const std::string& src;
    std::size_t pos = 0;

    explicit MWParser(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    MWExpr parse() {
        MWExpr acc = parse_signed_term(true);
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos;
            MWExpr t = parse_term();
            std::size_t at = pos;
            try {
                acc = (c == '+') ? mw_add(acc, t) : mw_sub(acc, t);
            } catch (const DomainError& e) {
                throw ParseError(e.what(), at);
            }
        }
        skip_ws();
        if (pos < src.size()) throw ParseError("syntax error", pos);
        return acc;
    }

    MWExpr parse_signed_term(bool allow_minus) {
        if (allow_minus && peek() == '-') {
            ++pos;
            return mw_scale(-1, parse_term());
        }
        return parse_term();
    }

    MWExpr parse_term() {
        MWExpr acc = parse_factor();
        while (peek() == '*') {
            ++pos;
            acc = mw_product(acc, parse_factor());
        }
        return acc;
    }

    mpz_class parse_integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
        std::size_t dstart = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == dstart) throw ParseError("expected integer", pos);
        return mpz_class(src.substr(start, pos - start));
    }

    MWExpr parse_factor() {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) return mw_int(parse_integer());
        if (c == '[') {
            std::size_t open = pos;
            ++pos;
            skip_ws();
            std::size_t start = pos;
            if (pos < src.size() && src[pos] == '-') ++pos;
            while (pos < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '/'))
                ++pos;
            if (pos == start) throw ParseError("expected rational literal in symbol slot", pos);
            Rat v;
            try {
                v = rat_from_string(src.substr(start, pos - start));
            } catch (const ParseError&) {
                throw ParseError("bad rational literal in symbol slot", start);
            }
            if (v == 0) throw ParseError("zero symbol slot", open);
            skip_ws();
            if (pos >= src.size() || src[pos] != ']') throw ParseError("expected ']'", pos);
            ++pos;
            return mw_symbol({v});
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string name = src.substr(start, pos - start);
            if (name == "eta") return mw_eta();
            throw ParseError("unknown symbol '" + name + "'", start);
        }
        throw ParseError("syntax error", pos);
    }
};

}  // namespace detail

inline MWExpr mw_parse(const std::string& text) {
    detail::MWParser p(text);
    return p.parse();
}

inline std::string mw_to_string(const MWExpr& e) {
    if (e.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [c, w] : e.terms) {
        mpz_class a = c;
        if (first) {
            if (a < 0) { out += "-"; a = -a; }
            first = false;
        } else {
            out += a < 0 ? "-" : "+";
            if (a < 0) a = -a;
        }
        std::string word;
        for (int i = 0; i < w.eta; ++i) word += word.empty() ? "eta" : "*eta";
        for (const auto& s : w.slots)
            word += (word.empty() ? "[" : "*[") + rat_to_string(s) + "]";
        if (word.empty()) out += a.get_str();
        else if (a == 1) out += word;
        else out += a.get_str() + "*" + word;
    }
    return out;
}

// --- evaluation ------------------------------------------------------------

struct MilnorRep {
    // Absent: negative degree (no Milnor part). Trivial: the zero group
    // (F_p in degree >= 2, C in degree >= 1).
    enum class Group { Absent, Z, Z2, ZModP1, Trivial };
    Group group = Group::Absent;
    mpz_class value = 0;
    long modulus = 0;  // p-1 for ZModP1

    friend bool operator==(const MilnorRep& a, const MilnorRep& b) {
        return a.group == b.group && a.value == b.value && a.modulus == b.modulus;
    }
};

// The Milnor realization group for a given base and degree.
inline MilnorRep milnor_zero(const BaseField& base, int n) {
    MilnorRep m;
    if (n < 0) {
        m.group = MilnorRep::Group::Absent;
    } else if (n == 0) {
        m.group = MilnorRep::Group::Z;
    } else if (base.kind == FieldKind::Reals) {
        m.group = MilnorRep::Group::Z2;
    } else if (base.kind == FieldKind::PrimeField && n == 1) {
        m.group = MilnorRep::Group::ZModP1;
        m.modulus = base.p - 1;
    } else {
        m.group = MilnorRep::Group::Trivial;
    }
    return m;
}

inline void milnor_reduce(MilnorRep& m) {
    switch (m.group) {
        case MilnorRep::Group::Z2:
            m.value = ((m.value % 2) + 2) % 2;
            break;
        case MilnorRep::Group::ZModP1: {
            mpz_class mod(m.modulus);
            m.value = ((m.value % mod) + mod) % mod;
            break;
        }
        case MilnorRep::Group::Trivial:
            m.value = 0;
            break;
        default:
            break;
    }
}

struct GnValue {
    int degree = 0;
    BaseField base;
    MilnorRep milnor;
    DiagonalForm witt;  // anisotropic representative of the class in I^max(degree,0)
    bool compatible = false;
};

inline bool gn_equal(const GnValue& a, const GnValue& b) {
    if (a.degree != b.degree || !(a.base == b.base)) return false;
    if (!(a.milnor == b.milnor)) return false;
    return witt_equal(a.witt, b.witt);
}

namespace detail {

inline long fp_primitive_root(long p) {
    std::vector<long> prime_factors;
    long m = p - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_factors.push_back(m);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long q : prime_factors) {
            long e = (p - 1) / q, r = 1, base = g;
            while (e) {
                if (e & 1) r = (r * base) % p;
                base = (base * base) % p;
                e >>= 1;
            }
            if (r == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw DomainError("no primitive root found");
}

inline long fp_dlog(long a, long p, long g) {
    if (p > 1000000) throw DomainError("prime too large for the discrete-log realization");
    long cur = 1;
    for (long e = 0; e < p - 1; ++e) {
        if (cur == ((a % p) + p) % p) return e;
        cur = (cur * g) % p;
    }
    throw DomainError("dlog of zero");
}

inline void check_slot_nonzero(const Rat& a, const BaseField& base) {
    if (elem_is_zero(FieldElem(a), base))
        throw DomainError("symbol slot " + rat_to_string(a) + " vanishes in " + base.name());
}

// Asserts the I^n constraint and recomputes the fiber-compatibility witness
// (milnor mod 2 vs witt mod I^{n+1} under s_n, where decidable).
inline void finish_gn(GnValue& v) {
    int n = v.degree;
    if (!in_fundamental_power(v.witt, n))
        throw DomainError("internal: Witt part escapes I^" + std::to_string(n));
    v.compatible = true;
    if (n >= 1) {
        switch (v.base.kind) {
            case FieldKind::Reals: {
                long long s = signature(v.witt);
                long q = static_cast<long>((s / (1LL << n)) % 2);  // exact by I^n membership
                v.compatible = mpz_class((q + 2) % 2) == v.milnor.value;
                break;
            }
            case FieldKind::PrimeField: {
                if (n == 1) {
                    bool disc_nonsquare =
                        v.witt.dim() > 0 &&
                        !fp_is_square(fp_reduce(signed_disc_rat(v.witt), v.base.p), v.base.p);
                    bool milnor_odd = (v.milnor.value % 2) == 1;
                    v.compatible = (disc_nonsquare == milnor_odd);
                }
                break;
            }
            default:
                break;
        }
    } else if (n == 0) {
        // rank parity must match the dim parity of the Witt class
        mpz_class rank_par = ((v.milnor.value % 2) + 2) % 2;
        v.compatible = rank_par == mpz_class(v.witt.dim() % 2);
    }
}

}  // namespace detail

// Evaluates a symbol expression in G^n of the base field: the Milnor
// realization (with eta killed) paired with the Witt class of the associated
// tensor of binary forms, plus the fiber-compatibility bit.
inline GnValue mw_eval(const MWExpr& e, const BaseField& base) {
    if (base.kind == FieldKind::Rationals || base.kind == FieldKind::RationalFunctionQ)
        throw DomainError("mw_eval: base field " + base.name() + " is not supported");
    GnValue out;
    out.base = base;
    out.degree = e.degree.value_or(0);
    int n = out.degree;
    out.milnor = milnor_zero(base, n);

    DiagonalForm acc;
    acc.base = base;
    long g = 0;
    if (out.milnor.group == MilnorRep::Group::ZModP1) g = detail::fp_primitive_root(base.p);

    for (const auto& [c, w] : e.terms) {
        if (mpz_class(c > 0 ? c : -c) > 4096)
            throw ResourceAbort("mw_eval: coefficient magnitude exceeds 4096");
        for (const auto& s : w.slots) detail::check_slot_nonzero(s, base);
        // Witt part: tensor of <-1, a_i>, c times.
        DiagonalForm form;
        form.base = base;
        form.entries = {FieldElem(Rat(1))};
        for (const auto& s : w.slots) {
            DiagonalForm bin;
            bin.base = base;
            bin.entries = {FieldElem(Rat(-1)), FieldElem(s)};
            form = form_tensor(form, bin);
        }
        mpz_class reps = c > 0 ? c : mpz_class(-c);
        DiagonalForm signed_form = (c > 0) ? form : form_scale(form, FieldElem(Rat(-1)));
        for (mpz_class i = 0; i < reps; ++i) acc = form_sum(acc, signed_form);

        // Milnor part: eta kills the word.
        if (w.eta > 0) continue;
        switch (out.milnor.group) {
            case MilnorRep::Group::Z:
                out.milnor.value += c;
                break;
            case MilnorRep::Group::Z2: {
                int bit = 1;
                for (const auto& s : w.slots)
                    if (rat_sign(s) > 0) bit = 0;
                out.milnor.value += c * bit;
                break;
            }
            case MilnorRep::Group::ZModP1: {
                long a = fp_reduce(w.slots[0], base.p);
                out.milnor.value += c * detail::fp_dlog(a, base.p, g);
                break;
            }
            default:
                break;
        }
    }
    milnor_reduce(out.milnor);

    out.witt = witt_decompose(acc).anisotropic;
    detail::finish_gn(out);
    return out;
}

// Componentwise product on evaluated values (the ring structure of the fiber
// product); mw_eval is a homomorphism onto this.
inline GnValue gn_product(const GnValue& a, const GnValue& b) {
    if (!(a.base == b.base)) throw DomainError("gn_product: base field mismatch");
    GnValue out;
    out.base = a.base;
    out.degree = a.degree + b.degree;
    out.milnor = milnor_zero(out.base, out.degree);
    // Values multiply inside the realization; factors with no Milnor part
    // (negative degree) or a trivial group contribute zero.
    auto live = [](const MilnorRep& m) {
        return m.group != MilnorRep::Group::Absent && m.group != MilnorRep::Group::Trivial;
    };
    if (live(out.milnor) && live(a.milnor) && live(b.milnor))
        out.milnor.value = a.milnor.value * b.milnor.value;
    milnor_reduce(out.milnor);
    out.witt = witt_decompose(form_tensor(a.witt, b.witt)).anisotropic;
    detail::finish_gn(out);
    return out;
}

inline MilnorRep mw_to_milnor(const MWExpr& e, const BaseField& base) {
    return mw_eval(e, base).milnor;
}

inline DiagonalForm mw_to_witt(const MWExpr& e, const BaseField& base) {
    return mw_eval(e, base).witt;
}

// The defining relations, checked by evaluation. Returns true when both sides
// agree as G^n values.
inline bool mw_relation_check(int which, const std::vector<Rat>& args, const BaseField& base) {
    switch (which) {
        case 1: {
            if (args.size() != 2) throw DomainError("relation 1 takes two arguments");
            const Rat &a = args[0], &b = args[1];
            MWExpr lhs = mw_symbol({a * b});
            MWExpr rhs = mw_add(mw_add(mw_symbol({a}), mw_symbol({b})),
                                mw_product(mw_eta(), mw_symbol({a, b})));
            return gn_equal(mw_eval(lhs, base), mw_eval(rhs, base));
        }
        case 2: {
            if (args.size() != 1) throw DomainError("relation 2 takes one argument");
            const Rat& a = args[0];
            if (a == 0 || a == 1) throw DomainError("relation 2 requires a outside {0, 1}");
            MWExpr lhs = mw_symbol({a, Rat(1) - a});
            GnValue v = mw_eval(lhs, base);
            MWExpr zero;
            zero.degree = 2;
            return gn_equal(v, mw_eval(zero, base));
        }
        case 3: {
            MWExpr inner = mw_add(mw_product(mw_eta(), mw_symbol({Rat(-1)})), mw_int(2));
            MWExpr lhs = mw_product(mw_eta(), inner);
            MWExpr zero;
            zero.degree = -1;
            return gn_equal(mw_eval(lhs, base), mw_eval(zero, base));
        }
        case 4: {
            if (args.size() != 1) throw DomainError("relation 4 takes one argument");
            MWExpr lhs = mw_product(mw_eta(), mw_symbol({args[0]}));
            MWExpr rhs = mw_product(mw_symbol({args[0]}), mw_eta());
            return gn_equal(mw_eval(lhs, base), mw_eval(rhs, base));
        }
        default:
            throw DomainError("unknown relation id " + std::to_string(which));
    }
}

}  // namespace umrow
