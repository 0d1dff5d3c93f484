#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/matrix.hpp"
#include "umrow/rational.hpp"

namespace umrow {

using Monomial = std::vector<int>;

enum class MonomialOrder { Degrevlex, Lex };

inline int mono_degree(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

// Returns <0, 0, >0 as a is smaller, equal, larger than b in the given order.
// Significance follows variable index: index 0 is the most significant.
inline int mono_cmp(const Monomial& a, const Monomial& b, MonomialOrder ord) {
    if (ord == MonomialOrder::Lex) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    int da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    return 0;
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

struct Term {
    Monomial mono;
    Rat coef;
};

// Sparse multivariate polynomial over Q. Terms are kept sorted descending in
// degrevlex (the canonical order) with no zero coefficients; this makes the
// representation and the printed form canonical regardless of the order a
// Groebner computation runs under.
class Poly {
  public:
    Poly() : nvars_(0) {}
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const Rat& c) {
        Poly p(nvars);
        if (c != 0) p.terms_.push_back({Monomial(nvars, 0), c});
        return p;
    }

    static Poly variable(std::size_t nvars, std::size_t idx) {
        Poly p(nvars);
        Monomial m(nvars, 0);
        m[idx] = 1;
        p.terms_.push_back({std::move(m), Rat(1)});
        return p;
    }

    static Poly term(std::size_t nvars, Monomial m, const Rat& c) {
        Poly p(nvars);
        if (c != 0) p.terms_.push_back({std::move(m), c});
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && mono_degree(terms_[0].mono) == 0);
    }

    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        if (!is_constant()) throw DomainError("polynomial is not constant");
        return terms_[0].coef;
    }

    int total_degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max(d, mono_degree(t.mono));
        return d;
    }

    // Leading term with respect to an arbitrary order.
    const Term& leading(MonomialOrder ord) const {
        if (terms_.empty()) throw DomainError("leading term of zero polynomial");
        if (ord == MonomialOrder::Degrevlex) return terms_.front();
        std::size_t best = 0;
        for (std::size_t i = 1; i < terms_.size(); ++i)
            if (mono_cmp(terms_[i].mono, terms_[best].mono, ord) > 0) best = i;
        return terms_[best];
    }

    friend Poly operator-(const Poly& p) {
        Poly r(p.nvars_);
        r.terms_.reserve(p.terms_.size());
        for (const auto& t : p.terms_) r.terms_.push_back({t.mono, -t.coef});
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        if (a.nvars_ != b.nvars_) throw RingMismatchError("polynomial arity mismatch");
        Poly r(a.nvars_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            int c = mono_cmp(a.terms_[i].mono, b.terms_[j].mono, MonomialOrder::Degrevlex);
            if (c > 0) r.terms_.push_back(a.terms_[i++]);
            else if (c < 0) r.terms_.push_back(b.terms_[j++]);
            else {
                Rat s = a.terms_[i].coef + b.terms_[j].coef;
                if (s != 0) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
                ++i; ++j;
            }
        }
        for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    // Multiplication by a single term; any monomial order is multiplicative,
    // so sortedness is preserved.
    Poly times_term(const Monomial& m, const Rat& c) const {
        Poly r(nvars_);
        if (c == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({mono_mul(t.mono, m), t.coef * c});
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.nvars_ != b.nvars_) throw RingMismatchError("polynomial arity mismatch");
        struct Cmp {
            bool operator()(const Monomial& x, const Monomial& y) const {
                return mono_cmp(x, y, MonomialOrder::Degrevlex) > 0;
            }
        };
        std::map<Monomial, Rat, Cmp> acc;
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                Monomial m = mono_mul(ta.mono, tb.mono);
                auto it = acc.find(m);
                if (it == acc.end()) acc.emplace(std::move(m), ta.coef * tb.coef);
                else it->second += ta.coef * tb.coef;
            }
        Poly r(a.nvars_);
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.terms_.push_back({m, std::move(c)});
        return r;
    }

    friend Poly operator*(const Rat& c, const Poly& p) {
        Poly r(p.nvars_);
        if (c == 0) return r;
        r.terms_.reserve(p.terms_.size());
        for (const auto& t : p.terms_) r.terms_.push_back({t.mono, c * t.coef});
        return r;
    }

    Poly pow(int e) const {
        if (e < 0) throw DomainError("negative polynomial power");
        Poly r = Poly::constant(nvars_, 1);
        Poly base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = e > 1 ? base * base : base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef)
                return false;
        return true;
    }

    Rat eval(const QVec& point) const {
        if (point.size() != nvars_) throw DomainError("eval: point arity mismatch");
        Rat s(0);
        for (const auto& t : terms_) {
            Rat v = t.coef;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (int e = 0; e < t.mono[i]; ++e) v *= point[i];
            s += v;
        }
        return s;
    }

    Poly substitute(std::size_t var, const Rat& c) const {
        Poly out(nvars_);
        for (const auto& t : terms_) {
            Rat v = t.coef;
            for (int e = 0; e < t.mono[var]; ++e) v *= c;
            Monomial m = t.mono;
            m[var] = 0;
            out = out + Poly::term(nvars_, std::move(m), v);
        }
        return out;
    }

    Poly derivative(std::size_t var) const {
        Poly out(nvars_);
        for (const auto& t : terms_) {
            if (t.mono[var] == 0) continue;
            Monomial m = t.mono;
            Rat c = t.coef * m[var];
            --m[var];
            out = out + Poly::term(nvars_, std::move(m), c);
        }
        return out;
    }

    // Reinterprets the polynomial in a ring with new_nvars variables, sending
    // variable i to variable var_map[i].
    Poly map_vars(const std::vector<std::size_t>& var_map, std::size_t new_nvars) const {
        Poly out(new_nvars);
        for (const auto& t : terms_) {
            Monomial m(new_nvars, 0);
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (t.mono[i] == 0) continue;
                if (var_map[i] >= new_nvars) throw DomainError("map_vars: bad target index");
                m[var_map[i]] += t.mono[i];
            }
            out = out + Poly::term(new_nvars, std::move(m), t.coef);
        }
        return out;
    }

  private:
    std::size_t nvars_;
    std::vector<Term> terms_;
};

struct RingSpec {
    std::vector<std::string> vars;
    std::vector<Poly> relations;
    int dim = 0;
    bool complete_intersection = false;
    // User-asserted geometric facts; nothing here verifies them. Freeness
    // verdicts refuse to interpret a class without them.
    bool rational_variety = false;
    bool trivial_canonical_bundle = false;

    std::size_t nvars() const { return vars.size(); }

    std::optional<std::size_t> var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return i;
        return std::nullopt;
    }

    void validate() const {
        for (const auto& v : vars) {
            if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0]))))
                throw DomainError("bad variable name '" + v + "'");
            for (char c : v)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                    throw DomainError("bad variable name '" + v + "'");
        }
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (std::size_t j = i + 1; j < vars.size(); ++j)
                if (vars[i] == vars[j]) throw DomainError("duplicate variable '" + vars[i] + "'");
        for (const auto& r : relations)
            if (r.nvars() != vars.size()) throw RingMismatchError("relation arity mismatch");
        if (dim < 0) throw DomainError("negative dimension");
        if (complete_intersection &&
            relations.size() + static_cast<std::size_t>(dim) != vars.size())
            throw DomainError("complete_intersection flag inconsistent with #relations");
    }
};

inline bool same_ring(const RingSpec& a, const RingSpec& b) {
    if (a.vars != b.vars || a.relations.size() != b.relations.size()) return false;
    for (std::size_t i = 0; i < a.relations.size(); ++i)
        if (!(a.relations[i] == b.relations[i])) return false;
    return true;
}

// --- Parsing ------------------------------------------------------------
//
// expr   := ['-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := base ['^' nonneg-integer]
// base   := rational | identifier | '(' expr ')'
//
// No implicit multiplication. Rational literals look like 2 or 1/2.

namespace detail {

struct PolyParser {
    const std::string& src;
    const RingSpec& ring;
    std::size_t pos = 0;

    PolyParser(const std::string& s, const RingSpec& r) : src(s), ring(r) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    Poly parse() {
        Poly p = parse_expr();
        if (!at_end()) throw ParseError("syntax error", pos);
        return p;
    }

    Poly parse_expr() {
        bool neg = false;
        if (peek() == '-') { ++pos; neg = true; }
        Poly acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                Poly t = parse_term();
                acc = (c == '+') ? acc + t : acc - t;
            } else break;
        }
        return acc;
    }

    Poly parse_term() {
        Poly acc = parse_factor();
        while (peek() == '*') {
            ++pos;
            acc = acc * parse_factor();
        }
        return acc;
    }

    Poly parse_factor() {
        Poly b = parse_base();
        if (peek() == '^') {
            ++pos;
            skip_ws();
            std::size_t start = pos;
            if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
                throw ParseError("exponent must be a nonnegative integer literal", pos);
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string digits = src.substr(start, pos - start);
            if (digits.size() > 6) throw ParseError("exponent too large", start);
            b = b.pow(std::stoi(digits));
        }
        return b;
    }

    Poly parse_base() {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
        char c = src[pos];
        if (c == '(') {
            ++pos;
            Poly inner = parse_expr();
            if (peek() != ')') throw ParseError("expected ')'", pos);
            ++pos;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError("syntax error", pos);
    }

    Poly parse_number() {
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        std::string num = src.substr(start, pos - start);
        if (pos < src.size() && src[pos] == '/') {
            std::size_t save = pos;
            ++pos;
            std::size_t dstart = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == dstart) throw ParseError("expected denominator digits", pos);
            std::string den = src.substr(dstart, pos - dstart);
            if (mpz_class(den) == 0) throw ParseError("zero denominator", save + 1);
            Rat q{mpz_class(num), mpz_class(den)};
            q.canonicalize();
            return Poly::constant(ring.nvars(), q);
        }
        return Poly::constant(ring.nvars(), Rat(mpz_class(num)));
    }

    Poly parse_ident() {
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        std::string name = src.substr(start, pos - start);
        auto idx = ring.var_index(name);
        if (!idx) throw ParseError("unknown variable '" + name + "'", start);
        return Poly::variable(ring.nvars(), *idx);
    }
};

}  // namespace detail

inline Poly parse_poly(const std::string& text, const RingSpec& ring) {
    detail::PolyParser p(text, ring);
    return p.parse();
}

inline std::string poly_to_string(const Poly& p, const RingSpec& ring) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rat c = t.coef;
        if (first) {
            if (sgn(c) < 0) { out += "-"; c = -c; }
            first = false;
        } else {
            out += sgn(c) < 0 ? "-" : "+";
            if (sgn(c) < 0) c = -c;
        }
        std::string monostr;
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (t.mono[i] == 0) continue;
            if (!monostr.empty()) monostr += "*";
            monostr += ring.vars[i];
            if (t.mono[i] > 1) monostr += "^" + std::to_string(t.mono[i]);
        }
        if (monostr.empty()) out += rat_to_string(c);
        else if (c == 1) out += monostr;
        else out += rat_to_string(c) + "*" + monostr;
    }
    return out;
}

inline std::vector<std::string> polys_to_strings(const std::vector<Poly>& ps,
                                                 const RingSpec& ring) {
    std::vector<std::string> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(poly_to_string(p, ring));
    return out;
}

// Determinant of a square polynomial matrix by Laplace expansion along the
// leading remaining row, memoized on the set of remaining columns. Fine up to
// the 8x8 octonion matrices; no polynomial division needed.
inline Poly poly_det(const std::vector<std::vector<Poly>>& m) {
    std::size_t n = m.size();
    if (n == 0) throw DomainError("poly_det: empty matrix");
    if (n > 20) throw DomainError("poly_det: matrix too large");
    std::size_t nv = m[0][0].nvars();
    for (const auto& row : m) {
        if (row.size() != n) throw DomainError("poly_det: matrix not square");
        for (const auto& e : row)
            if (e.nvars() != nv) throw RingMismatchError("poly_det: mixed rings");
    }
    std::unordered_map<std::uint32_t, Poly> memo;
    auto rec = [&](auto&& self, std::uint32_t colmask) -> Poly {
        if (colmask == 0) return Poly::constant(nv, 1);
        auto hit = memo.find(colmask);
        if (hit != memo.end()) return hit->second;
        std::size_t row = n - static_cast<std::size_t>(__builtin_popcount(colmask));
        Poly acc(nv);
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(colmask & (1u << c))) continue;
            if (!m[row][c].is_zero()) {
                Poly sub = self(self, colmask & ~(1u << c));
                Poly piece = m[row][c] * sub;
                acc = (sign > 0) ? acc + piece : acc - piece;
            }
            sign = -sign;
        }
        memo.emplace(colmask, acc);
        return acc;
    };
    return rec(rec, (1u << n) - 1);
}

}  // namespace umrow
