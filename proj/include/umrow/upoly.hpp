#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/rational.hpp"

namespace umrow {

// Dense univariate polynomial over Q; coefficient of t^i at index i, no
// trailing zeros.
struct UPoly {
    std::vector<Rat> c;

    UPoly() = default;
    explicit UPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static UPoly constant(const Rat& v) { return UPoly(std::vector<Rat>{v}); }
    static UPoly t() { return UPoly({Rat(0), Rat(1)}); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Rat& lc() const {
        if (c.empty()) throw DomainError("leading coefficient of zero polynomial");
        return c.back();
    }
    Rat coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : Rat(0);
    }

    Rat eval(const Rat& x) const {
        Rat v(0);
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c == b.c; }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
        return UPoly(std::move(r));
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
        return UPoly(std::move(r));
    }

    friend UPoly operator-(const UPoly& a) { return UPoly::constant(Rat(0)) - a; }

    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return UPoly();
        std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return UPoly(std::move(r));
    }

    friend UPoly operator*(const Rat& s, const UPoly& a) {
        std::vector<Rat> r = a.c;
        for (auto& x : r) x *= s;
        return UPoly(std::move(r));
    }
};

// Division with remainder: a = q*b + r, deg r < deg b.
inline std::pair<UPoly, UPoly> upoly_divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw DomainError("division by zero polynomial");
    UPoly r = a;
    std::vector<Rat> q(a.c.size() > b.c.size() ? a.c.size() - b.c.size() + 1 : 1, Rat(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int k = r.degree() - b.degree();
        Rat f = r.lc() / b.lc();
        q[k] += f;
        for (int i = 0; i <= b.degree(); ++i) r.c[i + k] -= f * b.c[i];
        r.trim();
    }
    return {UPoly(std::move(q)), r};
}

inline UPoly upoly_monic(const UPoly& a) {
    if (a.is_zero()) return a;
    return (Rat(1) / a.lc()) * a;
}

inline UPoly upoly_gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = upoly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return upoly_monic(a);
}

inline UPoly upoly_derivative(const UPoly& a) {
    if (a.c.size() <= 1) return UPoly();
    std::vector<Rat> r(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i) r[i - 1] = Rat(static_cast<long>(i)) * a.c[i];
    return UPoly(std::move(r));
}

// Exact square root when it exists.
inline std::optional<UPoly> upoly_sqrt(const UPoly& p) {
    if (p.is_zero()) return UPoly();
    if (p.degree() % 2 != 0 || !rat_is_square(p.lc())) return std::nullopt;
    int m = p.degree() / 2;
    std::vector<Rat> h(m + 1, Rat(0));
    Rat lead = p.lc();
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), lead.get_num().get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), lead.get_den().get_mpz_t());
    h[m] = Rat(sn) / Rat(sd);
    // Solve top-down: the t^k coefficient of h^2 is sum h_i h_j over i+j=k,
    // and h[k-m] is the only unknown once h[k-m+1..m] are fixed.
    for (int k = 2 * m - 1; k >= m; --k) {
        Rat rest(0);
        for (int i = k - m + 1; i <= m; ++i) {
            int j = k - i;
            if (j >= 0 && j <= m && j != k - m) rest += h[i] * h[j];
        }
        h[k - m] = (p.coeff(k) - rest) / (2 * h[m]);
    }
    UPoly cand{std::vector<Rat>(h.begin(), h.end())};
    if (cand * cand == p) return cand;
    return std::nullopt;
}

// Valuation of a nonzero polynomial at the monic irreducible pi: largest k
// with pi^k | a, together with a / pi^k.
inline std::pair<int, UPoly> upoly_valuation(const UPoly& a, const UPoly& pi) {
    if (a.is_zero()) throw DomainError("valuation of zero");
    if (pi.degree() < 1) throw DomainError("place polynomial must be nonconstant");
    int k = 0;
    UPoly u = a;
    while (true) {
        auto [q, r] = upoly_divmod(u, pi);
        if (!r.is_zero()) break;
        u = q;
        ++k;
    }
    return {k, u};
}

inline std::string upoly_to_string(const UPoly& p, const std::string& var = "t") {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        Rat c = p.coeff(i);
        if (c == 0) continue;
        if (!out.empty()) {
            out += sgn(c) < 0 ? "-" : "+";
            if (sgn(c) < 0) c = -c;
        } else if (sgn(c) < 0) {
            out += "-";
            c = -c;
        }
        if (i == 0) out += rat_to_string(c);
        else {
            if (c != 1) out += rat_to_string(c) + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

// Rational function num/den over Q, normalized: gcd(num, den) = 1, den monic.
struct RationalFunction {
    UPoly num, den;

    RationalFunction() : num(), den(UPoly::constant(Rat(1))) {}
    RationalFunction(UPoly n, UPoly d) : num(std::move(n)), den(std::move(d)) { normalize(); }
    static RationalFunction from_poly(UPoly p) {
        RationalFunction f;
        f.num = std::move(p);
        return f;
    }
    static RationalFunction constant(const Rat& v) { return from_poly(UPoly::constant(v)); }

    void normalize() {
        if (den.is_zero()) throw DomainError("zero denominator");
        if (num.is_zero()) {
            den = UPoly::constant(Rat(1));
            return;
        }
        UPoly g = upoly_gcd(num, den);
        num = upoly_divmod(num, g).first;
        den = upoly_divmod(den, g).first;
        Rat l = den.lc();
        num = (Rat(1) / l) * num;
        den = (Rat(1) / l) * den;
    }

    bool is_zero() const { return num.is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend RationalFunction operator-(const RationalFunction& a) { return {-a.num, a.den}; }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num * b.num, a.den * b.den};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw DomainError("division by zero rational function");
        return {a.num * b.den, a.den * b.num};
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::optional<Rat> eval(const Rat& x) const {
        Rat d = den.eval(x);
        if (d == 0) return std::nullopt;
        return num.eval(x) / d;
    }
};

// True iff f is the square of a rational function.
inline bool rf_is_square(const RationalFunction& f) {
    if (f.is_zero()) return true;
    return upoly_sqrt(f.num * f.den).has_value();
}

inline std::string rf_to_string(const RationalFunction& f, const std::string& var = "t") {
    std::string n = upoly_to_string(f.num, var);
    if (f.den == UPoly::constant(Rat(1))) return n;
    return "(" + n + ")/(" + upoly_to_string(f.den, var) + ")";
}

}  // namespace umrow
