#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/euler.hpp"
#include "umrow/ring.hpp"
#include "umrow/row.hpp"

namespace umrow {

// Built-in models: the coordinate rings of the low-dimensional algebraic
// spheres, each with its tangent row, the single compact component of its
// real locus, and (for S^3 and S^7) a division-algebra completion.
struct BuiltinModel {
    std::string name;
    RingSpec ring;
    ComponentSeparator separator;
    std::vector<std::string> tangent_row;
    bool has_completion = false;
};

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"sphere2", "sphere3", "sphere4",
                                                   "sphere7"};
    return names;
}

inline bool is_builtin(const std::string& name) {
    for (const auto& n : builtin_names())
        if (n == name) return true;
    return false;
}

inline BuiltinModel builtin_model(const std::string& name) {
    int d = 0;
    if (name == "sphere2") d = 2;
    else if (name == "sphere3") d = 3;
    else if (name == "sphere4") d = 4;
    else if (name == "sphere7") d = 7;
    else throw DomainError("unknown built-in ring " + name);

    BuiltinModel m;
    m.name = name;
    if (d == 2) m.ring.vars = {"x", "y", "z"};
    else
        for (int i = 1; i <= d + 1; ++i) m.ring.vars.push_back("x" + std::to_string(i));
    std::string rel;
    for (std::size_t i = 0; i < m.ring.vars.size(); ++i)
        rel += (i ? "+" : "") + m.ring.vars[i] + "^2";
    rel += "-1";
    m.ring.relations = {parse_poly(rel, m.ring)};
    m.ring.dim = d;
    m.ring.complete_intersection = true;
    m.ring.rational_variety = true;
    m.ring.trivial_canonical_bundle = true;
    m.ring.validate();

    m.separator = single_component("S" + std::to_string(d));
    if (d == 2) m.tangent_row = {"z", "x", "y"};
    else m.tangent_row = m.ring.vars;
    m.has_completion = (d == 3 || d == 7);
    return m;
}

namespace detail {

// Cayley-Dickson doubling on coordinate vectors of length a power of two.
// Conjugation is (a, b)* = (a*, -b); the product is
// (a, b)(c, d) = (ac - d*b, da + bc*), which keeps 1 the two-sided unit and
// the norm multiplicative through the octonions.
inline std::vector<Poly> cd_conj(const std::vector<Poly>& a) {
    if (a.size() == 1) return a;
    std::size_t h = a.size() / 2;
    std::vector<Poly> out = cd_conj(std::vector<Poly>(a.begin(), a.begin() + h));
    Poly zero(a[0].nvars());
    for (std::size_t i = h; i < a.size(); ++i) out.push_back(zero - a[i]);
    return out;
}

inline std::vector<Poly> cd_mul(const std::vector<Poly>& x, const std::vector<Poly>& y) {
    if (x.size() == 1) return {x[0] * y[0]};
    std::size_t h = x.size() / 2;
    std::vector<Poly> a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
    std::vector<Poly> c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
    std::vector<Poly> t1 = cd_mul(a, c), t2 = cd_mul(cd_conj(d), b);
    std::vector<Poly> b1 = cd_mul(d, a), b2 = cd_mul(b, cd_conj(c));
    std::vector<Poly> out;
    for (std::size_t i = 0; i < h; ++i) out.push_back(t1[i] - t2[i]);
    for (std::size_t i = 0; i < h; ++i) out.push_back(b1[i] + b2[i]);
    return out;
}

}  // namespace detail

// Multiplication table of the rank-4 or rank-8 division algebra whose
// coordinates are the ring variables: row m holds the coordinates of x * e_m,
// so row 0 is the generic element itself and the determinant is the norm form
// raised to 2 (quaternions) or 4 (octonions) -- identically 1 on the sphere.
inline CompletionMatrix completion_matrix(const RingSpec& ring) {
    std::size_t n = ring.nvars();
    if (n != 4 && n != 8)
        throw DomainError("completion matrix needs 4 or 8 coordinates, got " +
                          std::to_string(n));
    std::vector<Poly> x;
    for (std::size_t v = 0; v < n; ++v) x.push_back(Poly::variable(n, v));
    CompletionMatrix cm;
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<Poly> e(n, Poly(n));
        e[m] = Poly::constant(n, 1);
        cm.m.push_back(detail::cd_mul(x, e));
    }
    return cm;
}

}  // namespace umrow
