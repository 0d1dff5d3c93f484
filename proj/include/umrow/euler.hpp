#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "umrow/finite_algebra.hpp"
#include "umrow/matrix.hpp"
#include "umrow/ring.hpp"
#include "umrow/row.hpp"

namespace umrow {

// Duality data of the zero-dimensional algebra B = k[x]/(relations, tail):
// the Scheja-Storch residue functional lambda on the staircase basis and its
// symmetric bilinear form B(f,g) = lambda(fg). lambda is canonical (solved
// from the Bezoutian), so every signature downstream is basis-independent.
struct LocalForm {
    FiniteAlgebra algebra;
    QVec lambda;
    QMat gram;
    Poly jacobian_nf;
};

namespace detail {

// f with variables 0..cut-1 moved to the second group (indices N..N+cut-1)
// inside k[x_1..x_N, y_1..y_N].
inline Poly lift_partial(const Poly& f, std::size_t cut, std::size_t N) {
    std::vector<std::size_t> vm(N);
    for (std::size_t v = 0; v < N; ++v) vm[v] = v < cut ? N + v : v;
    return f.map_vars(vm, 2 * N);
}

// Exact quotient p / (y_c - x_c) in the doubled ring; p must be divisible.
inline Poly divide_linear_diff(const Poly& p, std::size_t xvar, std::size_t yvar) {
    std::size_t nv = p.nvars();
    std::map<int, Poly> coef;  // by y-degree, y stripped
    int top = 0;
    for (const auto& t : p.terms()) {
        int k = t.mono[yvar];
        Monomial m = t.mono;
        m[yvar] = 0;
        auto it = coef.find(k);
        if (it == coef.end()) it = coef.emplace(k, Poly(nv)).first;
        it->second = it->second + Poly::term(nv, std::move(m), t.coef);
        if (k > top) top = k;
    }
    if (p.is_zero()) return Poly(nv);
    auto c = [&](int k) { return coef.count(k) ? coef.at(k) : Poly(nv); };
    Poly x = Poly::variable(nv, xvar);
    std::vector<Poly> b(static_cast<std::size_t>(top) + 1, Poly(nv));
    if (top >= 1) b[top - 1] = c(top);
    for (int k = top - 1; k >= 1; --k) b[k - 1] = c(k) + x * b[k];
    Poly rem = c(0) + x * b[0];
    if (!rem.is_zero()) throw DomainError("internal: Bezoutian division leaves a remainder");
    Poly q(nv);
    for (int k = 0; k < top; ++k) {
        Monomial m(nv, 0);
        m[yvar] = k;
        q = q + b[k] * Poly::term(nv, std::move(m), 1);
    }
    return q;
}

// Bezoutian of the square system f_1..f_N: det of the divided differences,
// an element of k[x,y].
inline Poly bezoutian(const std::vector<Poly>& f, std::size_t N) {
    std::vector<std::vector<Poly>> dd(N, std::vector<Poly>(N));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t c = 0; c < N; ++c) {
            Poly num = lift_partial(f[i], c + 1, N) - lift_partial(f[i], c, N);
            dd[i][c] = divide_linear_diff(num, c, N + c);
        }
    return poly_det(dd);
}

// Coefficient matrix C with Bez = sum C[m][l] b_m(x) b_l(y) in B (x) B.
inline QMat bezoutian_coefficients(const FiniteAlgebra& A, const Poly& bez) {
    std::size_t N = A.ring.nvars(), D = A.dim();
    std::map<Monomial, QVec> cache;
    auto nfc = [&](const Monomial& m) -> const QVec& {
        auto it = cache.find(m);
        if (it == cache.end())
            it = cache.emplace(m, A.coords(Poly::term(N, m, Rat(1)))).first;
        return it->second;
    };
    QMat C = qmat_zero(D, D);
    for (const auto& t : bez.terms()) {
        Monomial mx(t.mono.begin(), t.mono.begin() + static_cast<long>(N));
        Monomial my(t.mono.begin() + static_cast<long>(N), t.mono.end());
        const QVec& a = nfc(mx);
        const QVec& b = nfc(my);
        for (std::size_t m = 0; m < D; ++m) {
            if (a[m] == 0) continue;
            Rat ca = t.coef * a[m];
            for (std::size_t l = 0; l < D; ++l)
                if (b[l] != 0) C[m][l] += ca * b[l];
        }
    }
    return C;
}

}  // namespace detail

// Builds the quotient by (relations, tail) and the Scheja-Storch functional:
// lambda solves C lambda = coords(1) where C is the reduced Bezoutian of the
// square system (relations first, then the tail).
inline LocalForm local_form(const RingSpec& ring, const std::vector<Poly>& tail,
                            GroebnerOptions opt = {}) {
    ring.validate();
    if (!ring.complete_intersection)
        throw DomainError("local_form needs a complete-intersection ring");
    if (ring.dim < 2) throw DomainError("local_form needs dimension >= 2");
    if (tail.size() != static_cast<std::size_t>(ring.dim))
        throw DomainError("local_form: tail length must equal dim");
    std::size_t N = ring.nvars();
    std::vector<Poly> f = ring.relations;
    f.insert(f.end(), tail.begin(), tail.end());
    if (f.size() != N) throw DomainError("local_form: system is not square");

    LocalForm lf;
    lf.algebra = make_finite_algebra(f, ring, opt);
    std::size_t D = lf.algebra.dim();

    // Jacobian determinant of the full system, reduced into B.
    std::vector<std::vector<Poly>> J(N, std::vector<Poly>(N));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) J[i][j] = f[i].derivative(j);
    lf.jacobian_nf = lf.algebra.nf(poly_det(J));

    if (D == 0) {
        // empty vanishing locus: the zero functional is the right one
        lf.lambda = {};
        lf.gram = {};
        return lf;
    }

    QMat C = detail::bezoutian_coefficients(lf.algebra, detail::bezoutian(f, N));
    QVec e = lf.algebra.coords(Poly::constant(N, 1));
    if (!qmat_solve(C, e, lf.lambda))
        throw DomainError("Bezoutian pairing is degenerate (system not a complete intersection?)");

    Rat lj = qvec_dot(lf.algebra.coords(lf.jacobian_nf), lf.lambda);
    if (lj != Rat(static_cast<long>(D)))
        throw DomainError("internal: lambda(jacobian) = " + rat_to_string(lj) +
                          " but dim = " + std::to_string(D));

    lf.gram = qmat_zero(D, D);
    for (std::size_t m = 0; m < D; ++m)
        for (std::size_t l = m; l < D; ++l) {
            Rat s = qvec_dot(lf.algebra.tensor[m][l], lf.lambda);
            lf.gram[m][l] = s;
            lf.gram[l][m] = s;
        }
    if (qmat_det(lf.gram) == 0)
        throw DomainError("internal: Scheja-Storch form is degenerate");
    return lf;
}

// Gram matrix of (f,g) -> lambda(w f g).
inline QMat weighted_gram(const LocalForm& lf, const Poly& w) {
    std::size_t D = lf.algebra.dim();
    QVec mu(D, Rat(0));
    for (std::size_t k = 0; k < D; ++k) {
        Poly wk = w * Poly::term(lf.algebra.ring.nvars(), lf.algebra.basis[k], Rat(1));
        mu[k] = qvec_dot(lf.algebra.coords(wk), lf.lambda);
    }
    QMat G = qmat_zero(D, D);
    for (std::size_t m = 0; m < D; ++m)
        for (std::size_t l = m; l < D; ++l) {
            Rat s = qvec_dot(lf.algebra.tensor[m][l], mu);
            G[m][l] = s;
            G[l][m] = s;
        }
    return G;
}

// --- components and classes --------------------------------------------------

// Certified component data: sign_table[c][s] is the (user-attested) constant
// sign of separator s on compact component c. A connected real locus uses one
// label and no separators.
struct ComponentSeparator {
    std::vector<std::string> labels;
    std::vector<Poly> separators;
    std::vector<std::vector<int>> sign_table;

    void validate(const RingSpec& ring) const {
        if (labels.empty()) throw DomainError("separator needs at least one component label");
        if (sign_table.size() != labels.size())
            throw DomainError("sign table rows must match labels");
        for (const auto& row : sign_table) {
            if (row.size() != separators.size())
                throw DomainError("sign table columns must match separators");
            for (int v : row)
                if (v != 1 && v != -1) throw DomainError("sign table entries must be +-1");
        }
        for (const auto& s : separators)
            if (s.nvars() != ring.nvars())
                throw RingMismatchError("separator from a different ring");
        for (std::size_t a = 0; a < labels.size(); ++a)
            for (std::size_t b = a + 1; b < labels.size(); ++b) {
                if (labels[a] == labels[b]) throw DomainError("duplicate component label");
                if (sign_table[a] == sign_table[b])
                    throw DomainError("separators do not separate components '" + labels[a] +
                                      "' and '" + labels[b] + "'");
            }
    }
};

inline ComponentSeparator single_component(const std::string& label) {
    ComponentSeparator cs;
    cs.labels = {label};
    cs.sign_table = {{}};
    return cs;
}

struct PointedClass {
    std::vector<std::string> components;
    std::vector<long long> entries;
    std::string convention = "tangent=+1";

    bool is_zero() const {
        for (long long e : entries)
            if (e != 0) return false;
        return true;
    }

    friend bool operator==(const PointedClass& a, const PointedClass& b) {
        return a.components == b.components && a.entries == b.entries;
    }
};

inline constexpr std::uint64_t kPhiDefaultSeed = 0x756d726f77ull;

namespace detail {

inline long long even_halved(long long weighted, long long plain) {
    long long diff = weighted - plain;
    if (diff % 2 != 0)
        throw DomainError("internal: odd signature difference (bad separator?)");
    return diff / 2;
}

}  // namespace detail

// The phi-invariant of a unimodular row: prepare a regular tail, build the
// Scheja-Storch form of its zero scheme, and take per-component halved
// signature differences between the a_1-weighted and unweighted forms. The
// per-component split inverts the subset-product system over the sign table.
inline PointedClass phi_class(const Row& row, const ComponentSeparator& sep,
                              std::uint64_t seed = kPhiDefaultSeed,
                              GroebnerOptions opt = {}) {
    row.validate();
    sep.validate(row.ring);
    if (row.ring.dim < 2) throw DomainError("phi_class needs dimension >= 2");
    PrepResult prep = prep_regular(row, seed, opt);
    std::vector<Poly> tail(prep.row.entries.begin() + 1, prep.row.entries.end());
    LocalForm lf = local_form(row.ring, tail, opt);
    const Poly& a1 = prep.row.entries[0];

    std::size_t k = sep.separators.size();
    if (k > 16) throw DomainError("too many separators");
    std::size_t nsub = std::size_t(1) << k;
    std::vector<long long> v(nsub, 0);
    std::size_t nv = row.ring.nvars();
    for (std::size_t S = 0; S < nsub; ++S) {
        Poly h = Poly::constant(nv, 1);
        for (std::size_t s = 0; s < k; ++s)
            if (S & (std::size_t(1) << s)) h = h * sep.separators[s];
        long long plain = qmat_signature(weighted_gram(lf, h)).signature;
        long long weighted = qmat_signature(weighted_gram(lf, h * a1)).signature;
        v[S] = detail::even_halved(weighted, plain);
    }

    PointedClass out;
    out.components = sep.labels;
    for (std::size_t c = 0; c < sep.labels.size(); ++c) {
        long long acc = 0;
        for (std::size_t S = 0; S < nsub; ++S) {
            int chi = 1;
            for (std::size_t s = 0; s < k; ++s)
                if (S & (std::size_t(1) << s)) chi *= sep.sign_table[c][s];
            acc += chi * v[S];
        }
        if (acc % static_cast<long long>(nsub) != 0)
            throw DomainError("internal: non-integral component class (bad separator?)");
        out.entries.push_back(acc / static_cast<long long>(nsub));
    }
    return out;
}

inline bool phi_additivity_check(const WmsInstance& inst, const ComponentSeparator& sep,
                                 std::uint64_t seed = kPhiDefaultSeed,
                                 GroebnerOptions opt = {}) {
    PointedClass cx = phi_class(inst.row_x, sep, seed, opt);
    PointedClass cy = phi_class(inst.row_one_minus_x, sep, seed, opt);
    PointedClass cp = phi_class(inst.row_product, sep, seed, opt);
    if (cx.components != cp.components || cy.components != cp.components) return false;
    for (std::size_t i = 0; i < cp.entries.size(); ++i)
        if (cx.entries[i] + cy.entries[i] != cp.entries[i]) return false;
    return true;
}

// --- freeness verdicts --------------------------------------------------------

struct FreenessVerdict {
    std::string verdict;
    bool has_class = false;
    PointedClass cls;
};

// Interprets the class per the dimension parity; meaningful only on rings the
// user has flagged rational with trivial canonical bundle.
inline FreenessVerdict freeness_verdict(const Row& row, const ComponentSeparator& sep,
                                        std::uint64_t seed = kPhiDefaultSeed,
                                        GroebnerOptions opt = {}) {
    FreenessVerdict out;
    if (!row.ring.rational_variety || !row.ring.trivial_canonical_bundle) {
        out.verdict = "out of theorem scope";
        return out;
    }
    out.cls = phi_class(row, sep, seed, opt);
    out.has_class = true;
    bool zero = out.cls.is_zero();
    if (row.ring.dim % 2 == 0)
        out.verdict = zero ? "free" : "not free";
    else
        out.verdict = zero ? "E-trivial hence free" : "indeterminate under SL-action";
    return out;
}

}  // namespace umrow
