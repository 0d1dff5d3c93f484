#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "umrow/groebner.hpp"
#include "umrow/matrix.hpp"
#include "umrow/ring.hpp"

namespace umrow {

struct MonoCmpDegrevlex {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return mono_cmp(a, b, MonomialOrder::Degrevlex) < 0;
    }
};

// Monomial basis of k[x]/I from a Groebner basis of I. Throws unless the
// quotient is finite dimensional; the unit ideal gives the empty basis.
inline std::vector<Monomial> quotient_basis(const GroebnerBasis& gb) {
    std::vector<Monomial> lts;
    for (const auto& b : gb.basis) lts.push_back(b.leading(gb.order).mono);
    if (gb.contains_one()) return {};
    std::size_t nv = gb.nvars;
    std::vector<int> bound(nv, -1);
    for (const auto& lt : lts) {
        int support = -1;
        bool pure = true;
        for (std::size_t v = 0; v < nv; ++v) {
            if (lt[v] == 0) continue;
            if (support != -1) { pure = false; break; }
            support = static_cast<int>(v);
        }
        if (!pure || support == -1) continue;
        if (bound[support] == -1 || lt[support] < bound[support]) bound[support] = lt[support];
    }
    for (std::size_t v = 0; v < nv; ++v)
        if (bound[v] == -1)
            throw DomainError("quotient is not zero-dimensional (no pure power of variable " +
                              std::to_string(v) + " in the leading-term ideal)");

    std::vector<Monomial> out;
    Monomial cur(nv, 0);
    while (true) {
        bool reducible = false;
        for (const auto& lt : lts)
            if (mono_divides(lt, cur)) { reducible = true; break; }
        if (!reducible) out.push_back(cur);
        std::size_t v = 0;
        while (v < nv) {
            if (++cur[v] < bound[v]) break;
            cur[v] = 0;
            ++v;
        }
        if (v == nv) break;
    }
    std::sort(out.begin(), out.end(), MonoCmpDegrevlex{});
    return out;
}

// A zero-dimensional quotient algebra with its staircase basis, multiplication
// matrices and structure tensor.
struct FiniteAlgebra {
    RingSpec ring;
    GroebnerBasis gb;
    std::vector<Monomial> basis;
    std::map<Monomial, std::size_t, MonoCmpDegrevlex> index;
    std::vector<QMat> mult;                  // mult[v][i][j]: coords of x_v * b_j
    std::vector<std::vector<QVec>> tensor;   // tensor[i][j]: coords of b_i * b_j

    std::size_t dim() const { return basis.size(); }

    Poly nf(const Poly& p) const { return reduce(p, gb); }

    QVec coords(const Poly& p) const {
        Poly n = nf(p);
        QVec out(basis.size(), Rat(0));
        for (const auto& t : n.terms()) {
            auto it = index.find(t.mono);
            if (it == index.end())
                throw DomainError("internal: normal form leaves the staircase");
            out[it->second] = t.coef;
        }
        return out;
    }

    Poly from_coords(const QVec& v) const {
        Poly p(ring.nvars());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) p = p + Poly::term(ring.nvars(), basis[i], v[i]);
        return p;
    }
};

inline FiniteAlgebra make_finite_algebra(const std::vector<Poly>& gens, const RingSpec& ring,
                                         GroebnerOptions opt = {}) {
    FiniteAlgebra A;
    A.ring = ring;
    A.gb = groebner(gens, ring, opt);
    A.basis = quotient_basis(A.gb);
    for (std::size_t i = 0; i < A.basis.size(); ++i) A.index[A.basis[i]] = i;
    std::size_t n = A.basis.size(), nv = ring.nvars();
    A.mult.assign(nv, qmat_zero(n, n));
    for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t j = 0; j < n; ++j) {
            Monomial m = A.basis[j];
            ++m[v];
            QVec col = A.coords(Poly::term(nv, std::move(m), Rat(1)));
            for (std::size_t i = 0; i < n; ++i) A.mult[v][i][j] = col[i];
        }
    A.tensor.assign(n, std::vector<QVec>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            QVec c = A.coords(Poly::term(nv, mono_mul(A.basis[i], A.basis[j]), Rat(1)));
            A.tensor[i][j] = c;
            if (i != j) A.tensor[j][i] = c;
        }
    return A;
}

// Gram matrix of the trace form (b_i, b_j) -> Tr(mult by b_i*b_j).
inline QMat trace_form(const FiniteAlgebra& A) {
    std::size_t n = A.dim();
    QVec tr(n, Rat(0));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k) tr[m] += A.tensor[m][k][k];
    QMat T = qmat_zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rat s(0);
            for (std::size_t m = 0; m < n; ++m)
                if (A.tensor[i][j][m] != 0) s += A.tensor[i][j][m] * tr[m];
            T[i][j] = s;
            T[j][i] = s;
        }
    return T;
}

}  // namespace umrow
