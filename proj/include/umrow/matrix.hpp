#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "umrow/errors.hpp"
#include "umrow/rational.hpp"

namespace umrow {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

inline QMat qmat_zero(std::size_t r, std::size_t c) { return QMat(r, QVec(c, Rat(0))); }

inline QMat qmat_identity(std::size_t n) {
    QMat m = qmat_zero(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline QMat qmat_mul(const QMat& a, const QMat& b) {
    std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    QMat out = qmat_zero(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

inline QVec qmat_apply(const QMat& a, const QVec& v) {
    QVec out(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
    return out;
}

inline Rat qvec_dot(const QVec& a, const QVec& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

// Solves a*x = b by Gaussian elimination. Returns false when the system is
// singular/inconsistent.
inline bool qmat_solve(QMat a, QVec b, QVec& x) {
    std::size_t n = a.size();
    if (n == 0) { x.clear(); return true; }
    if (a[0].size() != n || b.size() != n) throw DomainError("qmat_solve: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        Rat d = a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] /= d;
        b[col] /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    x = std::move(b);
    return true;
}

inline Rat qmat_det(QMat a) {
    std::size_t n = a.size();
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) { std::swap(a[piv], a[col]); det = -det; }
        det *= a[col][col];
        Rat d = a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rat f = a[r][col] / d;
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

struct SignatureResult {
    long long signature = 0;
    std::size_t rank = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

// Exact signature of a symmetric rational matrix by congruence
// diagonalization. Handles zero diagonals with the symmetric row+col trick.
inline SignatureResult qmat_signature(QMat m) {
    std::size_t n = m.size();
    SignatureResult res;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (m[i][i] != 0) { piv = i; break; }
        if (piv == n) {
            std::size_t oi = n, oj = n;
            for (std::size_t i = k; i < n && oi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (m[i][j] != 0) { oi = i; oj = j; break; }
            if (oi == n) break;
            for (std::size_t c = 0; c < n; ++c) m[oi][c] += m[oj][c];
            for (std::size_t r = 0; r < n; ++r) m[r][oi] += m[r][oj];
            piv = oi;
        }
        if (piv != k) {
            std::swap(m[piv], m[k]);
            for (std::size_t r = 0; r < n; ++r) std::swap(m[r][piv], m[r][k]);
        }
        Rat d = m[k][k];
        int s = sgn(d);
        if (s > 0) ++res.positives; else ++res.negatives;
        res.signature += s;
        ++res.rank;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (m[r][k] == 0) continue;
            Rat f = m[r][k] / d;
            for (std::size_t c = 0; c < n; ++c) m[r][c] -= f * m[k][c];
            for (std::size_t c = 0; c < n; ++c) m[c][r] -= f * m[c][k];
        }
    }
    return res;
}

}  // namespace umrow
