#pragma once

#include <gmpxx.h>

#include <string>

#include "umrow/errors.hpp"

namespace umrow {

using Rat = mpq_class;

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal '" + s + "'", 0);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'", 0);
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline int rat_sign(const Rat& q) { return sgn(q); }

// True iff q is the square of a rational.
inline bool rat_is_square(const Rat& q) {
    if (sgn(q) < 0) return false;
    return mpz_perfect_square_p(q.get_num().get_mpz_t()) &&
           mpz_perfect_square_p(q.get_den().get_mpz_t());
}

// Squarefree part of the integer n (sign preserved); used for discriminant
// square-class comparisons over Q.
inline mpz_class squarefree_part(mpz_class n) {
    if (n == 0) return 0;
    mpz_class out = (sgn(n) < 0) ? mpz_class(-1) : mpz_class(1);
    n = abs(n);
    for (mpz_class p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            if (e % 2) out *= p;
        }
    }
    return out * n;
}

// Square class representative of a nonzero rational: squarefree integer
// num*den with the square factors removed.
inline mpz_class rat_square_class(const Rat& q) {
    if (sgn(q) == 0) throw DomainError("square class of zero");
    return squarefree_part(q.get_num() * q.get_den());
}

}  // namespace umrow
