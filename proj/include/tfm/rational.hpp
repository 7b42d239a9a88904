#pragma once

#include <gmpxx.h>

#include <string>

namespace tfm {

// Exact rational money type. All discrete-grid checkers run on this so that
// counterexamples replay with zero tolerance.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Exact conversion; every double is a binary rational.
inline Rat rat_from_double(double x) {
    return Rat(x);
}

inline double to_double(const Rat& q) {
    return q.get_d();
}

inline std::string to_string(const Rat& q) {
    return q.get_str();
}

}  // namespace tfm
