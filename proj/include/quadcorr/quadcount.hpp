#pragma once

// Exact evaluation of the empirical sums: the constrained lattice count
// S(a1,a2) with sharp windows, the class-number correlation D(X,l), the
// non-split sum S(X,d), and general r_{Q1} r_{Q2} shifted sums.

#include "quadcorr/repnum.hpp"

namespace qc {

struct ShiftedProblem {
    QuadForm q1;
    QuadForm q2;
    i64 shift = 0;  // l >= 0
    CongruenceClass cc1;
    CongruenceClass cc2;
    i64 X = 0;

    ShiftedProblem(QuadForm a, QuadForm b, i64 l, CongruenceClass c1, CongruenceClass c2, i64 x);
    static ShiftedProblem plain(QuadForm a, QuadForm b, i64 l, i64 x);
    i64 Y() const { return X + shift; }
};

// Exact #{(x,y) : x ≡ a1 mod A1, y ≡ a2 mod A2, Q1(x) - Q2(y) = l,
//               Q1(x) <= Y, Q2(y) <= X}; sieves both tables restricted to the
// congruence classes and convolves along the fiber m - n = l.
u128 count_constrained(const ShiftedProblem& p, int threads = 1, double budget_points = 8e9);

// Class numbers h(-n) for all n <= N plus the flat-restriction flags
// (fundamental and not ≡ 1 mod 8), built once and reused across shifts.
struct ClassNumberTable {
    i64 N = 0;
    std::vector<std::uint32_t> h;     // reduced-form counts at discriminant -n
    std::vector<std::uint8_t> flat;   // 1 iff -n fundamental and -n mod 8 != 1

    static ClassNumberTable build(i64 N, int threads = 1);
};

// D(X,l) = sum over 1 <= n <= X, both -n and -n-l flat, of h(-n) h(-n-l).
u128 empirical_D(const ClassNumberTable& tab, i64 X, i64 l);
u128 empirical_D(i64 X, i64 l, int threads = 1);

// S(X,d) = sum over 1 <= n <= X with -(n^2+d) flat of h(-(n^2+d)).
u128 empirical_nonsplit(i64 X, i64 d, int threads = 1);

// sum_{1 <= n <= X} r_{Q2}(n) r_{Q1}(n+l), exact via two representation tables.
u128 empirical_rr(const QuadForm& Q1, const QuadForm& Q2, i64 X, i64 l, int threads = 1,
                  const std::string& cache_dir = "");

}  // namespace qc
