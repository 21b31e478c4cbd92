#pragma once

// Complete exponential sums S_q(c) and T_q(j,k,(s,t);l), their
// multiplicativity check, and the partial singular sums sum_q q^{-n} S_q(0).

#include <complex>

#include "quadcorr/constants.hpp"

namespace qc {

struct ExpSumValue {
    i64 q = 1;
    std::vector<i64> c;
    std::complex<double> value{0.0, 0.0};
    double abs_error = 0.0;  // bound on accumulated rounding
};

// S_q(c) = sum*_{d mod q} sum_{x ≡ a mod A} e_q(d(Q1(x1)-Q2(x2)-l) + c·x),
// evaluated by value-distribution grouping with a fixed summation order.
ExpSumValue exp_sum_Sq(i64 q, const std::vector<i64>& c, const LocalProblem& prob,
                       double budget_ops = 4e9);

// T_q(j,k,(s,t);l) over the class sets A_j(s) x A_k(t) (split problem; the
// phase carries the s,t multipliers matching gamma_2).
ExpSumValue exp_sum_Tq(i64 q, i64 j, i64 k, int s, int t, i64 l, double budget_ops = 4e9);

struct MultCheck {
    bool pass = false;
    double residual = 0.0;
    std::complex<double> lhs{0.0, 0.0}, rhs{0.0, 0.0};
};

// Verifies S_{q1 q2}(c) = S_{q1}(conj-twisted c) S_{q2}(conj-twisted c) for
// coprime q1, q2. Nontrivial congruence moduli must be coprime to q2.
MultCheck check_multiplicativity(i64 q1, i64 q2, const std::vector<i64>& c,
                                 const LocalProblem& prob, double rel_tol = 1e-6);

// sum_{q <= Z} q^{-n} Re S_q(0), summed in ascending q order.
double partial_singular_sum(i64 Z, const LocalProblem& prob, double budget_ops = 4e9);

}  // namespace qc
