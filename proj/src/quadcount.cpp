#include "quadcorr/quadcount.hpp"

#include <stdexcept>

namespace qc {

ShiftedProblem::ShiftedProblem(QuadForm a, QuadForm b, i64 l, CongruenceClass c1,
                               CongruenceClass c2, i64 x)
    : q1(std::move(a)), q2(std::move(b)), shift(l), cc1(std::move(c1)), cc2(std::move(c2)), X(x) {
    if (l < 0) throw std::invalid_argument("ShiftedProblem: shift >= 0 required");
    if (X < 0) throw std::invalid_argument("ShiftedProblem: X >= 0 required");
    if (cc1.dim() != q1.dim() || cc2.dim() != q2.dim())
        throw std::invalid_argument("ShiftedProblem: congruence class arity mismatch");
}

ShiftedProblem ShiftedProblem::plain(QuadForm a, QuadForm b, i64 l, i64 x) {
    int k1 = a.dim(), k2 = b.dim();
    return ShiftedProblem(std::move(a), std::move(b), l, CongruenceClass::trivial(k1),
                          CongruenceClass::trivial(k2), x);
}

u128 count_constrained(const ShiftedProblem& p, int threads, double budget_points) {
    RepTable t1 = rq_sieve(p.q1, p.Y(), p.cc1, threads, budget_points);
    RepTable t2 = rq_sieve(p.q2, p.X, p.cc2, threads, budget_points);
    u128 total = 0;
    for (i64 v = 0; v <= p.X; ++v) total += u128(t2.at(v)) * t1.at(v + p.shift);
    return total;
}

ClassNumberTable ClassNumberTable::build(i64 N, int threads) {
    ClassNumberTable tab;
    tab.N = N;
    tab.h = reduced_form_count_table(N, threads);
    tab.flat.assign(std::size_t(N) + 1, 0);
    auto mu = moebius_sieve(N, threads, std::size_t(1) << 34);
    for (i64 n = 1; n <= N; ++n) {
        bool fund = false;
        if (n % 4 == 3) {
            fund = mu[std::size_t(n)] != 0;  // -n ≡ 1 mod 4, squarefree
        } else if (n % 4 == 0) {
            i64 k = n / 4;  // -n = 4(-k), need -k ≡ 2,3 mod 4 i.e. k ≡ 1,2 mod 4
            fund = (k % 4 == 1 || k % 4 == 2) && mu[std::size_t(k)] != 0;
        }
        if (!fund) continue;
        int res8 = int(((-n) % 8 + 8) % 8);
        tab.flat[std::size_t(n)] = (res8 != 1) ? 1 : 0;
    }
    return tab;
}

u128 empirical_D(const ClassNumberTable& tab, i64 X, i64 l) {
    if (X + l > tab.N) throw std::invalid_argument("empirical_D: table bound too small");
    u128 s = 0;
    for (i64 n = 1; n <= X; ++n)
        if (tab.flat[std::size_t(n)] && tab.flat[std::size_t(n + l)])
            s += u128(tab.h[std::size_t(n)]) * tab.h[std::size_t(n + l)];
    return s;
}

u128 empirical_D(i64 X, i64 l, int threads) {
    return empirical_D(ClassNumberTable::build(X + l, threads), X, l);
}

u128 empirical_nonsplit(i64 X, i64 d, int threads) {
    auto h = reduced_form_count_quadratic(X, d, threads);
    u128 s = 0;
    for (i64 n = 1; n <= X; ++n) {
        i64 m = n * n + d;
        FundClass fc = classify_discriminant(-m);
        if (fc.kind == FundKind::NotFundamental || fc.residue_mod8 == 1) continue;
        s += u128(h[std::size_t(n)]);
    }
    return s;
}

u128 empirical_rr(const QuadForm& Q1, const QuadForm& Q2, i64 X, i64 l, int threads,
                  const std::string& cache_dir) {
    RepTable t1 = rq_sieve_cached(Q1, X + l, cache_dir, threads);
    RepTable t2 = rq_sieve_cached(Q2, X, cache_dir, threads);
    u128 s = 0;
    for (i64 n = 1; n <= X; ++n) s += u128(t2.at(n)) * t1.at(n + l);
    return s;
}

}  // namespace qc
