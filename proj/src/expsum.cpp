#include "quadcorr/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qc {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

struct Kahan {
    double s = 0.0, comp = 0.0, mag = 0.0;
    void add(double v) {
        mag += std::fabs(v);
        double y = v - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
};

struct RootTable {
    std::vector<double> cs, sn;
    explicit RootTable(i64 q) : cs(std::size_t(q)), sn(std::size_t(q)) {
        for (i64 r = 0; r < q; ++r) {
            cs[std::size_t(r)] = std::cos(kTwoPi * double(r) / double(q));
            sn[std::size_t(r)] = std::sin(kTwoPi * double(r) / double(q));
        }
    }
};

i64 ipow_i64(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// distribution of Q over x mod q (trivial classes) for arbitrary q >= 1,
// composed from prime-power tables by CRT
std::vector<i128> dist_mod_q(const QuadForm& Q, i64 q, double budget_ops) {
    if (q == 1) return {i128(1)};
    std::vector<std::pair<i64, std::vector<i128>>> parts;  // (p^e, table)
    i64 m = q;
    for (i64 p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        i64 pe = ipow_i64(p, e);
        if (p > 2 && Q.is_diagonal()) {
            bool units = true;
            for (int i = 0; i < Q.dim(); ++i) units = units && (Q.coeff(i, i) % p != 0);
            if (units) {
                parts.emplace_back(pe, value_distribution_lifted(Q, p, e));
                continue;
            }
        }
        parts.emplace_back(pe, value_distribution(Q, pe, pe, CongruenceClass::trivial(Q.dim()), budget_ops));
    }
    if (m > 1) {
        if (m > 2 && Q.is_diagonal()) {
            bool units = true;
            for (int i = 0; i < Q.dim(); ++i) units = units && (Q.coeff(i, i) % m != 0);
            if (units) {
                parts.emplace_back(m, value_distribution_lifted(Q, m, 1));
                m = 0;
            }
        }
        if (m > 1)
            parts.emplace_back(m, value_distribution(Q, m, m, CongruenceClass::trivial(Q.dim()), budget_ops));
    }
    std::vector<i128> out(std::size_t(q), 0);
    for (i64 u = 0; u < q; ++u) {
        i128 v = 1;
        for (const auto& [pe, tab] : parts) v *= tab[std::size_t(u % pe)];
        out[std::size_t(u)] = v;
    }
    return out;
}

// block table W[(u, s)] = #{x mod qA ≡ a mod A : Q(x) ≡ u (mod q), c·x ≡ s (mod q)}
std::vector<i64> block_table(const QuadForm& Q, const CongruenceClass& cc, i64 q,
                             const std::vector<i64>& c, double budget_ops) {
    int k = Q.dim();
    double pts = std::pow(double(q), k);
    if (pts * (k * k + k) > budget_ops) throw capacity_error("exp_sum: budget exceeded");
    std::vector<i64> W(std::size_t(q) * std::size_t(q), 0);
    std::vector<i64> idx(std::size_t(k), 0), x(std::size_t(k), 0);
    i64 A = cc.modulus;
    while (true) {
        for (int i = 0; i < k; ++i) x[std::size_t(i)] = cc.residues[std::size_t(i)] + idx[std::size_t(i)] * A;
        i128 val = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) val += i128(Q.coeff(i, j)) * x[std::size_t(i)] * x[std::size_t(j)];
        i64 u = i64(val % q);
        if (u < 0) u += q;
        i128 lin = 0;
        for (int i = 0; i < k; ++i) lin += i128(c[std::size_t(i)]) * x[std::size_t(i)];
        i64 s = i64(lin % q);
        if (s < 0) s += q;
        ++W[std::size_t(u) * std::size_t(q) + std::size_t(s)];
        int ci = 0;
        while (ci < k && ++idx[std::size_t(ci)] == q) idx[std::size_t(ci++)] = 0;
        if (ci == k) break;
    }
    return W;
}

bool all_zero_mod(const std::vector<i64>& c, i64 q) {
    for (i64 v : c)
        if (((v % q) + q) % q != 0) return false;
    return true;
}

}  // namespace

ExpSumValue exp_sum_Sq(i64 q, const std::vector<i64>& c, const LocalProblem& prob, double budget_ops) {
    if (q < 1) throw std::invalid_argument("exp_sum_Sq: q >= 1 required");
    int k1 = prob.q1.dim(), k2 = prob.q2.dim();
    if (int(c.size()) != k1 + k2) throw std::invalid_argument("exp_sum_Sq: c arity mismatch");
    ExpSumValue out;
    out.q = q;
    out.c = c;
    if (q == 1) {
        out.value = {1.0, 0.0};
        return out;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    RootTable rt(q);
    std::vector<i64> c1(c.begin(), c.begin() + k1), c2(c.begin() + k1, c.end());

    // fast path: trivial classes, diagonal forms, no linear phase
    bool fast = prob.cc1.modulus == 1 && prob.cc2.modulus == 1 && prob.q1.is_diagonal() &&
                prob.q2.is_diagonal() && all_zero_mod(c, q);
    std::vector<double> G1re(std::size_t(q), 0.0), G1im(std::size_t(q), 0.0), G2re(std::size_t(q), 0.0),
        G2im(std::size_t(q), 0.0);
    double magG = 0.0;

    auto fill_G = [&](const std::vector<i64>& W, std::vector<double>& gre, std::vector<double>& gim,
                      int sign) {
        // G(d) = sum_{u,s} W[u][s] e_q(sign * d u + s)
        for (i64 d = 1; d < q; ++d) {
            if (gcd_i64(d, q) != 1) continue;
            Kahan re, im;
            for (i64 u = 0; u < q; ++u) {
                i64 base = ((sign * d * u) % q + q) % q;
                const i64* row = &W[std::size_t(u) * std::size_t(q)];
                for (i64 s = 0; s < q; ++s) {
                    if (!row[std::size_t(s)]) continue;
                    i64 r = base + s;
                    if (r >= q) r -= q;
                    double cnt = double(row[std::size_t(s)]);
                    re.add(cnt * rt.cs[std::size_t(r)]);
                    im.add(cnt * rt.sn[std::size_t(r)]);
                }
            }
            gre[std::size_t(d)] = re.s;
            gim[std::size_t(d)] = im.s;
            magG = std::max(magG, re.mag + im.mag);
        }
    };

    if (fast) {
        auto N1 = dist_mod_q(prob.q1, q, budget_ops);
        auto N2 = dist_mod_q(prob.q2, q, budget_ops);
        for (i64 d = 1; d < q; ++d) {
            if (gcd_i64(d, q) != 1) continue;
            Kahan r1, i1, r2, i2;
            for (i64 u = 0; u < q; ++u) {
                if (N1[std::size_t(u)] != 0) {
                    i64 r = (d * u) % q;
                    double cnt = double(N1[std::size_t(u)]);
                    r1.add(cnt * rt.cs[std::size_t(r)]);
                    i1.add(cnt * rt.sn[std::size_t(r)]);
                }
                if (N2[std::size_t(u)] != 0) {
                    i64 r = q - (d * u) % q;
                    if (r == q) r = 0;
                    double cnt = double(N2[std::size_t(u)]);
                    r2.add(cnt * rt.cs[std::size_t(r)]);
                    i2.add(cnt * rt.sn[std::size_t(r)]);
                }
            }
            G1re[std::size_t(d)] = r1.s;
            G1im[std::size_t(d)] = i1.s;
            G2re[std::size_t(d)] = r2.s;
            G2im[std::size_t(d)] = i2.s;
            magG = std::max(magG, std::max(r1.mag + i1.mag, r2.mag + i2.mag));
        }
    } else {
        auto W1 = block_table(prob.q1, prob.cc1, q, c1, budget_ops);
        auto W2 = block_table(prob.q2, prob.cc2, q, c2, budget_ops);
        // x2 block enters with phase e_q(-d Q2(x2) + c2·x2)
        fill_G(W1, G1re, G1im, +1);
        fill_G(W2, G2re, G2im, -1);
    }

    Kahan re, im;
    i64 lred = ((prob.shift % q) + q) % q;
    for (i64 d = 1; d < q; ++d) {
        if (gcd_i64(d, q) != 1) continue;
        i64 r = (q - (d * lred) % q) % q;
        double a = G1re[std::size_t(d)], b = G1im[std::size_t(d)];
        double cc = G2re[std::size_t(d)], dd = G2im[std::size_t(d)];
        double pr = a * cc - b * dd, pi = a * dd + b * cc;
        re.add(pr * rt.cs[std::size_t(r)] - pi * rt.sn[std::size_t(r)]);
        im.add(pr * rt.sn[std::size_t(r)] + pi * rt.cs[std::size_t(r)]);
    }
    out.value = {re.s, im.s};
    out.abs_error = 8.0 * eps * (re.mag + im.mag + double(q) * magG) + 1e-300;
    return out;
}

ExpSumValue exp_sum_Tq(i64 q, i64 j, i64 k, int s, int t, i64 l, double budget_ops) {
    if (q < 1 || j < 1 || k < 1) throw std::invalid_argument("exp_sum_Tq: q,j,k >= 1 required");
    if (j % 2 == 0 || k % 2 == 0 || !is_squarefree(j) || !is_squarefree(k))
        throw std::invalid_argument("exp_sum_Tq: j,k odd squarefree required");
    const double eps = std::numeric_limits<double>::epsilon();
    QuadForm F = QuadForm::sum_of_squares(3);
    ExpSumValue out;
    out.q = q;

    auto side_V = [&](int lab, i64 jj, int mult) {
        // V[u] = #{x mod M(lab) jj^2 q : F(x) ≡ 0 mod jj^2, -F(x) in R(lab) mod M(lab),
        //          mult*F(x) ≡ u mod q}
        i64 M = TwoAdicTable::split_M(lab);
        const auto& R = TwoAdicTable::split_R(lab);
        i64 L = M * jj * jj * q;
        if (double(L) * L * 2 > budget_ops) throw capacity_error("exp_sum_Tq: budget exceeded");
        auto N = dist_mod_q(F, L, budget_ops);
        std::vector<i128> V(std::size_t(q), 0);
        i64 j2 = jj * jj;
        for (i64 w = 0; w < L; ++w) {
            if (N[std::size_t(w)] == 0) continue;
            if (w % j2) continue;
            int r = int(((-w) % M + M) % M);
            if (std::find(R.begin(), R.end(), r) == R.end()) continue;
            V[std::size_t((i64(mult) * w) % q)] += N[std::size_t(w)];
        }
        return V;
    };

    auto V1 = side_V(s, j, s);
    auto V2 = side_V(t, k, t);
    if (q == 1) {
        out.value = {double(V1[0]) * double(V2[0]), 0.0};
        return out;
    }
    RootTable rt(q);
    Kahan re, im;
    double magG = 0.0;
    i64 lred = ((l % q) + q) % q;
    for (i64 d = 1; d < q; ++d) {
        if (gcd_i64(d, q) != 1) continue;
        Kahan r1, i1, r2, i2;
        for (i64 u = 0; u < q; ++u) {
            if (V1[std::size_t(u)] != 0) {
                i64 r = (d * u) % q;
                double cnt = double(V1[std::size_t(u)]);
                r1.add(cnt * rt.cs[std::size_t(r)]);
                i1.add(cnt * rt.sn[std::size_t(r)]);
            }
            if (V2[std::size_t(u)] != 0) {
                i64 r = (q - (d * u) % q) % q;
                double cnt = double(V2[std::size_t(u)]);
                r2.add(cnt * rt.cs[std::size_t(r)]);
                i2.add(cnt * rt.sn[std::size_t(r)]);
            }
        }
        i64 r = (q - (d * lred) % q) % q;
        double pr = r1.s * r2.s - i1.s * i2.s, pi = r1.s * i2.s + i1.s * r2.s;
        re.add(pr * rt.cs[std::size_t(r)] - pi * rt.sn[std::size_t(r)]);
        im.add(pr * rt.sn[std::size_t(r)] + pi * rt.cs[std::size_t(r)]);
        magG = std::max(magG, (r1.mag + i1.mag) * (r2.mag + i2.mag));
    }
    out.value = {re.s, im.s};
    out.abs_error = 8.0 * eps * (re.mag + im.mag + double(q) * std::sqrt(magG)) + 1e-300;
    return out;
}

MultCheck check_multiplicativity(i64 q1, i64 q2, const std::vector<i64>& c,
                                 const LocalProblem& prob, double rel_tol) {
    if (gcd_i64(q1, q2) != 1) throw std::invalid_argument("check_multiplicativity: gcd(q1,q2) != 1");
    i64 A = prob.cc1.modulus * prob.cc2.modulus;
    if (A > 1 && gcd_i64(A, q2) != 1)
        throw std::invalid_argument("check_multiplicativity: congruence moduli must be coprime to q2");
    ExpSumValue lhs = exp_sum_Sq(q1 * q2, c, prob);

    auto twist = [&](i64 qa, i64 qb) {
        // c -> (qb^{-1} mod qa) * c for the S_{qa} factor
        std::vector<i64> out(c.size());
        if (qa == 1) return out;
        i64 inv = inv_mod(qb % qa, qa);
        for (std::size_t i = 0; i < c.size(); ++i) out[i] = (inv * (((c[i] % qa) + qa) % qa)) % qa;
        return out;
    };
    ExpSumValue f1 = exp_sum_Sq(q1, twist(q1, q2), prob);
    LocalProblem trivial = prob;
    trivial.cc1 = CongruenceClass::trivial(prob.q1.dim());
    trivial.cc2 = CongruenceClass::trivial(prob.q2.dim());
    ExpSumValue f2 = exp_sum_Sq(q2, twist(q2, q1), A > 1 ? trivial : prob);

    MultCheck out;
    out.lhs = lhs.value;
    out.rhs = f1.value * f2.value;
    out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));
    out.pass = out.residual < rel_tol;
    return out;
}

double partial_singular_sum(i64 Z, const LocalProblem& prob, double budget_ops) {
    int n = prob.nvars();
    std::vector<i64> c(std::size_t(n), 0);
    Kahan acc;
    for (i64 q = 1; q <= Z; ++q) {
        ExpSumValue s = exp_sum_Sq(q, c, prob, budget_ops);
        acc.add(s.value.real() / std::pow(double(q), n));
    }
    return acc.s;
}

}  // namespace qc
