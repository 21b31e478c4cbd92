#pragma once

// Predicted main terms: p-adic local densities and their Euler products
// (split sigma_hat, nonsplit sigma_tilde, two-squares c(l)), and the
// archimedean singular integrals by closed form and by slab quadrature.

#include <array>
#include <vector>

#include "quadcorr/quadcount.hpp"

namespace qc {

// ---------------------------------------------------------------------------
// 2-adic residue tables.
// split: S = {1,4}; R(1) = {5} mod 8, R(4) = {2,3} mod 4;
//        tau(1,1)=1, tau(1,4)=tau(4,1)=2, tau(4,4)=4.
// nonsplit: S = {3,4,8}; M(3)=8, M(4)=M(8)=16; tau(3)=1, tau(4)=tau(8)=2.
// Split-side conditions apply to the negated form value (-F ∈ R(s) mod M(s));
// nonsplit conditions are direct (Q1 ≡ s mod M(s)).
// ---------------------------------------------------------------------------
struct TwoAdicTable {
    static constexpr std::array<int, 2> split_S{1, 4};
    static int split_M(int s) { return s == 1 ? 8 : 4; }
    static const std::vector<int>& split_R(int s);
    static int split_tau(int s, int t);

    static constexpr std::array<int, 3> nonsplit_S{3, 4, 8};
    static int nonsplit_M(int s) { return s == 3 ? 8 : 16; }
    static int nonsplit_tau(int s) { return s == 3 ? 1 : 2; }
};

// The local data of a shifted problem (everything except the window bound).
struct LocalProblem {
    QuadForm q1;
    QuadForm q2;
    i64 shift = 0;
    CongruenceClass cc1;
    CongruenceClass cc2;

    static LocalProblem plain(QuadForm a, QuadForm b, i64 l);
    static LocalProblem from(const ShiftedProblem& p);
    int nvars() const { return q1.dim() + q2.dim(); }
};

// Value distribution of Q over x in (Z/ring)^k with x ≡ cc (mod cc.modulus):
// out[u] = #{x : Q(x) ≡ u mod value_mod}. Requires cc.modulus | ring and
// value_mod | ring. Diagonal forms use per-coordinate tables composed by
// exact cyclic convolution; otherwise direct enumeration under the budget.
std::vector<i128> value_distribution(const QuadForm& Q, i64 ring, i64 value_mod,
                                     const CongruenceClass& cc, double budget_ops = 2e9);

// Fast exact table for odd p, diagonal Q with p-unit coefficients, trivial cc:
// distribution of Q mod p^t computed by Hensel lifting from level 1.
std::vector<i128> value_distribution_lifted(const QuadForm& Q, i64 p, int t);

// eq:ccp numerator at level t: #{x1 mod p^{t+v1}, x2 mod p^{t+v2} :
//   xi ≡ ai mod p^{vi}, p^t | Q1(x1) - Q2(x2) - l}, vi = v_p(Ai).
i128 local_count(i64 p, int t, const LocalProblem& prob, double budget_ops = 2e9);

struct LocalDensity {
    i64 p = 0;
    int level = 0;        // smallest t with exact agreement at t, t+1
    i128 raw_count = 0;   // numerator at `level`
    Rat normalized;       // raw_count / p^{(n-1) level}
    bool stabilized = false;
};

// Stabilized c_p / s_p: accepts the smallest t where consecutive levels agree
// exactly; flagged non-stabilized when no agreement by t_max (default 4 for
// odd p, 6 for p = 2).
LocalDensity density_cp(i64 p, const LocalProblem& prob, int t_max = 0);

struct GammaValue {
    Rat value;
    int level = 0;
    bool stabilized = false;
};

// --- split singular series (Q1 = Q2 = sum of three squares, n = 6) ---
// gamma_p(j,k;l) for odd p, j = p^jp, k = p^kp with jp,kp in {0,1}; the
// multipliers (s,t) act trivially for odd p (4 is a square unit).
Rat gamma_split_odd_at(i64 p, int jp, int kp, i64 l, int level);
GammaValue gamma_jk_split(i64 p, int jp, int kp, i64 l);
// gamma_2((s,t);l): 2^T | s F(x) - t F(y) - l with -F(x) ≡ R(s) mod M(s) etc.
Rat gamma2_split_at(int s, int t, i64 l, int level);
GammaValue gamma2_split(int s, int t, i64 l);

// sigma_p(l): tau-weighted gamma_2 sum at p = 2, else the inclusion-exclusion
// gamma(1,1) - gamma(p,1) - gamma(1,p) + gamma(p,p).
GammaValue sigma_p_split(i64 p, i64 l);

// --- nonsplit (Q1 = three squares, Q2 = x^2, n = 4) ---
Rat gamma_nonsplit_odd_at(i64 p, int jp, i64 d, int level);
GammaValue gamma_jk_nonsplit(i64 p, int jp, i64 d);
Rat gamma2_nonsplit_at(int s, i64 d, int level);
GammaValue gamma2_nonsplit(int s, i64 d);
GammaValue sigma_p_nonsplit(i64 p, i64 d);  // p = 2 gives sum_s tau(s) gamma_2(s,d)

// --- Euler products ---
struct EulerProduct {
    std::vector<std::pair<i64, Rat>> factors;  // ascending p
    i64 pmax = 0;
    double tail_bound = 0.0;  // heuristic relative bound exp(C sum_{p>pmax} p^-2) - 1
    double value = 1.0;       // product of factors as double
    bool stabilized = true;
    std::vector<i64> nonpositive_ps;  // factors <= 0, reported not asserted
};

// Finite-prime part of sigma_hat(l) = prod_{p <= pmax} sigma_p(l).
EulerProduct sigma_hat(i64 l, i64 pmax, const std::string& cache_dir = "");
// Finite-prime part of sigma_tilde(d).
EulerProduct sigma_tilde(i64 d, i64 pmax, const std::string& cache_dir = "");
// Generic prod_{p <= pmax} c_p for a local problem (used by r2/rq kinds).
EulerProduct euler_cp(const LocalProblem& prob, i64 pmax, const std::string& cache_dir = "");
// pi^2 * prod_{p <= pmax} c_p(l) for Q1 = Q2 = x^2 + y^2, A = 1.
double iwaniec_c(i64 l, i64 pmax, const std::string& cache_dir = "");

// ---------------------------------------------------------------------------
// Archimedean side. The split singular integral carries prefactor pi^2 in the
// closed form below (sigma_inf(X,0) = 2 pi^2, limit 8 pi^2 / 3 as l/X -> inf);
// the nonsplit one is one-sided in x2 (gamma_inf(X,0) = pi).
// ---------------------------------------------------------------------------
double sigma_inf(double X, double l);             // closed form
double sigma_inf_quad(double X, double l);        // adaptive quadrature of the radial integral
double gamma_inf_nonsplit(double X, double d);    // closed form, one-sided
double gamma_inf_nonsplit_quad(double X, double d);  // kappa-slab + Richardson oracle

// Product windows for c_inf(w,l): one radial factor per block, sharp
// indicator or a smooth bump.
struct WindowSpec {
    enum class Factor { Sharp, SmoothBump };
    int k1 = 3, k2 = 3;
    double det1 = 1.0, det2 = 1.0;  // Gram determinants of the two forms
    Factor w1 = Factor::Sharp, w2 = Factor::Sharp;
    static WindowSpec sharp(int k1, int k2, double det1 = 1.0, double det2 = 1.0);
};

// c_inf(w,l) by kappa-slab quadrature with Richardson extrapolation in kappa.
// Throws std::runtime_error when the extrapolation fails to converge.
double c_inf_window(const WindowSpec& w, double X, double l);

}  // namespace qc
