#include "quadcorr/constants.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qc {

const std::vector<int>& TwoAdicTable::split_R(int s) {
    static const std::vector<int> r1{5};
    static const std::vector<int> r4{2, 3};
    if (s == 1) return r1;
    if (s == 4) return r4;
    throw std::invalid_argument("split_R: s must be 1 or 4");
}

int TwoAdicTable::split_tau(int s, int t) {
    if (s == 1 && t == 1) return 1;
    if (s == 4 && t == 4) return 4;
    return 2;
}

LocalProblem LocalProblem::plain(QuadForm a, QuadForm b, i64 l) {
    int k1 = a.dim(), k2 = b.dim();
    return LocalProblem{std::move(a), std::move(b), l, CongruenceClass::trivial(k1),
                        CongruenceClass::trivial(k2)};
}

LocalProblem LocalProblem::from(const ShiftedProblem& p) {
    return LocalProblem{p.q1, p.q2, p.shift, p.cc1, p.cc2};
}

namespace {

i128 ipow128(i64 b, int e) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// cyclic convolution mod m of exact integer tables
std::vector<i128> cyc_conv(const std::vector<i128>& a, const std::vector<i128>& b, i64 m) {
    std::vector<i128> out(std::size_t(m), 0);
    for (i64 i = 0; i < m; ++i) {
        if (a[std::size_t(i)] == 0) continue;
        i128 ai = a[std::size_t(i)];
        for (i64 j = 0; j < m; ++j) {
            i64 k = i + j;
            if (k >= m) k -= m;
            out[std::size_t(k)] += ai * b[std::size_t(j)];
        }
    }
    return out;
}

bool lift_applicable(const QuadForm& Q, i64 p) {
    if (p < 3) return false;
    if (!Q.is_diagonal()) return false;
    for (int i = 0; i < Q.dim(); ++i)
        if (Q.coeff(i, i) % p == 0) return false;
    return true;
}

}  // namespace

std::vector<i128> value_distribution(const QuadForm& Q, i64 ring, i64 value_mod,
                                     const CongruenceClass& cc, double budget_ops) {
    int k = Q.dim();
    if (cc.dim() != k) throw std::invalid_argument("value_distribution: cc arity");
    if (ring % cc.modulus || ring % value_mod)
        throw std::invalid_argument("value_distribution: moduli must divide the ring");
    i64 span = ring / cc.modulus;  // per-coordinate choices

    if (Q.is_diagonal()) {
        if (double(span) * k + double(value_mod) * value_mod * std::max(1, k - 1) > budget_ops)
            throw capacity_error("value_distribution: budget exceeded");
        std::vector<i128> acc;
        for (int i = 0; i < k; ++i) {
            std::vector<i128> di(std::size_t(value_mod), 0);
            i64 qi = ((Q.coeff(i, i) % value_mod) + value_mod) % value_mod;
            for (i64 s = 0; s < span; ++s) {
                i64 x = (cc.residues[std::size_t(i)] + s * cc.modulus) % ring;
                i64 xm = x % value_mod;
                ++di[std::size_t((qi * ((xm * xm) % value_mod)) % value_mod)];
            }
            acc = (i == 0) ? std::move(di) : cyc_conv(acc, di, value_mod);
        }
        return acc;
    }

    // direct enumeration of (ring/A)^k points
    double pts = std::pow(double(span), k);
    if (pts * k * k > budget_ops) throw capacity_error("value_distribution: budget exceeded");
    std::vector<i128> out(std::size_t(value_mod), 0);
    std::vector<i64> idx(std::size_t(k), 0), x(std::size_t(k), 0);
    while (true) {
        for (int i = 0; i < k; ++i)
            x[std::size_t(i)] = (cc.residues[std::size_t(i)] + idx[std::size_t(i)] * cc.modulus) % ring;
        i128 v = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) v += i128(Q.coeff(i, j)) * x[std::size_t(i)] * x[std::size_t(j)];
        i64 u = i64(v % value_mod);
        ++out[std::size_t(u)];
        int c = 0;
        while (c < k && ++idx[std::size_t(c)] == span) idx[std::size_t(c++)] = 0;
        if (c == k) break;
    }
    return out;
}

std::vector<i128> value_distribution_lifted(const QuadForm& Q, i64 p, int t) {
    if (!lift_applicable(Q, p))
        throw std::invalid_argument("value_distribution_lifted: requires odd p, diagonal unit coefficients");
    int k = Q.dim();
    // level-1 table by per-coordinate convolution mod p
    std::vector<i128> N1(std::size_t(p), 0);
    {
        std::vector<i128> acc;
        for (int i = 0; i < k; ++i) {
            std::vector<i128> di(std::size_t(p), 0);
            i64 qi = ((Q.coeff(i, i) % p) + p) % p;
            for (i64 x = 0; x < p; ++x) ++di[std::size_t((qi * (x * x % p)) % p)];
            acc = (i == 0) ? std::move(di) : cyc_conv(acc, di, p);
        }
        N1 = std::move(acc);
    }
    if (t == 1) return N1;
    // Hensel lift: nonsingular solutions mod p lift p^{(k-1)(t-1)}-fold; the
    // x ≡ 0 branch recurses two levels down with a p^k coordinate factor.
    std::vector<std::vector<i128>> Ns(std::size_t(t) + 1);
    Ns[0] = {1};
    Ns[1] = N1;
    for (int tt = 2; tt <= t; ++tt) {
        i64 q = i64(ipow128(p, tt));
        i128 liftf = ipow128(p, (k - 1) * (tt - 1));
        i128 zerof = ipow128(p, k);
        std::vector<i128> out(std::size_t(q), 0);
        i64 qm2 = i64(ipow128(p, tt - 2));
        for (i64 v = 0; v < q; ++v) {
            i128 val = liftf * (N1[std::size_t(v % p)] - ((v % p == 0) ? 1 : 0));
            if (v % (p * p) == 0) val += zerof * Ns[std::size_t(tt - 2)][std::size_t((v / (p * p)) % qm2)];
            out[std::size_t(v)] = val;
        }
        Ns[std::size_t(tt)] = std::move(out);
    }
    return Ns[std::size_t(t)];
}

namespace {

// distribution of Q mod p^t over x mod p^t (trivial congruence), best route
std::vector<i128> dist_pt(const QuadForm& Q, i64 p, int t, double budget = 2e9) {
    if (lift_applicable(Q, p)) return value_distribution_lifted(Q, p, t);
    i64 q = i64(ipow128(p, t));
    return value_distribution(Q, q, q, CongruenceClass::trivial(Q.dim()), budget);
}

// Point-evaluable lifted distribution: N_t(v) in O(t) per query after the
// O(p^2) level-1 table. Only for odd p, diagonal p-unit forms.
class DistQuery {
  public:
    DistQuery(const QuadForm& Q, i64 p) : p_(p), k_(Q.dim()) {
        N1_ = value_distribution_lifted(Q, p, 1);
    }
    i128 at(int t, i64 v) const {  // v reduced into [0, p^t)
        if (t == 0) return 1;
        if (t == 1) return N1_[std::size_t(v)];
        i128 val = ipow128(p_, (k_ - 1) * (t - 1)) *
                   (N1_[std::size_t(v % p_)] - ((v % p_ == 0) ? 1 : 0));
        if (v % (p_ * p_) == 0)
            val += ipow128(p_, k_) * at(t - 2, (v / (p_ * p_)) % i64(ipow128(p_, t - 2)));
        return val;
    }

  private:
    i64 p_;
    int k_;
    std::vector<i128> N1_;
};

}  // namespace

i128 local_count(i64 p, int t, const LocalProblem& prob, double budget_ops) {
    if (t < 1) throw std::invalid_argument("local_count: t >= 1 required");
    int v1 = prob.cc1.modulus > 1 ? valuation(p, prob.cc1.modulus) : 0;
    int v2 = prob.cc2.modulus > 1 ? valuation(p, prob.cc2.modulus) : 0;
    int n = prob.nvars();
    if ((t + std::max(v1, v2)) * n * std::log2(double(p)) > 120)
        throw capacity_error("local_count: level exceeds 128-bit capacity");
    i64 pt = i64(ipow128(p, t));

    auto block_dist = [&](const QuadForm& Q, const CongruenceClass& cc, int v) {
        i64 ring = i64(ipow128(p, t + v));
        i64 pv = i64(ipow128(p, v));
        std::vector<i64> res(cc.residues.size());
        for (std::size_t i = 0; i < res.size(); ++i) res[i] = cc.residues[i] % pv;
        CongruenceClass ccp(pv, res);
        if (v == 0 && lift_applicable(Q, p)) return value_distribution_lifted(Q, p, t);
        return value_distribution(Q, ring, pt, ccp, budget_ops);
    };

    std::vector<i128> N1 = block_dist(prob.q1, prob.cc1, v1);
    std::vector<i128> N2 = block_dist(prob.q2, prob.cc2, v2);
    i64 lred = ((prob.shift % pt) + pt) % pt;
    i128 total = 0;
    for (i64 u = 0; u < pt; ++u) {
        i64 v = u - lred;
        if (v < 0) v += pt;
        total += N1[std::size_t(u)] * N2[std::size_t(v)];
    }
    return total;
}

LocalDensity density_cp(i64 p, const LocalProblem& prob, int t_max) {
    if (t_max <= 0) t_max = (p == 2) ? 6 : 4;
    int n = prob.nvars();
    i128 scale = ipow128(p, n - 1);
    LocalDensity out;
    out.p = p;
    i128 prev = local_count(p, 1, prob);
    for (int t = 1; t < t_max; ++t) {
        i128 next = local_count(p, t + 1, prob);
        if (next == scale * prev) {
            out.level = t;
            out.raw_count = prev;
            out.normalized = Rat(prev, ipow128(p, (n - 1) * t));
            out.stabilized = true;
            return out;
        }
        prev = next;
    }
    out.level = t_max;
    out.raw_count = prev;
    out.normalized = Rat(prev, ipow128(p, (n - 1) * t_max));
    out.stabilized = false;
    return out;
}

// ---------------------------------------------------------------------------
// split singular series: Q1 = Q2 = x1^2+x2^2+x3^2, n = 6
// ---------------------------------------------------------------------------

Rat gamma_split_odd_at(i64 p, int jp, int kp, i64 l, int level) {
    if (p < 3) throw std::invalid_argument("gamma_split_odd_at: odd p required");
    if (level < std::max({1, 2 * jp, 2 * kp}))
        throw std::invalid_argument("gamma_split_odd_at: level too small for divisibility conditions");
    QuadForm F = QuadForm::sum_of_squares(3);
    i64 q = i64(ipow128(p, level));
    i64 pj = jp ? p * p : 1, pk = kp ? p * p : 1;
    i64 lred = ((l % q) + q) % q;
    i128 cnt = 0;
    if ((jp || kp) && lift_applicable(F, p)) {
        // the u-range is sparse; point queries beat building the level table
        DistQuery D(F, p);
        for (i64 u = 0; u < q; u += pj) {
            i64 v = u - lred;
            if (v < 0) v += q;
            if (v % pk) continue;
            cnt += D.at(level, u) * D.at(level, v);
        }
    } else {
        auto N = dist_pt(F, p, level);
        for (i64 u = 0; u < q; u += pj) {
            i64 v = u - lred;
            if (v < 0) v += q;
            if (v % pk) continue;
            cnt += N[std::size_t(u)] * N[std::size_t(v)];
        }
    }
    return Rat(cnt, ipow128(p, 5 * level));
}

GammaValue gamma_jk_split(i64 p, int jp, int kp, i64 l) {
    int t0 = std::max({1, 2 * jp, 2 * kp});
    Rat prev = gamma_split_odd_at(p, jp, kp, l, t0);
    for (int t = t0; t < t0 + 3; ++t) {
        Rat next = gamma_split_odd_at(p, jp, kp, l, t + 1);
        if (next == prev) return {prev, t, true};
        prev = next;
    }
    return {prev, t0 + 3, false};
}

Rat gamma2_split_at(int s, int t, i64 l, int level) {
    if (level < 3) throw std::invalid_argument("gamma2_split_at: level >= 3 required");
    QuadForm F = QuadForm::sum_of_squares(3);
    i64 q = i64(1) << level;
    auto N = dist_pt(F, 2, level);
    int Ms = TwoAdicTable::split_M(s), Mt = TwoAdicTable::split_M(t);
    const auto& Rs = TwoAdicTable::split_R(s);
    const auto& Rt = TwoAdicTable::split_R(t);
    auto cond = [](i64 u, int M, const std::vector<int>& R) {
        int r = int(((-u) % M + M) % M);
        return std::find(R.begin(), R.end(), r) != R.end();
    };
    i64 lred = ((l % q) + q) % q;
    i64 g = (t == 1) ? 1 : 4;  // gcd(t, 2^level), t in {1,4}
    i128 cnt = 0;
    for (i64 u = 0; u < q; ++u) {
        if (N[std::size_t(u)] == 0 || !cond(u, Ms, Rs)) continue;
        i64 rhs = ((i64(s) * u - lred) % q + q) % q;
        if (rhs % g) continue;
        i64 step = q / g;
        i64 v0 = (rhs / g) % step;  // (t/g) = 1, so v ≡ rhs/g mod 2^level/g
        for (i64 j = 0; j < g; ++j) {
            i64 v = v0 + j * step;
            if (cond(v, Mt, Rt)) cnt += N[std::size_t(u)] * N[std::size_t(v)];
        }
    }
    return Rat(cnt, ipow128(2, 5 * level));
}

GammaValue gamma2_split(int s, int t, i64 l) {
    Rat prev = gamma2_split_at(s, t, l, 3);
    for (int T = 3; T < 8; ++T) {
        Rat next = gamma2_split_at(s, t, l, T + 1);
        if (next == prev) return {prev, T, true};
        prev = next;
    }
    return {prev, 8, false};
}

GammaValue sigma_p_split(i64 p, i64 l) {
    if (p == 2) {
        GammaValue out{Rat(0, 1), 0, true};
        for (int s : TwoAdicTable::split_S)
            for (int t : TwoAdicTable::split_S) {
                GammaValue g = gamma2_split(s, t, l);
                i64 tau = TwoAdicTable::split_tau(s, t);
                out.value = out.value + g.value * Rat(1, tau * tau);
                out.level = std::max(out.level, g.level);
                out.stabilized = out.stabilized && g.stabilized;
            }
        return out;
    }
    GammaValue g11 = gamma_jk_split(p, 0, 0, l);
    GammaValue gp1 = gamma_jk_split(p, 1, 0, l);
    GammaValue g1p = gamma_jk_split(p, 0, 1, l);
    GammaValue gpp = gamma_jk_split(p, 1, 1, l);
    GammaValue out;
    out.value = g11.value - gp1.value - g1p.value + gpp.value;
    out.level = std::max({g11.level, gp1.level, g1p.level, gpp.level});
    out.stabilized = g11.stabilized && gp1.stabilized && g1p.stabilized && gpp.stabilized;
    return out;
}

// ---------------------------------------------------------------------------
// nonsplit: Q1 = three squares, Q2 = x^2, n = 4
// ---------------------------------------------------------------------------

Rat gamma_nonsplit_odd_at(i64 p, int jp, i64 d, int level) {
    if (p < 3) throw std::invalid_argument("gamma_nonsplit_odd_at: odd p required");
    if (level < std::max(1, 2 * jp))
        throw std::invalid_argument("gamma_nonsplit_odd_at: level too small");
    QuadForm F3 = QuadForm::sum_of_squares(3), F1 = QuadForm::sum_of_squares(1);
    i64 q = i64(ipow128(p, level));
    i64 pj = jp ? p * p : 1;
    i64 dred = ((d % q) + q) % q;
    i128 cnt = 0;
    if (jp && lift_applicable(F3, p)) {
        DistQuery D3(F3, p), D1(F1, p);
        for (i64 u = 0; u < q; u += pj) {
            i64 v = u - dred;
            if (v < 0) v += q;
            cnt += D3.at(level, u) * D1.at(level, v);
        }
    } else {
        auto N3 = dist_pt(F3, p, level);
        auto N1 = dist_pt(F1, p, level);
        for (i64 u = 0; u < q; u += pj) {
            i64 v = u - dred;
            if (v < 0) v += q;
            cnt += N3[std::size_t(u)] * N1[std::size_t(v)];
        }
    }
    return Rat(cnt, ipow128(p, 3 * level));
}

GammaValue gamma_jk_nonsplit(i64 p, int jp, i64 d) {
    int t0 = std::max(1, 2 * jp);
    Rat prev = gamma_nonsplit_odd_at(p, jp, d, t0);
    for (int t = t0; t < t0 + 3; ++t) {
        Rat next = gamma_nonsplit_odd_at(p, jp, d, t + 1);
        if (next == prev) return {prev, t, true};
        prev = next;
    }
    return {prev, t0 + 3, false};
}

Rat gamma2_nonsplit_at(int s, i64 d, int level) {
    if (level < 4) throw std::invalid_argument("gamma2_nonsplit_at: level >= 4 required");
    i64 q = i64(1) << level;
    auto N3 = dist_pt(QuadForm::sum_of_squares(3), 2, level);
    auto N1 = dist_pt(QuadForm::sum_of_squares(1), 2, level);
    int M = TwoAdicTable::nonsplit_M(s);
    i64 dred = ((d % q) + q) % q;
    i128 cnt = 0;
    for (i64 u = s % M; u < q; u += M) {
        if (N3[std::size_t(u)] == 0) continue;
        i64 v = u - dred;
        if (v < 0) v += q;
        cnt += N3[std::size_t(u)] * N1[std::size_t(v)];
    }
    return Rat(cnt, ipow128(2, 3 * level));
}

GammaValue gamma2_nonsplit(int s, i64 d) {
    Rat prev = gamma2_nonsplit_at(s, d, 4);
    for (int T = 4; T < 10; ++T) {
        Rat next = gamma2_nonsplit_at(s, d, T + 1);
        if (next == prev) return {prev, T, true};
        prev = next;
    }
    return {prev, 10, false};
}

GammaValue sigma_p_nonsplit(i64 p, i64 d) {
    if (p == 2) {
        GammaValue out{Rat(0, 1), 0, true};
        for (int s : TwoAdicTable::nonsplit_S) {
            GammaValue g = gamma2_nonsplit(s, d);
            out.value = out.value + g.value * Rat(TwoAdicTable::nonsplit_tau(s), 1);
            out.level = std::max(out.level, g.level);
            out.stabilized = out.stabilized && g.stabilized;
        }
        return out;
    }
    GammaValue g1 = gamma_jk_nonsplit(p, 0, d);
    GammaValue gp = gamma_jk_nonsplit(p, 1, d);
    return {g1.value - gp.value, std::max(g1.level, gp.level), g1.stabilized && gp.stabilized};
}

// ---------------------------------------------------------------------------
// Euler products with per-(problem, p) factor cache
// ---------------------------------------------------------------------------

namespace {

u64 fnv_mix(u64 h, u64 v) {
    for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    auto to_i128 = [](const std::string& t) {
        i128 v = 0;
        bool neg = false;
        std::size_t i = 0;
        if (i < t.size() && (t[i] == '-' || t[i] == '+')) neg = t[i++] == '-';
        for (; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("rat_parse: bad digit");
            v = v * 10 + (t[i] - '0');
        }
        return neg ? -v : v;
    };
    if (slash == std::string::npos) return Rat(to_i128(s), 1);
    return Rat(to_i128(s.substr(0, slash)), to_i128(s.substr(slash + 1)));
}

class FactorCache {
  public:
    FactorCache(const std::string& dir, u64 key) {
        if (dir.empty()) return;
        char name[64];
        std::snprintf(name, sizeof(name), "euler_%016llx.kv", (unsigned long long)key);
        path_ = (std::filesystem::path(dir) / name).string();
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            i64 p;
            std::string rs;
            if (ls >> p >> rs) map_[p] = rat_parse(rs);
        }
    }
    const Rat* find(i64 p) const {
        auto it = map_.find(p);
        return it == map_.end() ? nullptr : &it->second;
    }
    void put(i64 p, const Rat& r) {
        map_[p] = r;
        dirty_ = true;
    }
    ~FactorCache() {
        if (path_.empty() || !dirty_) return;
        std::filesystem::create_directories(std::filesystem::path(path_).parent_path());
        std::ofstream out(path_ + ".tmp", std::ios::trunc);
        for (const auto& [p, r] : map_) out << p << " " << r.str() << "\n";
        out.close();
        std::error_code ec;
        std::filesystem::rename(path_ + ".tmp", path_, ec);
    }

  private:
    std::string path_;
    std::map<i64, Rat> map_;
    bool dirty_ = false;
};

double tail_sum_recip_sq(i64 pmax) {
    i64 B = std::max<i64>(4 * pmax, 20000);
    double s = 0;
    for (i64 p : primes_up_to(B))
        if (p > pmax) s += 1.0 / (double(p) * double(p));
    return s + 1.0 / double(B);
}

template <typename FactorFn>
EulerProduct assemble(i64 pmax, const std::string& cache_dir, u64 key, FactorFn&& fn) {
    if (pmax < 3) throw std::invalid_argument("Euler product: pmax >= 3 required");
    EulerProduct ep;
    ep.pmax = pmax;
    FactorCache cache(cache_dir, key);
    for (i64 p : primes_up_to(pmax)) {
        Rat f;
        if (const Rat* hit = cache.find(p)) {
            f = *hit;
        } else {
            GammaValue g = fn(p);
            ep.stabilized = ep.stabilized && g.stabilized;
            f = g.value;
            if (g.stabilized) cache.put(p, f);
        }
        ep.factors.emplace_back(p, f);
        ep.value *= f.to_double();
        if (f.num <= 0) ep.nonpositive_ps.push_back(p);
    }
    ep.tail_bound = std::exp(10.0 * tail_sum_recip_sq(pmax)) - 1.0;
    return ep;
}

}  // namespace

EulerProduct sigma_hat(i64 l, i64 pmax, const std::string& cache_dir) {
    u64 key = fnv_mix(fnv_mix(0xcbf29ce484222325ULL, 0x73706c6974ULL /*"split"*/), u64(l));
    return assemble(pmax, cache_dir, key, [&](i64 p) { return sigma_p_split(p, l); });
}

EulerProduct sigma_tilde(i64 d, i64 pmax, const std::string& cache_dir) {
    u64 key = fnv_mix(fnv_mix(0xcbf29ce484222325ULL, 0x6e6f6e73706c6974ULL /*"nonsplit"*/), u64(d));
    return assemble(pmax, cache_dir, key, [&](i64 p) { return sigma_p_nonsplit(p, d); });
}

EulerProduct euler_cp(const LocalProblem& prob, i64 pmax, const std::string& cache_dir) {
    u64 key = fnv_mix(0xcbf29ce484222325ULL, 0x6370ULL /*"cp"*/);
    key = fnv_mix(key, prob.q1.hash());
    key = fnv_mix(key, prob.q2.hash());
    key = fnv_mix(key, u64(prob.shift));
    key = fnv_mix(key, u64(prob.cc1.modulus));
    key = fnv_mix(key, u64(prob.cc2.modulus));
    for (i64 r : prob.cc1.residues) key = fnv_mix(key, u64(r));
    for (i64 r : prob.cc2.residues) key = fnv_mix(key, u64(r));
    return assemble(pmax, cache_dir, key, [&](i64 p) {
        LocalDensity d = density_cp(p, prob);
        return GammaValue{d.normalized, d.level, d.stabilized};
    });
}

double iwaniec_c(i64 l, i64 pmax, const std::string& cache_dir) {
    if (l < 1) throw std::invalid_argument("iwaniec_c: l >= 1 required");
    LocalProblem prob = LocalProblem::plain(QuadForm::sum_of_squares(2), QuadForm::sum_of_squares(2), l);
    EulerProduct ep = euler_cp(prob, pmax, cache_dir);
    return M_PI * M_PI * ep.value;
}

}  // namespace qc
