#include "quadcorr/repnum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <thread>

namespace qc {

namespace {

i64 isqrt_i64(i64 n) {
    if (n < 0) return -1;
    i64 r = i64(std::sqrt(double(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Unit-ball volume of dimension k (for budget estimates).
double unit_ball_vol(int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= std::sqrt(M_PI) / std::tgamma(i / 2.0 + 1) * std::tgamma((i - 1) / 2.0 + 1);
    // simpler: v_k = pi^{k/2} / Gamma(k/2 + 1)
    return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1);
}

// Fincke-Pohst style enumerator over Q(x) <= N with optional congruence
// restriction. Float LDL bounds widened by one step; exact integer values
// decide membership, so the count is exact.
struct Enumerator {
    const QuadForm& Q;
    i64 N;
    const CongruenceClass& cc;
    int k;
    std::vector<double> D;   // LDL pivots
    std::vector<double> C;   // C[i*k+j] = L_{ji} factors (j > i)

    Enumerator(const QuadForm& q, i64 n, const CongruenceClass& c) : Q(q), N(n), cc(c), k(q.dim()) {
        // real Gram matrix G, G_ii = q_ii, G_ij = q_ij / 2
        std::vector<double> G(std::size_t(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                G[std::size_t(i) * k + j] =
                    (i == j) ? double(Q.coeff(i, i)) : double(Q.coeff(std::min(i, j), std::max(i, j))) / 2.0;
        D.assign(std::size_t(k), 0.0);
        C.assign(std::size_t(k) * k, 0.0);
        // LDL^T with Q(x) = sum_i D_i (x_i + sum_{j>i} C_ij x_j)^2
        for (int i = 0; i < k; ++i) {
            double d = G[std::size_t(i) * k + i];
            for (int m = 0; m < i; ++m) d -= D[std::size_t(m)] * C[std::size_t(m) * k + i] * C[std::size_t(m) * k + i];
            D[std::size_t(i)] = d;
            if (d <= 0) throw std::invalid_argument("rq_sieve: form not positive definite");
            for (int j = i + 1; j < k; ++j) {
                double v = G[std::size_t(i) * k + j];
                for (int m = 0; m < i; ++m)
                    v -= D[std::size_t(m)] * C[std::size_t(m) * k + i] * C[std::size_t(m) * k + j];
                C[std::size_t(i) * k + j] = v / d;
            }
        }
    }

    // Recursive descent choosing x[level], level from k-1 down to 0.
    // exact_tail = exact value of Q restricted to chosen coordinates (> level).
    // For pruning we track the float FP partial sum of D_j (x_j + c_j)^2 over j > level.
    template <typename Sink>
    void descend(int level, std::vector<i64>& x, double fp_partial, Sink&& sink,
                 i64 lo_override, i64 hi_override, bool use_override) {
        double center = 0.0;
        for (int j = level + 1; j < k; ++j) center += C[std::size_t(level) * k + j] * double(x[std::size_t(j)]);
        double rad2 = (double(N) * (1.0 + 1e-12) + 1.0 - fp_partial) / D[std::size_t(level)];
        if (rad2 < 0) return;
        double rad = std::sqrt(rad2);
        i64 lo = i64(std::floor(-center - rad)) - 1;
        i64 hi = i64(std::ceil(-center + rad)) + 1;
        if (use_override) {
            lo = std::max(lo, lo_override);
            hi = std::min(hi, hi_override);
        }
        i64 A = cc.modulus;
        i64 a = cc.residues.empty() ? 0 : cc.residues[std::size_t(level)];
        i64 first = lo + (((a - lo) % A) + A) % A;
        for (i64 v = first; v <= hi; v += A) {
            x[std::size_t(level)] = v;
            double t = double(v) + center;
            double fp = fp_partial + D[std::size_t(level)] * t * t;
            if (fp > double(N) * (1.0 + 1e-12) + 1.0) continue;
            if (level == 0) {
                i64 val = Q.evaluate(x.data());
                if (val >= 0 && val <= N) sink(val);
            } else {
                descend(level - 1, x, fp, sink, 0, 0, false);
            }
        }
    }
};

}  // namespace

u64 RepTable::total() const {
    u64 s = 0;
    for (auto c : counts) s += c;
    return s;
}

RepTable rq_sieve(const QuadForm& Q, i64 N, const CongruenceClass& cc, int threads, double budget_points) {
    if (N < 0) throw std::invalid_argument("rq_sieve: N >= 0 required");
    if (!Q.is_positive_definite()) throw std::invalid_argument("rq_sieve: form not positive definite");
    if (cc.dim() != Q.dim()) throw std::invalid_argument("rq_sieve: congruence class arity mismatch");
    int k = Q.dim();
    double est = unit_ball_vol(k) * std::pow(double(N) + 1.0, k / 2.0) / std::sqrt(Q.gram_det()) /
                     std::pow(double(cc.modulus), k) +
                 std::pow(3.0, k);
    if (est > budget_points) throw capacity_error("rq_sieve: estimated point count exceeds budget");

    RepTable out{Q, N, std::vector<std::uint32_t>(std::size_t(N) + 1, 0)};
    Enumerator en(Q, N, cc);

    threads = std::max(1, threads);
    if (threads == 1 || k == 1 || est < 1e6) {
        std::vector<i64> x(std::size_t(k), 0);
        if (k == 1) {
            en.descend(0, x, 0.0, [&](i64 v) { ++out.counts[std::size_t(v)]; }, 0, 0, false);
        } else {
            en.descend(k - 1, x, 0.0, [&](i64 v) { ++out.counts[std::size_t(v)]; }, 0, 0, false);
        }
        return out;
    }

    // chunk the outermost coordinate range; per-thread tables merged by addition
    double rad = std::sqrt(double(N) / en.D[std::size_t(k - 1)]) + 2.0;
    i64 lo = -i64(rad) - 1, hi = i64(rad) + 1;
    std::vector<std::vector<std::uint32_t>> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    i64 span = hi - lo + 1, chunk = (span + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        i64 clo = lo + t * chunk, chi = std::min(hi, clo + chunk - 1);
        if (clo > chi) break;
        parts[std::size_t(t)].assign(std::size_t(N) + 1, 0);
        pool.emplace_back([&, t, clo, chi]() {
            Enumerator e2(Q, N, cc);
            std::vector<i64> x(std::size_t(k), 0);
            auto& tab = parts[std::size_t(t)];
            e2.descend(k - 1, x, 0.0, [&](i64 v) { ++tab[std::size_t(v)]; }, clo, chi, true);
        });
    }
    for (auto& th : pool) th.join();
    for (auto& tab : parts)
        for (std::size_t i = 0; i < tab.size(); ++i) out.counts[i] += tab[i];
    return out;
}

RepTable rq_sieve(const QuadForm& Q, i64 N, int threads, double budget_points) {
    return rq_sieve(Q, N, CongruenceClass::trivial(Q.dim()), threads, budget_points);
}

u64 ball_count(const QuadForm& Q, i64 N) {
    // specialised exact counts: diagonal forms close the innermost coordinate
    // analytically; general forms fall back to the enumerator
    if (Q.is_diagonal() && Q.dim() >= 1) {
        int k = Q.dim();
        i64 qk = Q.coeff(k - 1, k - 1);
        if (k == 1) return u64(2 * isqrt_i64(N / qk) + 1);
        std::vector<i64> diag(std::size_t(k - 1));
        for (int i = 0; i < k - 1; ++i) diag[std::size_t(i)] = Q.coeff(i, i);
        QuadForm Qh = QuadForm::diagonal(diag);
        u64 total = 0;
        CongruenceClass cc = CongruenceClass::trivial(k - 1);
        Enumerator en(Qh, N, cc);
        std::vector<i64> x(std::size_t(k - 1), 0);
        auto sink = [&](i64 v) { total += u64(2 * isqrt_i64((N - v) / qk) + 1); };
        if (k - 1 == 1)
            en.descend(0, x, 0.0, sink, 0, 0, false);
        else
            en.descend(k - 2, x, 0.0, sink, 0, 0, false);
        return total;
    }
    return rq_sieve(Q, N).total();
}

i64 r2_divisor(i64 n) {
    if (n < 1) throw std::invalid_argument("r2_divisor: n >= 1 required");
    auto chi = [](i64 v) -> i64 { return (v & 1) ? ((v % 4 == 1) ? 1 : -1) : 0; };
    i64 s = 0;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += chi(d);
        if (d != n / d) s += chi(n / d);
    }
    return 4 * s;
}

i64 class_number(i64 D) {
    FundClass fc = classify_discriminant(D);
    if (fc.kind == FundKind::NotFundamental)
        throw std::invalid_argument("class_number: D must be a fundamental discriminant");
    i64 n = -D;
    i64 count = 0;
    for (i64 a = 1; 3 * a * a <= n; ++a) {
        i64 q = 4 * a;
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 t = b * b + n;
            if (t % q) continue;
            i64 c = t / q;
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            if (gcd_i64(gcd_i64(a, b), c) != 1) continue;
            ++count;
        }
    }
    return count;
}

std::vector<std::uint32_t> reduced_form_count_table(i64 N, int threads) {
    std::vector<std::uint32_t> h(std::size_t(N) + 1, 0);
    i64 A = isqrt_i64(N / 3);
    threads = std::max(1, threads);

    auto work = [&](i64 a_lo, i64 a_hi, std::vector<std::uint32_t>& out) {
        for (i64 a = a_lo; a <= a_hi; ++a) {
            i64 q = 4 * a;
            for (i64 b = -a + 1; b <= a; ++b) {
                i64 gab = gcd_i64(a, b);
                i64 c0 = std::max(a, (b * b) / q + 1);
                i64 c1 = (N + b * b) / q;
                i64 n = q * c0 - b * b;
                for (i64 c = c0; c <= c1; ++c, n += q) {
                    if (b < 0 && a == c) continue;
                    if (gab != 1 && gcd_i64(gab, c) != 1) continue;
                    ++out[std::size_t(n)];
                }
            }
        }
    };

    if (threads == 1 || A < 64) {
        work(1, A, h);
        return h;
    }
    std::vector<std::vector<std::uint32_t>> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    // balance: cost per a is ~N/2a * 2a = N, so uniform chunks are fine
    i64 chunk = (A + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        i64 lo = 1 + t * chunk, hi = std::min(A, lo + chunk - 1);
        if (lo > hi) break;
        parts[std::size_t(t)].assign(std::size_t(N) + 1, 0);
        pool.emplace_back(work, lo, hi, std::ref(parts[std::size_t(t)]));
    }
    for (auto& th : pool) th.join();
    for (auto& part : parts)
        if (!part.empty())
            for (std::size_t i = 0; i < part.size(); ++i) h[i] += part[i];
    return h;
}

std::vector<std::uint32_t> reduced_form_count_quadratic(i64 X, i64 d, int threads) {
    std::vector<std::uint32_t> h(std::size_t(X) + 1, 0);
    i64 M = X * X + d;
    i64 A = isqrt_i64(M / 3);
    threads = std::max(1, threads);

    auto work = [&](i64 a_lo, i64 a_hi, std::vector<std::uint32_t>& out) {
        std::vector<std::int32_t> head, next, nu;
        for (i64 a = a_lo; a <= a_hi; ++a) {
            i64 q = 4 * a;
            // bucket the residues nu mod q by nu^2 mod q
            head.assign(std::size_t(q), -1);
            next.assign(std::size_t(q), -1);
            nu.assign(std::size_t(q), 0);
            for (i64 v = 0; v < q; ++v) {
                i64 r = (v * v) % q;
                nu[std::size_t(v)] = std::int32_t(v);
                next[std::size_t(v)] = head[std::size_t(r)];
                head[std::size_t(r)] = std::int32_t(v);
            }
            for (i64 b = -a + 1; b <= a; ++b) {
                i64 gab = gcd_i64(a, b);
                i64 r = (((-d - b * b) % q) + q) % q;
                for (std::int32_t it = head[std::size_t(r)]; it != -1; it = next[std::size_t(it)]) {
                    i64 v0 = nu[std::size_t(it)];
                    for (i64 n = (v0 == 0 ? q : v0); n <= X; n += q) {
                        i64 m = n * n + d;
                        i64 c = (m + b * b) / q;
                        if (c < a) continue;
                        if (b < 0 && a == c) continue;
                        if (gab != 1 && gcd_i64(gab, c) != 1) continue;
                        ++out[std::size_t(n)];
                    }
                }
            }
        }
    };

    if (threads == 1 || A < 64) {
        work(1, A, h);
        return h;
    }
    std::vector<std::vector<std::uint32_t>> parts(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    i64 chunk = (A + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        i64 lo = 1 + t * chunk, hi = std::min(A, lo + chunk - 1);
        if (lo > hi) break;
        parts[std::size_t(t)].assign(std::size_t(X) + 1, 0);
        pool.emplace_back(work, lo, hi, std::ref(parts[std::size_t(t)]));
    }
    for (auto& th : pool) th.join();
    for (auto& part : parts)
        if (!part.empty())
            for (std::size_t i = 0; i < part.size(); ++i) h[i] += part[i];
    return h;
}

i64 h_from_r3(i64 n, const RepTable& r3) {
    if (n <= 4) throw std::invalid_argument("h_from_r3: n > 4 required");
    if (n > r3.bound) throw std::invalid_argument("h_from_r3: n beyond table bound");
    FundClass fc = classify_discriminant(-n);
    if (fc.kind == FundKind::NotFundamental)
        throw std::invalid_argument("h_from_r3: -n must be fundamental");
    if (fc.residue_mod8 == 1) throw std::invalid_argument("h_from_r3: -n ≡ 1 mod 8 excluded");
    i64 pref = 12 * (1 - kronecker(-n, 2));
    if (pref == 0) throw std::invalid_argument("h_from_r3: zero prefactor");
    i64 r = i64(r3.at(n));
    if (r % pref != 0) throw std::runtime_error("h_from_r3: identity violation (division not exact)");
    return r / pref;
}

namespace {
constexpr std::uint32_t kMagic = 0x51435254;  // "QCRT"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::FILE* f, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::fwrite(b, 1, sizeof(T), f);
}
template <typename T>
bool get(std::FILE* f, T& v) {
    unsigned char b[sizeof(T)];
    if (std::fread(b, 1, sizeof(T), f) != sizeof(T)) return false;
    std::memcpy(&v, b, sizeof(T));
    return true;
}
}  // namespace

void write_rep_table(const std::string& path, const RepTable& t) {
    std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("write_rep_table: cannot open " + tmp);
    put(f, kMagic);
    put(f, kVersion);
    put(f, t.form.hash());
    put(f, u64(t.bound));
    std::fwrite(t.counts.data(), sizeof(std::uint32_t), t.counts.size(), f);
    std::fclose(f);
    std::filesystem::rename(tmp, path);
}

std::optional<RepTable> read_rep_table(const std::string& path, const QuadForm& expected_form,
                                       i64 expected_N) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return std::nullopt;
    std::uint32_t magic = 0, ver = 0;
    u64 fh = 0, n = 0;
    if (!get(f, magic) || !get(f, ver) || !get(f, fh) || !get(f, n) || magic != kMagic ||
        ver != kVersion || fh != expected_form.hash() || n != u64(expected_N)) {
        std::fclose(f);
        return std::nullopt;
    }
    RepTable t{expected_form, expected_N, std::vector<std::uint32_t>(std::size_t(expected_N) + 1)};
    std::size_t got = std::fread(t.counts.data(), sizeof(std::uint32_t), t.counts.size(), f);
    std::fclose(f);
    if (got != t.counts.size()) return std::nullopt;
    return t;
}

RepTable rq_sieve_cached(const QuadForm& Q, i64 N, const std::string& cache_dir, int threads) {
    if (cache_dir.empty()) return rq_sieve(Q, N, threads);
    char name[64];
    std::snprintf(name, sizeof(name), "rq_%016llx_%lld.bin", (unsigned long long)Q.hash(),
                  (long long)N);
    std::filesystem::path p = std::filesystem::path(cache_dir) / name;
    if (auto t = read_rep_table(p.string(), Q, N)) return *t;
    RepTable t = rq_sieve(Q, N, threads);
    std::filesystem::create_directories(cache_dir);
    write_rep_table(p.string(), t);
    return t;
}

}  // namespace qc
