#include "quadcorr/arith.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace qc {

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s += char('0' + int(v % 10));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string_i128(i128 v) {
    if (v < 0) return "-" + to_string_u128(u128(-v));
    return to_string_u128(u128(v));
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int s = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) s = -s;
    }
    // factor out 2s from n: each contributes (a|2)
    int v2 = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v2;
    }
    if (v2 & 1) {
        i64 r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) s = -s;
    }
    // Jacobi loop on odd n > 0
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            i64 r = n % 8;
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(a, n);
        if ((a % 4 == 3) && (n % 4 == 3)) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

std::vector<std::int8_t> moebius_sieve(i64 N, int threads, std::size_t budget_bytes) {
    if (N < 1) throw std::invalid_argument("moebius_sieve: N >= 1 required");
    if (std::size_t(N + 1) * (sizeof(std::int8_t) + sizeof(i64)) > budget_bytes)
        throw capacity_error("moebius_sieve: N exceeds memory budget");
    auto primes = primes_up_to(i64(std::sqrt(double(N))) + 1);
    std::vector<std::int8_t> mu(std::size_t(N) + 1, 1);
    std::vector<i64> rem(std::size_t(N) + 1);
    for (i64 i = 0; i <= N; ++i) rem[std::size_t(i)] = i;
    mu[0] = 0;

    auto work = [&](i64 lo, i64 hi) {  // [lo, hi)
        for (i64 p : primes) {
            if (p * p > hi) break;
            i64 p2 = p * p;
            for (i64 m = ((lo + p - 1) / p) * p; m < hi; m += p) {
                mu[std::size_t(m)] = std::int8_t(-mu[std::size_t(m)]);
                rem[std::size_t(m)] /= p;
            }
            for (i64 m = ((lo + p2 - 1) / p2) * p2; m < hi; m += p2) mu[std::size_t(m)] = 0;
        }
        for (i64 m = lo; m < hi; ++m)
            if (rem[std::size_t(m)] > 1) mu[std::size_t(m)] = std::int8_t(-mu[std::size_t(m)]);
    };

    threads = std::max(1, threads);
    if (threads == 1 || N < 1 << 16) {
        work(1, N + 1);
    } else {
        std::vector<std::thread> pool;
        i64 chunk = (N + threads) / threads;
        for (int t = 0; t < threads; ++t) {
            i64 lo = 1 + t * chunk, hi = std::min(N + 1, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return mu;
}

FundClass classify_discriminant(i64 d) {
    if (d >= 0) throw std::invalid_argument("classify_discriminant: d < 0 required");
    FundClass fc;
    fc.residue_mod8 = int(((d % 8) + 8) % 8);
    i64 r4 = ((d % 4) + 4) % 4;
    if (r4 == 1) {
        if (is_squarefree(d)) fc.kind = FundKind::OddFund;
    } else if (r4 == 0) {
        i64 m = d / 4;
        i64 m4 = ((m % 4) + 4) % 4;
        if ((m4 == 2 || m4 == 3) && is_squarefree(m)) fc.kind = FundKind::EvenFund;
    }
    return fc;
}

int valuation(i64 p, i64 n) {
    if (n == 0) throw std::invalid_argument("valuation: n != 0 required");
    if (p < 2) throw std::invalid_argument("valuation: p >= 2 required");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_squarefree(i64 n) {
    if (n == 0) return false;
    if (n < 0) n = -n;
    if (n % 4 == 0) return false;
    for (i64 p = 2; p * p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    // remaining n is 1, prime, p*q, or a prime square
    if (n == 1) return true;
    i64 r = i64(std::sqrt(double(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r != n;
}

i64 mulmod_u64(u64 a, u64 b, u64 m) { return i64((u128(a) * b) % m); }

i64 powmod(i64 base, i64 exp, i64 mod) {
    u64 r = 1 % u64(mod), b = u64(((base % mod) + mod) % mod);
    u64 e = u64(exp);
    while (e) {
        if (e & 1) r = u64((u128(r) * b) % u64(mod));
        b = u64((u128(b) * b) % u64(mod));
        e >>= 1;
    }
    return i64(r);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    i64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        i64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(u64(x), u64(x), u64(n));
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> comp(std::size_t(n) + 1, false);
    for (i64 i = 2; i <= n; ++i) {
        if (!comp[std::size_t(i)]) {
            out.push_back(i);
            for (i64 j = i * i; j <= n; j += i) comp[std::size_t(j)] = true;
        }
    }
    return out;
}

std::vector<i64> divisors(i64 n) {
    if (n < 1) throw std::invalid_argument("divisors: n >= 1 required");
    std::vector<i64> out;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

u128 gcd_u128(u128 a, u128 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1;
    a = ((a % m) + m) % m;
    i64 b = a;
    while (b) {
        i64 q = g / b;
        g -= q * b;
        std::swap(g, b);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw std::invalid_argument("inv_mod: not coprime");
    return ((x % m) + m) % m;
}

Rat::Rat(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    u128 g = gcd_u128(n < 0 ? u128(-n) : u128(n), u128(d));
    if (g > 1) {
        n /= i128(g);
        d /= i128(g);
    }
    num = n;
    den = d;
}

Rat Rat::operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
Rat Rat::operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }
Rat Rat::operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }

double Rat::to_double() const { return double(num) / double(den); }

std::string Rat::str() const {
    if (den == 1) return to_string_i128(num);
    return to_string_i128(num) + "/" + to_string_i128(den);
}

}  // namespace qc
