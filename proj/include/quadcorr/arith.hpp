#pragma once

// Exact integer arithmetic primitives: Kronecker symbol, Moebius sieve,
// fundamental-discriminant classification, p-adic valuation, divisors.
// All arithmetic is 64-bit signed with 128-bit intermediates; overflow in
// user-facing helpers throws std::overflow_error.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qc {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Thrown when an operation would exceed its configured memory/time budget.
class capacity_error : public std::runtime_error {
  public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("i64 multiply overflow");
    return r;
}
inline i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("i64 add overflow");
    return r;
}

std::string to_string_i128(i128 v);
std::string to_string_u128(u128 v);

// Kronecker symbol (a|n), total under the standard extension:
// (a|1) = 1, (a|0) = [|a| = 1], (a|-1) = sign-of-a factor, (a|2) via the mod-8 table.
int kronecker(i64 a, i64 n);

// mu(n) for 1 <= n <= N, index 0 unused. Segmented and deterministic under any
// thread count. Throws capacity_error when N exceeds `budget_bytes`.
std::vector<std::int8_t> moebius_sieve(i64 N, int threads = 1,
                                       std::size_t budget_bytes = std::size_t(1) << 30);

enum class FundKind { NotFundamental, OddFund, EvenFund };

struct FundClass {
    FundKind kind = FundKind::NotFundamental;
    int residue_mod8 = 0;  // input reduced into [0,8)
};

// Classification of d < 0 per the fundamental-discriminant definition:
// d ≡ 1 mod 4 squarefree, or d = 4m with m squarefree and m ≡ 2,3 mod 4.
FundClass classify_discriminant(i64 d);

// v_p(n): exponent of the prime p in n != 0.
int valuation(i64 p, i64 n);

bool is_squarefree(i64 n);           // trial division, n != 0
bool is_prime(i64 n);                // deterministic Miller-Rabin for 64-bit
std::vector<i64> primes_up_to(i64 n);
std::vector<i64> divisors(i64 n);    // sorted ascending, n >= 1

i64 gcd_i64(i64 a, i64 b);
u128 gcd_u128(u128 a, u128 b);
i64 mulmod_u64(u64 a, u64 b, u64 m);
i64 powmod(i64 base, i64 exp, i64 mod);
i64 inv_mod(i64 a, i64 m);  // a^{-1} mod m, gcd(a,m)=1

// Exact rational on 128-bit integers, always reduced, den > 0.
struct Rat {
    i128 num = 0;
    i128 den = 1;

    Rat() = default;
    Rat(i128 n, i128 d);
    static Rat from_int(i128 n) { return Rat(n, 1); }

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }

    double to_double() const;
    std::string str() const;  // "num/den", or "num" when den == 1
};

}  // namespace qc
