#pragma once

// Representation-number sieves r_Q(n) and class numbers h(-n) by reduced-form
// enumeration. The two class-number routes (reduced forms here, Gauss identity
// via h_from_r3) are kept independent of each other.

#include <optional>
#include <string>
#include <vector>

#include "quadcorr/quadform.hpp"

namespace qc {

struct RepTable {
    QuadForm form;
    i64 bound = 0;                    // counts valid for 0 <= n <= bound
    std::vector<std::uint32_t> counts;

    std::uint32_t at(i64 n) const { return counts[std::size_t(n)]; }
    u64 total() const;                // sum of counts = lattice points with Q(x) <= bound
};

// Exact count of representations Q(x) = n for all n <= N, enumerating the
// ellipsoid Q(x) <= N. Optional congruence restriction x ≡ cc.residues mod
// cc.modulus. Throws capacity_error when the estimated point count exceeds
// `budget_points`.
RepTable rq_sieve(const QuadForm& Q, i64 N, const CongruenceClass& cc, int threads = 1,
                  double budget_points = 8e9);
RepTable rq_sieve(const QuadForm& Q, i64 N, int threads = 1, double budget_points = 8e9);

// Direct lattice-point count #{x : Q(x) <= N} without building a table.
u64 ball_count(const QuadForm& Q, i64 N);

// r(n) = 4 sum_{d | n} chi(d), chi the nonprincipal character mod 4.
i64 r2_divisor(i64 n);

// h(D) for a fundamental discriminant D < 0, by exhaustive enumeration of
// reduced primitive forms (a,b,c): b^2-4ac = D, |b| <= a <= c, gcd(a,b,c)=1,
// b >= 0 when |b| = a or a = c. Rejects non-fundamental D.
i64 class_number(i64 D);

// Batched reduced-form counts: out[n] = #reduced primitive forms of
// discriminant -n, for 0 <= n <= N (equals h(-n) when -n is fundamental).
std::vector<std::uint32_t> reduced_form_count_table(i64 N, int threads = 1);

// Same counts along the quadratic sequence: out[n] = #reduced primitive forms
// of discriminant -(n^2+d), 1 <= n <= X (index 0 unused).
std::vector<std::uint32_t> reduced_form_count_quadratic(i64 X, i64 d, int threads = 1);

// Gauss identity route: h(-n) = r3(n) / (12(1 - (-n|2))). Requires -n
// fundamental, n > 4, -n not ≡ 1 mod 8; throws if the division is not exact.
i64 h_from_r3(i64 n, const RepTable& r3);

// Sieve cache: little-endian binary {u32 magic, u32 version, u64 form_hash,
// u64 N} followed by the u32 counts array.
void write_rep_table(const std::string& path, const RepTable& t);
std::optional<RepTable> read_rep_table(const std::string& path, const QuadForm& expected_form,
                                       i64 expected_N);
// Loads from `cache_dir` when present, else sieves and stores. Empty dir = no caching.
RepTable rq_sieve_cached(const QuadForm& Q, i64 N, const std::string& cache_dir, int threads = 1);

}  // namespace qc
