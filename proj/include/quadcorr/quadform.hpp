#pragma once

// Integral positive-definite quadratic forms Q(x) = sum_{i<=j} q_ij x_i x_j,
// stored as an upper-triangular coefficient table, plus residue-class
// constraints on lattice variables.

#include <cstddef>
#include <vector>

#include "quadcorr/arith.hpp"

namespace qc {

class QuadForm {
  public:
    QuadForm(int dim, std::vector<i64> upper_coeffs);  // row-major i<=j, size dim*(dim+1)/2

    static QuadForm sum_of_squares(int k);
    static QuadForm diagonal(std::vector<i64> d);

    int dim() const { return dim_; }
    i64 coeff(int i, int j) const;  // i <= j
    const std::vector<i64>& coeffs() const { return c_; }

    i64 evaluate(const std::vector<i64>& x) const;
    i64 evaluate(const i64* x) const;

    bool is_diagonal() const;
    i64 max_abs_coeff() const;
    bool is_positive_definite() const;  // exact, leading minors of the doubled matrix
    i128 doubled_det() const;           // det of the doubled symmetric matrix (exact)
    double gram_det() const;            // det of the real Gram matrix = doubled_det / 2^dim
    u64 hash() const;                   // FNV-1a over dim and coefficients

    // Apply a unimodular integer change of variables x -> U x (U is dim x dim,
    // row-major). Returns the form Q(Ux).
    QuadForm transformed(const std::vector<i64>& U) const;

  private:
    int dim_;
    std::vector<i64> c_;
    std::size_t idx(int i, int j) const;  // i <= j
};

// A residue vector a mod A constraining each coordinate of a lattice variable.
struct CongruenceClass {
    i64 modulus = 1;
    std::vector<i64> residues;  // entries reduced into [0, modulus)

    CongruenceClass() = default;
    CongruenceClass(i64 A, std::vector<i64> r);
    static CongruenceClass trivial(int k) { return CongruenceClass(1, std::vector<i64>(std::size_t(k), 0)); }
    int dim() const { return int(residues.size()); }
};

}  // namespace qc
