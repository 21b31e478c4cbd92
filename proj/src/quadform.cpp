#include "quadcorr/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qc {

QuadForm::QuadForm(int dim, std::vector<i64> upper_coeffs) : dim_(dim), c_(std::move(upper_coeffs)) {
    if (dim < 1) throw std::invalid_argument("QuadForm: dim >= 1 required");
    if (c_.size() != std::size_t(dim) * (dim + 1) / 2)
        throw std::invalid_argument("QuadForm: coefficient count mismatch");
}

std::size_t QuadForm::idx(int i, int j) const {
    // row-major upper triangle: row i starts at i*dim - i(i-1)/2
    return std::size_t(i) * dim_ - std::size_t(i) * (i - 1) / 2 + std::size_t(j - i);
}

QuadForm QuadForm::sum_of_squares(int k) {
    std::vector<i64> d(std::size_t(k), 1);
    return diagonal(std::move(d));
}

QuadForm QuadForm::diagonal(std::vector<i64> d) {
    int k = int(d.size());
    std::vector<i64> c(std::size_t(k) * (k + 1) / 2, 0);
    QuadForm q(k, std::move(c));
    for (int i = 0; i < k; ++i) q.c_[q.idx(i, i)] = d[std::size_t(i)];
    return q;
}

i64 QuadForm::coeff(int i, int j) const { return c_[idx(i, j)]; }

i64 QuadForm::evaluate(const i64* x) const {
    i128 s = 0;
    std::size_t t = 0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) s += i128(c_[t++]) * x[i] * x[j];
    if (s > i128(INT64_MAX) || s < i128(INT64_MIN)) throw std::overflow_error("QuadForm::evaluate overflow");
    return i64(s);
}

i64 QuadForm::evaluate(const std::vector<i64>& x) const {
    if (int(x.size()) != dim_) throw std::invalid_argument("QuadForm::evaluate: arity");
    return evaluate(x.data());
}

bool QuadForm::is_diagonal() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
            if (c_[idx(i, j)] != 0) return false;
    return true;
}

i64 QuadForm::max_abs_coeff() const {
    i64 m = 0;
    for (i64 v : c_) m = std::max(m, v < 0 ? -v : v);
    return m;
}

namespace {
// Exact determinant of a k x k integer matrix by fraction-free Bareiss elimination.
i128 det_bareiss(std::vector<i128> m, int k) {
    i128 prev = 1;
    int sign = 1;
    for (int c = 0; c < k - 1; ++c) {
        if (m[std::size_t(c) * k + c] == 0) {
            int r = c + 1;
            while (r < k && m[std::size_t(r) * k + c] == 0) ++r;
            if (r == k) return 0;
            for (int j = 0; j < k; ++j) std::swap(m[std::size_t(c) * k + j], m[std::size_t(r) * k + j]);
            sign = -sign;
        }
        for (int r = c + 1; r < k; ++r)
            for (int j = c + 1; j < k; ++j)
                m[std::size_t(r) * k + j] =
                    (m[std::size_t(r) * k + j] * m[std::size_t(c) * k + c] -
                     m[std::size_t(r) * k + c] * m[std::size_t(c) * k + j]) / prev;
        prev = m[std::size_t(c) * k + c];
    }
    return sign * m[std::size_t(k - 1) * k + k - 1];
}
}  // namespace

i128 QuadForm::doubled_det() const {
    std::vector<i128> m(std::size_t(dim_) * dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (i == j)
                m[std::size_t(i) * dim_ + j] = 2 * i128(coeff(i, i));
            else
                m[std::size_t(i) * dim_ + j] = i128(coeff(std::min(i, j), std::max(i, j)));
        }
    return det_bareiss(std::move(m), dim_);
}

bool QuadForm::is_positive_definite() const {
    // all leading principal minors of the doubled matrix positive
    for (int k = 1; k <= dim_; ++k) {
        std::vector<i128> m(std::size_t(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                if (i == j)
                    m[std::size_t(i) * k + j] = 2 * i128(coeff(i, i));
                else
                    m[std::size_t(i) * k + j] = i128(coeff(std::min(i, j), std::max(i, j)));
            }
        if (det_bareiss(std::move(m), k) <= 0) return false;
    }
    return true;
}

double QuadForm::gram_det() const { return double(doubled_det()) / std::pow(2.0, dim_); }

u64 QuadForm::hash() const {
    u64 h = 1469598103934665603ULL;
    auto mix = [&h](u64 v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    mix(u64(dim_));
    for (i64 v : c_) mix(u64(v));
    return h;
}

QuadForm QuadForm::transformed(const std::vector<i64>& U) const {
    if (U.size() != std::size_t(dim_) * dim_) throw std::invalid_argument("transformed: U size");
    // B' = U^T B U on the doubled matrix, then read back the upper triangle.
    std::vector<i128> B(std::size_t(dim_) * dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            B[std::size_t(i) * dim_ + j] =
                (i == j) ? 2 * i128(coeff(i, i)) : i128(coeff(std::min(i, j), std::max(i, j)));
    std::vector<i128> T(std::size_t(dim_) * dim_, 0), B2(std::size_t(dim_) * dim_, 0);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                T[std::size_t(i) * dim_ + j] += i128(U[std::size_t(k) * dim_ + i]) * B[std::size_t(k) * dim_ + j];
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int k = 0; k < dim_; ++k)
                B2[std::size_t(i) * dim_ + j] += T[std::size_t(i) * dim_ + k] * i128(U[std::size_t(k) * dim_ + j]);
    std::vector<i64> c(std::size_t(dim_) * (dim_ + 1) / 2);
    QuadForm out(dim_, c);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            i128 v = (i == j) ? B2[std::size_t(i) * dim_ + j] / 2 : B2[std::size_t(i) * dim_ + j];
            out.c_[out.idx(i, j)] = i64(v);
        }
    return out;
}

CongruenceClass::CongruenceClass(i64 A, std::vector<i64> r) : modulus(A), residues(std::move(r)) {
    if (A < 1) throw std::invalid_argument("CongruenceClass: modulus >= 1 required");
    for (auto& v : residues) v = ((v % A) + A) % A;
}

}  // namespace qc
