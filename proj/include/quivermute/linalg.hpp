#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace qm {

using Rational = mpq_class;
using Vec = std::vector<Rational>;
// Sparse vector keyed by coordinate index; never stores zeros.
using SparseVec = std::map<int, Rational>;

// Accepts "p", "-p", "p/q". Throws PARSE_ERROR on junk or a zero denominator.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

void axpy(SparseVec& y, const Rational& a, const SparseVec& x);

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t r, std::size_t c);
    const Rational& at(std::size_t r, std::size_t c) const;
    Vec row(std::size_t r) const;
    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Vec apply(const Vec& v) const;
    bool operator==(const Matrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

struct Rref {
    Matrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

Rref rref(const Matrix& m);

// One vector per free column of the RREF, that coordinate set to 1, other free coordinates 0.
std::vector<Vec> kernel_basis(const Matrix& m);

// Nonzero RREF rows of the span of `vectors`.
std::vector<Vec> canonical_span(const std::vector<Vec>& vectors, std::size_t dim);

// Canonical basis of {w : <w, v> = 0 for all v} under the coordinate dot product.
std::vector<Vec> orthogonal_complement(const std::vector<Vec>& vectors, std::size_t dim);

std::size_t rank_of(const std::vector<Vec>& vectors, std::size_t dim);

}  // namespace qm
