#include "quivermute/linalg.hpp"

#include "quivermute/error.hpp"

#include <cassert>
#include <stdexcept>

namespace qm {

Rational parse_rational(const std::string& s) {
    auto bad = [&](const char* why) { return Error(ErrorCode::ParseError, "bad rational \"" + s + "\": " + why); };
    if (s.empty()) throw bad("empty");
    std::size_t slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto digits = [](const std::string& t, bool sign_ok) {
        std::size_t i = 0;
        if (sign_ok && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (!digits(num, true) || !digits(den, false)) throw bad("expected p or p/q");
    if (num[0] == '+') num = num.substr(1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw bad("zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
    if (a == 0) return;
    for (const auto& [k, v] : x) {
        auto it = y.find(k);
        if (it == y.end()) {
            y.emplace(k, a * v);
        } else {
            it->second += a * v;
            if (it->second == 0) y.erase(it);
        }
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("from_rows: ragged input");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

Rational& Matrix::at(std::size_t r, std::size_t c) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("Matrix::at");
    return data_[r * cols_ + c];
}

const Rational& Matrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("Matrix::at");
    return data_[r * cols_ + c];
}

Vec Matrix::row(std::size_t r) const {
    return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) p.at(i, j) += a * o.at(k, j);
        }
    return p;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: shape mismatch");
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if (v[k] != 0) out[i] += at(i, k) * v[k];
    return out;
}

Rref rref(const Matrix& m) {
    Rref out{m, {}, 0};
    Matrix& a = out.reduced;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a.at(p, c) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(r, j));
        Rational inv = 1 / a.at(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a.at(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a.at(i, c) == 0) continue;
            Rational f = a.at(i, c);
            for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    return out;
}

std::vector<Vec> kernel_basis(const Matrix& m) {
    Rref rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : rr.pivots) is_pivot[p] = true;
    std::vector<Vec> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v(m.cols());
        v[f] = 1;
        for (std::size_t k = 0; k < rr.rank; ++k) v[rr.pivots[k]] = -rr.reduced.at(k, f);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Vec> canonical_span(const std::vector<Vec>& vectors, std::size_t dim) {
    if (vectors.empty()) return {};
    Rref rr = rref(Matrix::from_rows(vectors, dim));
    std::vector<Vec> out;
    for (std::size_t k = 0; k < rr.rank; ++k) out.push_back(rr.reduced.row(k));
    return out;
}

std::vector<Vec> orthogonal_complement(const std::vector<Vec>& vectors, std::size_t dim) {
    // w is orthogonal to every v iff M w = 0 with the v as rows of M.
    Matrix m = vectors.empty() ? Matrix(0, dim) : Matrix::from_rows(vectors, dim);
    return canonical_span(kernel_basis(m), dim);
}

std::size_t rank_of(const std::vector<Vec>& vectors, std::size_t dim) {
    if (vectors.empty()) return 0;
    return rref(Matrix::from_rows(vectors, dim)).rank;
}

}  // namespace qm
