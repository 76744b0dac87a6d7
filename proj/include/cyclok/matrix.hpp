#pragma once
// Dense integer matrices and Smith normal form.

#include "arith.hpp"

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

namespace cyclok {

class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
            for (long v : row) a_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMatrix diagonal(const std::vector<Int>& d) {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static IntMatrix column(const std::vector<Int>& v) {
        IntMatrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Int> col(std::size_t j) const {
        std::vector<Int> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<Int> row(std::size_t i) const {
        return std::vector<Int>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
        IntMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& x = (*this)(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }
    std::vector<Int> operator*(const std::vector<Int>& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("IntMatrix: dimension mismatch in apply");
        std::vector<Int> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) r[i] += (*this)(i, k) * v[k];
        return r;
    }
    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: dimension mismatch in sum");
        IntMatrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    IntMatrix scaled(const Int& s) const {
        IntMatrix r = *this;
        for (auto& x : r.a_) x *= s;
        return r;
    }
    IntMatrix transposed() const {
        IntMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    // columns [c0, c1)
    IntMatrix col_range(std::size_t c0, std::size_t c1) const {
        IntMatrix r(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = c0; j < c1; ++j) r(i, j - c0) = (*this)(i, j);
        return r;
    }
    IntMatrix row_range(std::size_t r0, std::size_t r1) const {
        IntMatrix r(r1 - r0, cols_);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i - r0, j) = (*this)(i, j);
        return r;
    }
    static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("IntMatrix: hcat row mismatch");
        IntMatrix r(a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) r(i, a.cols_ + j) = b(i, j);
        }
        return r;
    }
    static IntMatrix vcat(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("IntMatrix: vcat column mismatch");
        IntMatrix r(a.rows_ + b.rows_, a.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) r(a.rows_ + i, j) = b(i, j);
        return r;
    }

    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }
    void swap_cols(std::size_t j, std::size_t k) {
        if (j == k) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
    }
    // row_i += q * row_k
    void add_row(std::size_t i, std::size_t k, const Int& q) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) += q * (*this)(k, j);
    }
    void add_col(std::size_t j, std::size_t k, const Int& q) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) += q * (*this)(i, k);
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

// floor division toward -inf, remainder in [0, |b|)
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int mod_nonneg(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

struct Snf {
    IntMatrix S, U, V, Uinv;
    std::vector<Int> diag() const {
        std::vector<Int> d;
        for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
        return d;
    }
    std::size_t rank() const {
        std::size_t r = 0;
        for (auto& x : diag())
            if (x != 0) ++r;
        return r;
    }
};

// U * M * V == S, U * Uinv == 1
inline Snf snf(const IntMatrix& M) {
    const std::size_t r = M.rows(), c = M.cols();
    Snf out{M, IntMatrix::identity(r), IntMatrix::identity(c), IntMatrix::identity(r)};
    IntMatrix& A = out.S;
    auto row_op = [&](std::size_t i, std::size_t k, const Int& q) {  // row_i += q row_k
        A.add_row(i, k, q);
        out.U.add_row(i, k, q);
        out.Uinv.add_col(k, i, -q);
    };
    auto row_swap = [&](std::size_t i, std::size_t k) {
        A.swap_rows(i, k);
        out.U.swap_rows(i, k);
        out.Uinv.swap_cols(i, k);
    };
    auto col_op = [&](std::size_t j, std::size_t k, const Int& q) {
        A.add_col(j, k, q);
        out.V.add_col(j, k, q);
    };
    auto col_swap = [&](std::size_t j, std::size_t k) {
        A.swap_cols(j, k);
        out.V.swap_cols(j, k);
    };

    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        for (;;) {
            // minimal nonzero |entry| in the trailing block
            std::size_t pi = r, pj = c;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (A(i, j) != 0 && (pi == r || abs(A(i, j)) < abs(A(pi, pj)))) { pi = i; pj = j; }
            if (pi == r) break;
            row_swap(t, pi);
            col_swap(t, pj);
            bool dirty = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (A(i, t) == 0) continue;
                row_op(i, t, -fdiv(A(i, t), A(t, t)));
                if (A(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (A(t, j) == 0) continue;
                col_op(j, t, -fdiv(A(t, j), A(t, t)));
                if (A(t, j) != 0) dirty = true;
            }
            if (dirty) continue;
            // divisibility: pull a non-multiple into row t
            bool fixed = true;
            for (std::size_t i = t + 1; i < r && fixed; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (A(i, j) % A(t, t) != 0) {
                        row_op(t, i, Int(1));
                        fixed = false;
                        break;
                    }
            if (fixed) break;
        }
        if (t < r && t < c && A(t, t) < 0) {
            A.negate_row(t);
            out.U.negate_row(t);
            for (std::size_t i = 0; i < r; ++i) out.Uinv(i, t) = -out.Uinv(i, t);
        }
    }
    return out;
}

// basis (as columns) of the integer kernel {x : M x = 0}
inline IntMatrix integer_kernel(const IntMatrix& M) {
    Snf s = snf(M);
    std::size_t rk = s.rank();
    return s.V.col_range(rk, M.cols());
}

// determinant of a square integer matrix (Bareiss)
inline Int determinant(IntMatrix A) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("determinant: matrix not square");
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (A(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && A(p, k) == 0) ++p;
            if (p == n) return 0;
            A.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = A(i, j) * A(k, k) - A(i, k) * A(k, j);
                mpz_divexact(A(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = A(k, k);
    }
    return sign * A(n - 1, n - 1);
}

}  // namespace cyclok
