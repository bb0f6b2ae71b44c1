#pragma once

#include <optional>
#include <vector>

#include "cimp/rational.hpp"

namespace cimp {

/// Dense matrix over exact rationals.
class ExactMatrix {
public:
    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const ExactMatrix& o) const = default;

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    ExactMatrix plus_constant(const Rational& c) const {
        ExactMatrix m = *this;
        for (auto& x : m.data_) x += c;
        return m;
    }

    ExactMatrix scaled(const Rational& c) const {
        ExactMatrix m = *this;
        for (auto& x : m.data_) x *= c;
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

/// Exact rank via fraction-free (Bareiss) elimination on the integer matrix
/// obtained by clearing denominators row by row.
inline std::size_t rank_exact(const ExactMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        mpz_class scale = 1;
        for (std::size_t c = 0; c < cols; ++c)
            scale = scale / gcd(scale, m.at(r, c).get_den()) * m.at(r, c).get_den();
        for (std::size_t c = 0; c < cols; ++c) {
            mpq_class v = m.at(r, c) * Rational(scale);
            a[r][c] = v.get_num();
        }
    }

    std::size_t rank = 0;
    mpz_class prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c)
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
            a[r][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

/// Solves A x = b exactly. Returns nullopt when inconsistent; when the system
/// is underdetermined free variables are set to zero.
inline std::optional<std::vector<Rational>> solve_linear(const ExactMatrix& a,
                                                         const std::vector<Rational>& b) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::vector<Rational>> aug(rows, std::vector<Rational>(cols + 1));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) aug[r][c] = a.at(r, c);
        aug[r][cols] = b[r];
    }

    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && aug[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(aug[piv], aug[row]);
        Rational inv = Rational(1) / aug[row][col];
        for (std::size_t c = col; c <= cols; ++c) aug[row][c] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || aug[r][col] == 0) continue;
            Rational f = aug[r][col];
            for (std::size_t c = col; c <= cols; ++c) aug[r][c] -= f * aug[row][c];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t r = row; r < rows; ++r)
        if (aug[r][cols] != 0) return std::nullopt;

    std::vector<Rational> x(cols, Rational(0));
    for (std::size_t k = 0; k < pivot_col.size(); ++k) x[pivot_col[k]] = aug[k][cols];
    return x;
}

/// Kronecker sum over Z_p: entry in row i*s+i' and column j*t+j' is
/// A(i,j) + B(i',j') mod p, for A q x r and B s x t.
inline ExactMatrix kronecker_sum(const ExactMatrix& a, const ExactMatrix& b, int p) {
    ExactMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                    long va = a.at(i, j).get_num().get_si();
                    long vb = b.at(i2, j2).get_num().get_si();
                    m.at(i * b.rows() + i2, j * b.cols() + j2) = ((va + vb) % p + p) % p;
                }
    return m;
}

} // namespace cimp
