#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cimp/matrix.hpp"
#include "cimp/modp.hpp"

namespace cimp {

constexpr std::size_t kMatrixCap = 1u << 20;

/// Value matrix of the canonical p-expression basis on Z_p^{k+1}; invertible
/// exactly when the basis spans all functions.
inline ExactMatrix basis_value_matrix(int k, int p) {
    std::size_t n = 1;
    for (int i = 0; i <= k; ++i) n *= static_cast<std::size_t>(p);
    if (n > kMatrixCap)
        throw CapExceeded("basis_value_matrix: p^(k+1) exceeds cap " + std::to_string(kMatrixCap));
    return f_basis_value_matrix(k, p);
}

inline int primitive_root(int p) {
    for (int a = 2; a < p; ++a) {
        int x = a % p, order = 1;
        while (x != 1) {
            x = x * a % p;
            ++order;
        }
        if (order == p - 1) return a;
    }
    if (p == 2) return 1;
    throw std::domain_error("primitive_root: p not prime");
}

/// Circulant with first row (1, a, a^2, ..., a^{p-2}) mod p for a primitive
/// root a: the values of the unary maps alpha*x with rearranged rows/columns.
inline ExactMatrix build_Bp(int p) {
    int a = primitive_root(p);
    int m = p - 1;
    std::vector<int> pw(static_cast<std::size_t>(m));
    pw[0] = 1 % p;
    for (int i = 1; i < m; ++i) pw[static_cast<std::size_t>(i)] = pw[static_cast<std::size_t>(i - 1)] * a % p;
    ExactMatrix b(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            b.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                pw[static_cast<std::size_t>(((j - i) % m + m) % m)];
    return b;
}

/// Circulant addition table: entry (i, j) = (j - i) mod p.
inline ExactMatrix build_Cp(int p) {
    ExactMatrix c(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            c.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = ((j - i) % p + p) % p;
    return c;
}

/// N_k = C_p [+] B_p^{[+]k} (Kronecker sums over Z_p), the value matrix of the
/// augmented basis slice on rows (Z_p^*)^k x Z_p.
inline ExactMatrix build_Nk(int k, int p) {
    std::size_t dim = static_cast<std::size_t>(p);
    for (int i = 0; i < k; ++i) dim *= static_cast<std::size_t>(p - 1);
    if (dim * dim > kMatrixCap)
        throw CapExceeded("build_Nk: dimension exceeds cap " + std::to_string(kMatrixCap));
    ExactMatrix acc = build_Cp(p);
    ExactMatrix b = build_Bp(p);
    for (int i = 0; i < k; ++i) acc = kronecker_sum(acc, b, p);
    return acc;
}

// ---------------------------------------------------------------------------
// Eigenvalue spot checks (complex arithmetic; the rank results never touch
// floating point).
// ---------------------------------------------------------------------------

struct EigenSample {
    std::vector<int> eta_exponents; // eta_i as powers of the primitive (p-1)th root
    int xi_exponent = 0;            // xi as a power of the primitive pth root
    std::complex<double> formula_value;
    double residual = 0.0; // max |N v - mu v| entry
    bool pass = false;
};

struct EigenReport {
    std::vector<EigenSample> samples;
    bool all_pass = true;
};

/// Checks mu(eta_1..eta_k; xi) = P(xi) * prod Q(eta_i, xi) against N_k * v for
/// the explicit Kronecker-product eigenvectors, at every root-of-unity tuple.
inline EigenReport eigen_formula_check(int k, int p, double tolerance = 1e-9) {
    using C = std::complex<double>;
    const double pi = 3.141592653589793238462643383279502884;
    const int a = primitive_root(p);
    ExactMatrix nk = build_Nk(k, p);
    const std::size_t dim = nk.rows();

    auto root = [&](int order, int exponent) {
        return std::polar(1.0, 2.0 * pi * exponent / order);
    };

    auto P = [&](C xi, int xi_exp) -> C {
        if (xi_exp % p == 0) return C(p * (p - 1) / 2.0, 0.0);
        return C(static_cast<double>(p), 0.0) / (xi - 1.0);
    };
    // sum_j ((A + j) mod p) xi^j = xi^{-A} P(xi), so the Q factor attached to
    // the eigenvector v(eta...; xi) carries inverse powers of xi.
    auto Q = [&](C eta, C xi) -> C {
        C acc(0.0, 0.0);
        int apow = 1;
        for (int i = 0; i <= p - 2; ++i) {
            acc += std::pow(eta, i) * std::pow(std::conj(xi), apow);
            apow = apow * a % p;
        }
        return acc;
    };

    EigenReport report;
    std::vector<int> eta_exp(static_cast<std::size_t>(k), 0);
    while (true) {
        for (int xi_exp = 0; xi_exp < p; ++xi_exp) {
            C xi = root(p, xi_exp);
            C mu = P(xi, xi_exp);
            for (int i = 0; i < k; ++i) mu *= Q(root(p - 1, eta_exp[static_cast<std::size_t>(i)]), xi);

            // v = v(xi) (x) v(eta_1) (x) ... (x) v(eta_k)
            std::vector<C> v(dim, C(1.0, 0.0));
            for (std::size_t idx = 0; idx < dim; ++idx) {
                std::size_t rest = idx;
                std::vector<int> digits(static_cast<std::size_t>(k) + 1);
                for (int i = k; i >= 1; --i) {
                    digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(p - 1));
                    rest /= static_cast<std::size_t>(p - 1);
                }
                digits[0] = static_cast<int>(rest);
                C val = std::pow(root(p, xi_exp), digits[0]);
                for (int i = 1; i <= k; ++i)
                    val *= std::pow(root(p - 1, eta_exp[static_cast<std::size_t>(i - 1)]),
                                    digits[static_cast<std::size_t>(i)]);
                v[idx] = val;
            }

            double worst = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                C acc(0.0, 0.0);
                for (std::size_t c = 0; c < dim; ++c)
                    acc += C(nk.at(r, c).get_d(), 0.0) * v[c];
                worst = std::max(worst, std::abs(acc - mu * v[r]));
            }

            EigenSample s;
            s.eta_exponents = eta_exp;
            s.xi_exponent = xi_exp;
            s.formula_value = mu;
            s.residual = worst;
            s.pass = worst <= tolerance;
            if (!s.pass) report.all_pass = false;
            report.samples.push_back(std::move(s));
        }
        int i = k - 1;
        while (i >= 0 && eta_exp[static_cast<std::size_t>(i)] == p - 2)
            eta_exp[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++eta_exp[static_cast<std::size_t>(i)];
    }
    return report;
}

// ---------------------------------------------------------------------------
// The mod-3 recursion.
// ---------------------------------------------------------------------------

/// C_1 is the 3x3 value table of {0, x, 2x} on Z_3; C_n is the recursive block
/// matrix with blocks C_{n-1}, C_{n-1}+1, C_{n-1}+2 (entrywise mod 3).
inline ExactMatrix build_C3(int n) {
    std::size_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= 3;
    if (dim * dim > kMatrixCap)
        throw CapExceeded("build_C3: dimension exceeds cap " + std::to_string(kMatrixCap));

    ExactMatrix c(3, 3);
    for (int x = 0; x < 3; ++x)
        for (int a = 0; a < 3; ++a) c.at(static_cast<std::size_t>(x), static_cast<std::size_t>(a)) = a * x % 3;
    for (int level = 2; level <= n; ++level) {
        std::size_t m = c.rows();
        ExactMatrix next(3 * m, 3 * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                long v = c.at(i, j).get_num().get_si();
                // block pattern: row 0: v v v / row 1: v v+1 v+2 / row 2: v v+2 v+1
                int shift[3][3] = {{0, 0, 0}, {0, 1, 2}, {0, 2, 1}};
                for (int bi = 0; bi < 3; ++bi)
                    for (int bj = 0; bj < 3; ++bj)
                        next.at(static_cast<std::size_t>(bi) * m + i, static_cast<std::size_t>(bj) * m + j) =
                            (v + shift[bi][bj]) % 3;
            }
        c = std::move(next);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Exact check behind the linear-independence proposition: the projected value
// matrix of the augmented basis has full row rank on rows with x_{k+1} != 0.
// ---------------------------------------------------------------------------

/// Builds the matrix of f'(x_1..x_k, x_{k+1}) values, where f ranges over the
/// augmented family (full-support coefficient tuples, every constant), rows
/// over (Z_p^*)^k x Z_p^*, with
///   f''(x) = sum_{S subset [k]} (-1)^{k-|S|} f_S(x)   and
///   f'(x, y) = f''(x, y) - f''(x, 0).
inline ExactMatrix fprime_value_matrix(int k, int p) {
    // columns: coefficient tuples in (Z_p^*)^k, constants b in Z_p
    std::vector<std::vector<int>> alphas;
    std::vector<int> cur(static_cast<std::size_t>(k), 1);
    while (true) {
        alphas.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == p - 1)
            cur[static_cast<std::size_t>(i--)] = 1;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
    }
    std::vector<std::vector<int>> points; // (x_1..x_k) over Z_p^*
    points = alphas;                      // same shape: (Z_p^*)^k

    auto f_double_prime = [&](const std::vector<int>& alpha, int b, const std::vector<int>& x,
                              int y) {
        // sum over subsets S of [k] of (-1)^{k-|S|} val(sum_{i in S} a_i x_i + y + b)
        long total_num = 0;
        for (std::size_t mask = 0; mask < (1u << k); ++mask) {
            long acc = y + b;
            int bits = 0;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) {
                    acc += static_cast<long>(alpha[static_cast<std::size_t>(i)]) *
                           x[static_cast<std::size_t>(i)];
                    ++bits;
                }
            int sign = ((k - bits) % 2 == 0) ? 1 : -1;
            total_num += sign * mod_norm(acc, p);
        }
        return total_num;
    };

    std::size_t ncols = alphas.size() * static_cast<std::size_t>(p);
    std::size_t nrows = points.size() * static_cast<std::size_t>(p - 1);
    ExactMatrix m(nrows, ncols);
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        for (int y = 1; y < p; ++y) {
            std::size_t row = pi * static_cast<std::size_t>(p - 1) + static_cast<std::size_t>(y - 1);
            for (std::size_t ai = 0; ai < alphas.size(); ++ai)
                for (int b = 0; b < p; ++b) {
                    std::size_t col = ai * static_cast<std::size_t>(p) + static_cast<std::size_t>(b);
                    long fpp = f_double_prime(alphas[ai], b, points[pi], y) -
                               f_double_prime(alphas[ai], b, points[pi], 0);
                    m.at(row, col) = Rational(fpp);
                }
        }
    }
    return m;
}

} // namespace cimp
