#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cimp/csp.hpp"
#include "cimp/groebner.hpp"
#include "cimp/matrix.hpp"
#include "cimp/polynomial.hpp"

namespace cimp {

inline int mod_norm(long v, int p) { return static_cast<int>(((v % p) + p) % p); }

inline int mod_inverse(int a, int p) {
    a = mod_norm(a, p);
    for (int b = 1; b < p; ++b)
        if (a * b % p == 1) return b;
    throw std::domain_error("mod_inverse: not invertible");
}

/// Linear polynomial over Z_p viewed as a function Z_p^n -> {0,...,p-1} in Q.
struct PExpression {
    int p = 2;
    std::vector<int> coeffs; // one per ring variable, reduced mod p
    int constant = 0;

    static PExpression zero(int p, int nvars) {
        return {p, std::vector<int>(static_cast<std::size_t>(nvars), 0), 0};
    }

    static PExpression var(int p, int nvars, int i) {
        PExpression e = zero(p, nvars);
        e.coeffs[static_cast<std::size_t>(i)] = 1;
        return e;
    }

    /// The constant-one basis element.
    static PExpression one(int p, int nvars) {
        PExpression e = zero(p, nvars);
        e.constant = 1;
        return e;
    }

    int nvars() const { return static_cast<int>(coeffs.size()); }

    bool is_constant() const {
        for (int c : coeffs)
            if (c != 0) return false;
        return true;
    }

    int eval(const std::vector<int>& point) const {
        long acc = constant;
        for (std::size_t i = 0; i < coeffs.size(); ++i) acc += static_cast<long>(coeffs[i]) * point[i];
        return mod_norm(acc, p);
    }

    /// Highest-indexed variable with nonzero coefficient, or -1.
    int leading_var() const {
        for (int i = nvars() - 1; i >= 0; --i)
            if (coeffs[static_cast<std::size_t>(i)] != 0) return i;
        return -1;
    }

    auto operator<=>(const PExpression& o) const = default;
};

using BasisExpansion = std::map<PExpression, Rational>;

inline void expansion_add(BasisExpansion& into, const PExpression& key, const Rational& c) {
    if (c == 0) return;
    auto it = into.find(key);
    if (it == into.end()) {
        into.emplace(key, c);
    } else {
        it->second += c;
        if (it->second == 0) into.erase(it);
    }
}

inline void expansion_add(BasisExpansion& into, const BasisExpansion& other, const Rational& scale) {
    for (const auto& [k, v] : other) expansion_add(into, k, scale * v);
}

inline Rational evaluate_expansion(const BasisExpansion& exp, const std::vector<int>& point) {
    Rational acc = 0;
    for (const auto& [e, c] : exp) acc += c * Rational(e.eval(point));
    return acc;
}

// ---------------------------------------------------------------------------
// The p-expression basis: F_l = { a_1 x_1 + ... + a_l x_l + x_{l+1} + b } with
// a_i in Z_p, b in {0,...,p-2}, plus the constant one. Levels ascending, then
// lexicographic on (a_1,...,a_l, b).
// ---------------------------------------------------------------------------

inline std::vector<PExpression> canonical_f_basis(int k, int p) {
    const int nvars = k + 1;
    std::vector<PExpression> out;
    out.push_back(PExpression::one(p, nvars));
    for (int level = 0; level <= k; ++level) {
        std::vector<int> digits(static_cast<std::size_t>(level), 0); // alpha_1..alpha_level
        while (true) {
            for (int b = 0; b <= p - 2; ++b) {
                PExpression e = PExpression::zero(p, nvars);
                for (int i = 0; i < level; ++i)
                    e.coeffs[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(i)];
                e.coeffs[static_cast<std::size_t>(level)] = 1;
                e.constant = b;
                out.push_back(std::move(e));
            }
            int i = level - 1;
            while (i >= 0 && digits[static_cast<std::size_t>(i)] == p - 1)
                digits[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++digits[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

/// Rows indexed by points of Z_p^{k+1} in lexicographic order (x_1 most
/// significant), columns by the canonical basis; entries are function values.
inline ExactMatrix f_basis_value_matrix(int k, int p) {
    std::vector<PExpression> basis = canonical_f_basis(k, p);
    const int nvars = k + 1;
    std::size_t npoints = 1;
    for (int i = 0; i < nvars; ++i) npoints *= static_cast<std::size_t>(p);

    ExactMatrix m(npoints, basis.size());
    std::vector<int> point(static_cast<std::size_t>(nvars), 0);
    for (std::size_t r = 0; r < npoints; ++r) {
        for (std::size_t c = 0; c < basis.size(); ++c) m.at(r, c) = basis[c].eval(point);
        int i = nvars - 1;
        while (i >= 0 && point[static_cast<std::size_t>(i)] == p - 1)
            point[static_cast<std::size_t>(i--)] = 0;
        if (i >= 0) ++point[static_cast<std::size_t>(i)];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Expansion of sums and products of p-expressions in the basis.
// ---------------------------------------------------------------------------

namespace detail {

/// Coefficients of val(c*w + beta) over {val(w + d) : d <= p-2} and the
/// constant function, solved once per (p, c, beta).
inline const std::vector<Rational>& univariate_value_coeffs(int p, int c, int beta) {
    static std::map<std::tuple<int, int, int>, std::vector<Rational>> cache;
    auto key = std::make_tuple(p, c, beta);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    ExactMatrix m(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    std::vector<Rational> rhs(static_cast<std::size_t>(p));
    for (int w = 0; w < p; ++w) {
        for (int d = 0; d <= p - 2; ++d) m.at(static_cast<std::size_t>(w), static_cast<std::size_t>(d)) = mod_norm(w + d, p);
        m.at(static_cast<std::size_t>(w), static_cast<std::size_t>(p - 1)) = 1;
        rhs[static_cast<std::size_t>(w)] = mod_norm(static_cast<long>(c) * w + beta, p);
    }
    auto sol = solve_linear(m, rhs);
    if (!sol) throw std::logic_error("univariate p-expression basis is singular");
    return cache.emplace(key, std::move(*sol)).first->second;
}

} // namespace detail

/// Exact expansion of a p-expression (as a rational-valued function) in the
/// canonical basis. Only elements touching the expression's variables appear.
inline BasisExpansion pexp_sum_to_basis(const PExpression& e) {
    BasisExpansion out;
    if (e.is_constant()) {
        expansion_add(out, PExpression::one(e.p, e.nvars()), Rational(e.constant));
        return out;
    }
    const int p = e.p;
    int lead = e.leading_var();
    int c = e.coeffs[static_cast<std::size_t>(lead)];
    int cinv = mod_inverse(c, p);

    PExpression v = PExpression::zero(p, e.nvars());
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        v.coeffs[i] = mod_norm(static_cast<long>(cinv) * e.coeffs[i], p);

    // e = val(c * v + beta) pointwise, a univariate function of v's value.
    const auto& uc = detail::univariate_value_coeffs(p, c, e.constant);
    for (int d = 0; d <= p - 2; ++d) {
        PExpression key = v;
        key.constant = d;
        expansion_add(out, key, uc[static_cast<std::size_t>(d)]);
    }
    expansion_add(out, PExpression::one(p, e.nvars()), uc[static_cast<std::size_t>(p - 1)]);
    return out;
}

namespace detail {

/// Expansion of the monomial function (y_1,...,y_d) -> prod val(y_i) over the
/// canonical basis in y, solved once per (p, d) from the p^d value matrix.
inline const std::vector<std::pair<PExpression, Rational>>& h_monomial_expansion(int p, int d) {
    static std::map<std::pair<int, int>, std::vector<std::pair<PExpression, Rational>>> cache;
    auto key = std::make_pair(p, d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<PExpression> basis = canonical_f_basis(d - 1, p);
    ExactMatrix m = f_basis_value_matrix(d - 1, p);
    std::vector<Rational> rhs(m.rows());
    std::vector<int> point(static_cast<std::size_t>(d), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Rational prod = 1;
        for (int i = 0; i < d; ++i) prod *= point[static_cast<std::size_t>(i)];
        rhs[r] = prod;
        int i = d - 1;
        while (i >= 0 && point[static_cast<std::size_t>(i)] == p - 1)
            point[static_cast<std::size_t>(i--)] = 0;
        if (i >= 0) ++point[static_cast<std::size_t>(i)];
    }
    auto sol = solve_linear(m, rhs);
    if (!sol) throw std::logic_error("h-basis value matrix is singular");

    std::vector<std::pair<PExpression, Rational>> expansion;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if ((*sol)[i] != 0) expansion.emplace_back(basis[i], (*sol)[i]);
    return cache.emplace(key, std::move(expansion)).first->second;
}

} // namespace detail

/// Product of p-expressions as a rational-valued function, expanded exactly in
/// the canonical basis: the product is first expanded in the basis over the
/// factors treated as indeterminates (one p^d-sized solve per (p, d), cached),
/// then each resulting composite p-expression is pushed through
/// pexp_sum_to_basis.
inline BasisExpansion pexp_product_to_basis(const std::vector<PExpression>& hs) {
    if (hs.empty()) throw std::invalid_argument("pexp_product_to_basis: empty factor list");
    if (hs.size() == 1) return pexp_sum_to_basis(hs.front());
    const int p = hs.front().p;
    const int n = hs.front().nvars();
    const int d = static_cast<int>(hs.size());

    BasisExpansion out;
    for (const auto& [helem, coeff] : detail::h_monomial_expansion(p, d)) {
        if (helem.is_constant()) {
            // constant basis element of the h-ring contributes a plain constant
            expansion_add(out, PExpression::one(p, n), coeff * Rational(helem.constant));
            continue;
        }
        PExpression composed = PExpression::zero(p, n);
        long constant = helem.constant;
        for (int i = 0; i < d; ++i) {
            int a = helem.coeffs[static_cast<std::size_t>(i)];
            if (a == 0) continue;
            for (int v = 0; v < n; ++v)
                composed.coeffs[static_cast<std::size_t>(v)] = mod_norm(
                    composed.coeffs[static_cast<std::size_t>(v)] +
                        static_cast<long>(a) * hs[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(v)],
                    p);
            constant += static_cast<long>(a) * hs[static_cast<std::size_t>(i)].constant;
        }
        composed.constant = mod_norm(constant, p);
        expansion_add(out, pexp_sum_to_basis(composed), coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Systems of linear equations over Z_p and the implicit lex basis.
// ---------------------------------------------------------------------------

struct ModPSystem {
    int p = 2;
    int nvars = 0;
    std::vector<std::pair<std::vector<int>, int>> equations; // (coefficients, rhs)

    bool satisfied_by(const std::vector<int>& point) const {
        for (const auto& [coeffs, rhs] : equations) {
            long acc = 0;
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                acc += static_cast<long>(coeffs[i]) * point[i];
            if (mod_norm(acc, p) != mod_norm(rhs, p)) return false;
        }
        return true;
    }

    std::vector<std::vector<int>> solutions() const {
        std::vector<std::vector<int>> out;
        std::vector<int> point(static_cast<std::size_t>(nvars), 0);
        while (true) {
            if (satisfied_by(point)) out.push_back(point);
            int i = nvars - 1;
            while (i >= 0 && point[static_cast<std::size_t>(i)] == p - 1)
                point[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++point[static_cast<std::size_t>(i)];
        }
        return out;
    }
};

/// Reduced row echelon form of the system. Pivot variable x_i carries the
/// p-expression f_i over later non-pivot variables such that x_i = f_i on the
/// solution set. Nullopt when the system is inconsistent.
struct RrefResult {
    std::map<int, PExpression> pivots;
    std::vector<int> free_vars;
};

inline std::optional<RrefResult> rref_mod_p(const ModPSystem& s) {
    const int p = s.p, n = s.nvars;
    std::vector<std::vector<int>> rows;
    for (const auto& [coeffs, rhs] : s.equations) {
        std::vector<int> row(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = mod_norm(coeffs[static_cast<std::size_t>(i)], p);
        row[static_cast<std::size_t>(n)] = mod_norm(rhs, p);
        rows.push_back(std::move(row));
    }

    std::vector<int> pivot_cols;
    std::size_t rank = 0;
    for (int col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][static_cast<std::size_t>(col)] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        int inv = mod_inverse(rows[rank][static_cast<std::size_t>(col)], p);
        for (auto& v : rows[rank]) v = mod_norm(static_cast<long>(v) * inv, p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank) continue;
            int f = rows[r][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (std::size_t cidx = 0; cidx < rows[r].size(); ++cidx)
                rows[r][cidx] = mod_norm(rows[r][cidx] - static_cast<long>(f) * rows[rank][cidx], p);
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (rows[r][static_cast<std::size_t>(n)] != 0) return std::nullopt;

    RrefResult out;
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) {
        int col = pivot_cols[k];
        is_pivot[static_cast<std::size_t>(col)] = true;
        PExpression f = PExpression::zero(p, n);
        for (int j = 0; j < n; ++j) {
            if (j == col) continue;
            int a = rows[k][static_cast<std::size_t>(j)];
            if (a != 0) f.coeffs[static_cast<std::size_t>(j)] = mod_norm(-a, p);
        }
        f.constant = rows[k][static_cast<std::size_t>(n)];
        out.pivots.emplace(col, std::move(f));
    }
    for (int i = 0; i < n; ++i)
        if (!is_pivot[static_cast<std::size_t>(i)]) out.free_vars.push_back(i);
    return out;
}

/// Implicit description of the reduced lex basis G1: pivot variables carry
/// x_i - f_i, free variables carry the domain polynomial prod_{a in Z_p}(x - a).
/// The f_i are never expanded into monomials.
struct ImplicitBasis {
    int p = 2;
    int nvars = 0;
    std::map<int, PExpression> pivot_assign;
    std::vector<int> free_vars;

    PExpression expression_for(int var) const {
        auto it = pivot_assign.find(var);
        if (it != pivot_assign.end()) return it->second;
        return PExpression::var(p, nvars, var);
    }

    bool is_free(int var) const { return pivot_assign.find(var) == pivot_assign.end(); }
};

inline ImplicitBasis implicit_G1(const RrefResult& rref, int nvars, int p) {
    return {p, nvars, rref.pivots, rref.free_vars};
}

/// Normal form of a monomial by G1 as a multiset of p-expressions: pivot
/// variables substituted by their assignments, free variables kept verbatim.
/// Free-variable exponents must be below p (higher powers are pre-reduced by
/// the domain-polynomial rewrite in the conversion algorithm).
inline std::vector<PExpression> reduce_monomial_G1(const Exponents& q, const ImplicitBasis& g1) {
    std::vector<PExpression> out;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == 0) continue;
        if (g1.is_free(static_cast<int>(i)) && q[i] >= g1.p)
            throw std::invalid_argument("reduce_monomial_G1: free-variable exponent >= p");
        PExpression f = g1.expression_for(static_cast<int>(i));
        for (int k = 0; k < q[i]; ++k) out.push_back(f);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Algorithm: conversion of G1 into a d-truncated grlex basis.
// ---------------------------------------------------------------------------

struct ConversionResult {
    GroebnerBasis basis;
    std::vector<Exponents> standard_monomials; // B(G2), ascending grlex
};

namespace detail {

/// x^e mod prod_{a in Z_p}(x - a) as dense coefficients c_0..c_{p-1}.
inline std::vector<Rational> power_mod_domain(int e, int p) {
    std::vector<Rational> domain(static_cast<std::size_t>(p) + 1);
    domain[0] = 1; // coefficients of prod (x - a), built low-degree last
    {
        std::vector<Rational> coeffs{1}; // leading-first representation
        for (int a = 0; a < p; ++a) {
            std::vector<Rational> next(coeffs.size() + 1, Rational(0));
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                next[i] += coeffs[i];
                next[i + 1] -= Rational(a) * coeffs[i];
            }
            coeffs = std::move(next);
        }
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            domain[coeffs.size() - 1 - i] = coeffs[i]; // now index = degree
    }

    std::vector<Rational> r(static_cast<std::size_t>(p), Rational(0));
    if (e < p) {
        r[static_cast<std::size_t>(e)] = 1;
        return r;
    }
    // x^p = -(m - x^p), then repeated multiply-by-x with reduction.
    std::vector<Rational> xp(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) xp[static_cast<std::size_t>(i)] = -domain[static_cast<std::size_t>(i)];
    r = xp;
    for (int step = p; step < e; ++step) {
        std::vector<Rational> shifted(static_cast<std::size_t>(p), Rational(0));
        Rational top = r[static_cast<std::size_t>(p - 1)];
        for (int i = p - 1; i >= 1; --i) shifted[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i - 1)];
        for (int i = 0; i < p; ++i)
            shifted[static_cast<std::size_t>(i)] += top * xp[static_cast<std::size_t>(i)];
        r = std::move(shifted);
    }
    return r;
}

inline std::vector<Exponents> monomials_up_to_degree(int nvars, int d, const MonomialOrder& ord) {
    std::vector<Exponents> out;
    Exponents cur(static_cast<std::size_t>(nvars), 0);
    // odometer over exponents bounded by d in each slot, filtered by total degree
    while (true) {
        int td = total_degree(cur);
        if (td >= 1 && td <= d) out.push_back(cur);
        int i = nvars - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == d) cur[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end(),
              [&](const Exponents& x, const Exponents& y) { return ord.less(x, y); });
    return out;
}

} // namespace detail

/// FGLM-style conversion: iterates monomials of degree <= d in ascending
/// grlex; multiples of committed leading monomials are discarded, monomials
/// whose G1 normal form depends R-linearly on those of the standard set are
/// emitted as basis elements, the rest grow the standard set. The dependence
/// test works entirely in basis expansions; an incremental echelon keeps each
/// test a single sparse reduction.
inline ConversionResult convert_truncated_gb(const ImplicitBasis& g1, int d) {
    const int n = g1.nvars;
    const int p = g1.p;
    MonomialOrder ord = MonomialOrder::grlex(n);

    struct EchelonRow {
        BasisExpansion vec;             // pivot coefficient normalized to 1
        std::vector<Rational> combo;    // expression of vec over B's expansions
    };
    std::vector<EchelonRow> echelon;

    std::vector<Exponents> standard;   // B(G2) monomials, ascending
    std::vector<Polynomial> basis_out; // G2
    std::vector<Exponents> basis_lms;

    auto reduce_against_echelon = [&](BasisExpansion target) {
        std::vector<Rational> combo(standard.size(), Rational(0));
        bool progress = true;
        while (progress && !target.empty()) {
            progress = false;
            for (const auto& row : echelon) {
                const PExpression& pivot = row.vec.begin()->first;
                auto it = target.find(pivot);
                if (it == target.end() || it->second == 0) continue;
                Rational f = it->second;
                expansion_add(target, row.vec, Rational(-f));
                for (std::size_t j = 0; j < row.combo.size(); ++j) combo[j] += f * row.combo[j];
                progress = true;
            }
        }
        return std::make_pair(std::move(target), std::move(combo));
    };

    // Standard set starts at {1}; its normal form is the constant function 1.
    {
        standard.push_back(Exponents(static_cast<std::size_t>(n), 0));
        BasisExpansion one;
        expansion_add(one, PExpression::one(p, n), Rational(1));
        echelon.push_back({std::move(one), {Rational(1)}});
    }

    for (const Exponents& q : detail::monomials_up_to_degree(n, d, ord)) {
        bool discard = false;
        for (const auto& lm : basis_lms)
            if (divides(lm, q)) {
                discard = true;
                break;
            }
        if (discard) continue;

        // Free variable powers >= p reduce through the domain polynomial;
        // the pieces are strictly smaller monomials that must sit in B.
        int high_free = -1;
        for (int i = 0; i < n; ++i)
            if (q[static_cast<std::size_t>(i)] >= p && g1.is_free(i)) {
                high_free = i;
                break;
            }
        if (high_free >= 0) {
            std::vector<Rational> coeffs =
                detail::power_mod_domain(q[static_cast<std::size_t>(high_free)], p);
            Polynomial g = Polynomial::monomial(n, q, 1);
            for (int m = 0; m < p; ++m) {
                if (coeffs[static_cast<std::size_t>(m)] == 0) continue;
                Exponents b = q;
                b[static_cast<std::size_t>(high_free)] = m;
                bool in_standard = false;
                for (const auto& s : standard)
                    if (s == b) {
                        in_standard = true;
                        break;
                    }
                if (!in_standard)
                    throw std::logic_error("conversion: domain-reduced monomial missing from B");
                g.add_term(std::move(b), -coeffs[static_cast<std::size_t>(m)]);
            }
            basis_out.push_back(std::move(g));
            basis_lms.push_back(q);
            continue;
        }

        BasisExpansion nf = pexp_product_to_basis(reduce_monomial_G1(q, g1));
        auto [residual, combo] = reduce_against_echelon(std::move(nf));
        if (residual.empty()) {
            Polynomial g = Polynomial::monomial(n, q, 1);
            for (std::size_t j = 0; j < standard.size(); ++j)
                if (combo[j] != 0) g.add_term(standard[j], -combo[j]);
            basis_out.push_back(std::move(g));
            basis_lms.push_back(q);
        } else {
            // New independent standard monomial: normalize and remember how the
            // reduced vector decomposes over B (for later coefficient recovery).
            Rational pivcoef = residual.begin()->second;
            BasisExpansion vec;
            expansion_add(vec, residual, Rational(1) / pivcoef);
            std::vector<Rational> row_combo(standard.size() + 1, Rational(0));
            for (std::size_t j = 0; j < combo.size(); ++j) row_combo[j] = -combo[j] / pivcoef;
            row_combo[standard.size()] = Rational(1) / pivcoef;
            for (auto& row : echelon) row.combo.resize(standard.size() + 1, Rational(0));
            standard.push_back(q);
            echelon.push_back({std::move(vec), std::move(row_combo)});
        }
    }

    return {{std::move(basis_out), ord, d}, std::move(standard)};
}

/// Decides f0 membership in the combinatorial ideal of the system's solution
/// set, for deg f0 <= d. Inconsistent systems put 1 in the ideal, so
/// everything is a member.
inline bool decide_modp(const Polynomial& f0, const ModPSystem& s, int d) {
    if (f0.degree() > d)
        throw CapExceeded("decide_modp: polynomial degree " + std::to_string(f0.degree()) +
                          " exceeds bound " + std::to_string(d));
    auto rref = rref_mod_p(s);
    if (!rref) return true;
    ImplicitBasis g1 = implicit_G1(*rref, s.nvars, s.p);
    ConversionResult conv = convert_truncated_gb(g1, std::max(d, 0));
    return normal_form(f0, conv.basis).is_zero();
}

// ---------------------------------------------------------------------------
// Linear system text format:
//
//   p 3
//   vars x1 x2 x3
//   1*x1 + 2*x2 + 0*x3 = 1
// ---------------------------------------------------------------------------

inline ModPSystem parse_modp_system(const std::string& text, VarTable& vars) {
    ModPSystem s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool p_seen = false, vars_seen = false;
    auto fail = [&](const std::string& msg) {
        throw ParseError("system line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;

        if (word == "p") {
            if (!(ls >> s.p) || s.p < 2) fail("bad modulus");
            for (int q = 2; q * q <= s.p; ++q)
                if (s.p % q == 0) fail("modulus must be prime");
            p_seen = true;
        } else if (word == "vars") {
            std::string v;
            while (ls >> v) vars.intern(v);
            s.nvars = vars.size();
            vars_seen = true;
        } else {
            if (!p_seen || !vars_seen) fail("equations must follow 'p' and 'vars'");
            auto eq = line.find('=');
            if (eq == std::string::npos) fail("missing '='");
            std::string lhs = line.substr(0, eq), rhs = line.substr(eq + 1);
            int rhs_val = 0;
            {
                std::istringstream rs(rhs);
                if (!(rs >> rhs_val)) fail("bad right-hand side");
            }
            std::vector<int> coeffs(static_cast<std::size_t>(s.nvars), 0);
            detail::PolyLexer lx{lhs};
            bool first = true;
            while (!lx.done()) {
                int sign = 1;
                if (!first) {
                    char op = lx.take();
                    if (op == '+') sign = 1;
                    else if (op == '-') sign = -1;
                    else fail("expected '+' or '-'");
                } else if (lx.peek() == '-') {
                    lx.take();
                    sign = -1;
                }
                first = false;
                int coef = 1;
                if (lx.peek() >= '0' && lx.peek() <= '9') {
                    coef = std::stoi(lx.take_number());
                    if (lx.peek() == '*') lx.take();
                }
                if (lx.done() || !detail::ident_start(lx.peek())) fail("expected variable");
                std::string name = lx.take_ident();
                auto id = vars.find(name);
                if (!id) fail("unknown variable '" + name + "'");
                coeffs[static_cast<std::size_t>(*id)] =
                    mod_norm(coeffs[static_cast<std::size_t>(*id)] + static_cast<long>(sign) * coef, s.p);
            }
            s.equations.emplace_back(std::move(coeffs), mod_norm(rhs_val, s.p));
        }
    }
    if (!p_seen) throw ParseError("system: missing 'p' line");
    if (!vars_seen) throw ParseError("system: missing 'vars' line");
    return s;
}

// ---------------------------------------------------------------------------
// Affine-closed relations as linear equations (for the CSP -> system route).
// ---------------------------------------------------------------------------

namespace detail {

/// Incremental echelon over GF(p): rows keyed by leading index, lead
/// coefficient 1, zeros before the lead.
struct GfpEchelon {
    int p = 2;
    int width = 0;
    std::map<int, std::vector<int>> rows;

    /// Reduces v and inserts it when independent; returns true on insert.
    bool insert(std::vector<int> v) {
        for (int i = 0; i < width; ++i) {
            if (v[static_cast<std::size_t>(i)] == 0) continue;
            auto it = rows.find(i);
            if (it == rows.end()) {
                int inv = mod_inverse(v[static_cast<std::size_t>(i)], p);
                for (auto& x : v) x = mod_norm(static_cast<long>(x) * inv, p);
                rows.emplace(i, std::move(v));
                return true;
            }
            int f = v[static_cast<std::size_t>(i)];
            for (int j = i; j < width; ++j)
                v[static_cast<std::size_t>(j)] = mod_norm(
                    v[static_cast<std::size_t>(j)] -
                        static_cast<long>(f) * it->second[static_cast<std::size_t>(j)],
                    p);
        }
        return false;
    }
};

} // namespace detail

/// Equations over the relation's coordinate slots whose solution set within
/// Z_p^k is exactly the relation. Nullopt when the relation is not a coset of
/// a linear subspace (i.e. not closed under x - y + z).
inline std::optional<std::vector<std::pair<std::vector<int>, int>>> relation_linear_equations(
    const Relation& r, int p) {
    if (r.tuples.empty()) return std::nullopt;
    const int k = r.arity;
    const std::vector<int>& t0 = *r.tuples.begin();

    detail::GfpEchelon directions{p, k, {}};
    for (const auto& t : r.tuples) {
        std::vector<int> diff(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            diff[static_cast<std::size_t>(i)] =
                mod_norm(t[static_cast<std::size_t>(i)] - t0[static_cast<std::size_t>(i)], p);
        directions.insert(std::move(diff));
    }

    std::size_t expected = 1;
    for (std::size_t i = 0; i < directions.rows.size(); ++i) expected *= static_cast<std::size_t>(p);
    if (expected != r.tuples.size()) return std::nullopt;

    // Null-space vectors of the direction space: one per free column, pivot
    // entries filled by back-substitution over the echelon rows (descending).
    std::vector<std::pair<std::vector<int>, int>> equations;
    for (int free = 0; free < k; ++free) {
        if (directions.rows.count(free)) continue;
        std::vector<int> w(static_cast<std::size_t>(k), 0);
        w[static_cast<std::size_t>(free)] = 1;
        for (auto it = directions.rows.rbegin(); it != directions.rows.rend(); ++it) {
            long acc = 0;
            for (int j = it->first + 1; j < k; ++j)
                acc += static_cast<long>(it->second[static_cast<std::size_t>(j)]) *
                       w[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(it->first)] = mod_norm(-acc, p);
        }
        long rhs = 0;
        for (int i = 0; i < k; ++i)
            rhs += static_cast<long>(w[static_cast<std::size_t>(i)]) * t0[static_cast<std::size_t>(i)];
        equations.emplace_back(std::move(w), mod_norm(rhs, p));
    }
    // Verify exactly: every relation tuple satisfies, and counts match.
    ModPSystem probe{p, k, equations};
    for (const auto& t : r.tuples)
        if (!probe.satisfied_by(t)) return std::nullopt;
    if (probe.solutions().size() != r.tuples.size()) return std::nullopt;
    return equations;
}

/// A whole instance as one linear system over GF(p); requires every used
/// relation to be affine-closed.
inline ModPSystem instance_to_modp_system(const CspInstance& inst) {
    const int p = inst.domain_size;
    ModPSystem s{p, inst.var_count(), {}};
    std::map<std::string, std::vector<std::pair<std::vector<int>, int>>> cache;
    for (const auto& c : inst.constraints) {
        auto it = cache.find(c.relation);
        if (it == cache.end()) {
            auto eqs = relation_linear_equations(inst.relation_of(c), p);
            if (!eqs)
                throw EngineInapplicable("relation '" + c.relation +
                                         "' is not expressible as linear equations mod " +
                                         std::to_string(p));
            it = cache.emplace(c.relation, std::move(*eqs)).first;
        }
        for (const auto& [w, rhs] : it->second) {
            std::vector<int> coeffs(static_cast<std::size_t>(s.nvars), 0);
            for (std::size_t pos = 0; pos < w.size(); ++pos) {
                int var = c.scope[pos];
                coeffs[static_cast<std::size_t>(var)] =
                    mod_norm(coeffs[static_cast<std::size_t>(var)] + w[pos], p);
            }
            s.equations.emplace_back(std::move(coeffs), rhs);
        }
    }
    return s;
}

} // namespace cimp
