#pragma once

#include <set>
#include <vector>

#include "cimp/csp.hpp"
#include "cimp/polynomial.hpp"

namespace cimp {

/// Lagrange indicator: 1 at value v, 0 on the rest of {0,...,t-1}.
inline Polynomial indicator_polynomial(int v, int t, int var, int arity) {
    if (v < 0 || v >= t) throw std::invalid_argument("indicator: value out of domain");
    Polynomial p = Polynomial::constant(arity, 1);
    Rational denom = 1;
    for (int a = 0; a < t; ++a) {
        if (a == v) continue;
        p = p * (Polynomial::variable(arity, var) - Polynomial::constant(arity, a));
        denom *= Rational(v - a);
    }
    return (Rational(1) / denom) * p;
}

/// prod_{a in D} (x - a); vanishes exactly on the domain.
inline Polynomial domain_polynomial(int var, int t, int arity) {
    Polynomial p = Polynomial::constant(arity, 1);
    for (int a = 0; a < t; ++a)
        p = p * (Polynomial::variable(arity, var) - Polynomial::constant(arity, a));
    return p;
}

/// The product polynomial of a constraint, vanishing within D^scope exactly on
/// the relation's tuples: prod_{v in R} (1 - prod_j delta_{v_j}(x_{i_j})).
inline Polynomial constraint_product_polynomial(const CspInstance& p, const Constraint& c) {
    const int arity = p.var_count();
    const Relation& r = p.relation_of(c);
    Polynomial prod = Polynomial::constant(arity, 1);
    for (const auto& tuple : r.tuples) {
        Polynomial ind = Polynomial::constant(arity, 1);
        for (std::size_t j = 0; j < tuple.size(); ++j)
            ind = ind * indicator_polynomial(tuple[j], p.domain_size, c.scope[j], arity);
        prod = prod * (Polynomial::constant(arity, 1) - ind);
    }
    return prod;
}

/// Generating system of one constraint's ideal: the product polynomial plus a
/// domain polynomial per scope variable.
inline std::vector<Polynomial> constraint_generators(const CspInstance& p, const Constraint& c) {
    std::vector<Polynomial> gens;
    gens.push_back(constraint_product_polynomial(p, c));
    std::set<int> scope_vars(c.scope.begin(), c.scope.end());
    for (int v : scope_vars) gens.push_back(domain_polynomial(v, p.domain_size, p.var_count()));
    return gens;
}

/// Generators of the combinatorial ideal of the instance: domain polynomials by
/// variable index, then constraint product polynomials by constraint index.
inline std::vector<Polynomial> instance_ideal(const CspInstance& p) {
    std::vector<Polynomial> gens;
    for (int v = 0; v < p.var_count(); ++v)
        gens.push_back(domain_polynomial(v, p.domain_size, p.var_count()));
    for (const auto& c : p.constraints) gens.push_back(constraint_product_polynomial(p, c));
    return gens;
}

/// Interpolates values over distinct points by a least-degree solve: candidate
/// monomials with per-variable degree below the per-coordinate value counts are
/// scanned in ascending grlex and kept greedily while they add rank; the
/// resulting square system is solved exactly.
inline Polynomial interpolate_map(const std::vector<std::vector<int>>& points,
                                  const std::vector<Rational>& values) {
    if (points.empty()) throw std::invalid_argument("interpolate_map: no points");
    if (points.size() != values.size())
        throw std::invalid_argument("interpolate_map: points/values size mismatch");
    const std::size_t ell = points.front().size();
    {
        std::set<std::vector<int>> uniq(points.begin(), points.end());
        if (uniq.size() != points.size())
            throw std::invalid_argument("interpolate_map: duplicate points");
    }

    std::vector<int> maxdeg(ell, 0);
    for (std::size_t c = 0; c < ell; ++c) {
        std::set<int> vals;
        for (const auto& pt : points) vals.insert(pt[c]);
        maxdeg[c] = static_cast<int>(vals.size()) - 1;
    }

    // All candidate exponent vectors within the per-variable bounds.
    std::vector<Exponents> candidates;
    Exponents cur(ell, 0);
    while (true) {
        candidates.push_back(cur);
        std::size_t i = ell;
        while (i > 0 && cur[i - 1] == maxdeg[i - 1]) cur[--i] = 0;
        if (i == 0) break;
        ++cur[i - 1];
    }
    MonomialOrder ord = MonomialOrder::grlex(static_cast<int>(ell));
    std::sort(candidates.begin(), candidates.end(),
              [&](const Exponents& a, const Exponents& b) { return ord.less(a, b); });

    auto eval_monomial = [](const Exponents& e, const std::vector<int>& pt) {
        Rational r = 1;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) r *= pt[i];
        return r;
    };

    // Greedy rank-building Gaussian elimination over the point-evaluation
    // columns; rows record how each reduced column combines chosen monomials.
    const std::size_t m = points.size();
    std::vector<Exponents> support;
    std::vector<std::vector<Rational>> echelon; // reduced columns, length m
    std::vector<std::size_t> pivot_rows;

    for (const auto& cand : candidates) {
        if (support.size() == m) break;
        std::vector<Rational> col(m);
        for (std::size_t r = 0; r < m; ++r) col[r] = eval_monomial(cand, points[r]);
        std::vector<Rational> reduced = col;
        for (std::size_t k = 0; k < echelon.size(); ++k) {
            Rational factor = reduced[pivot_rows[k]];
            if (factor == 0) continue;
            for (std::size_t r = 0; r < m; ++r) reduced[r] -= factor * echelon[k][r];
        }
        std::size_t pivot = m;
        for (std::size_t r = 0; r < m; ++r)
            if (reduced[r] != 0) {
                pivot = r;
                break;
            }
        if (pivot == m) continue;
        Rational inv = Rational(1) / reduced[pivot];
        for (std::size_t r = 0; r < m; ++r) reduced[r] *= inv;
        support.push_back(cand);
        echelon.push_back(std::move(reduced));
        pivot_rows.push_back(pivot);
    }
    if (support.size() != m)
        throw std::logic_error("interpolate_map: candidate pool did not reach full rank");

    // Solve sum_j c_j * monomial_j(point_r) = values[r] by dense elimination.
    std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(m + 1));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < m; ++j) aug[r][j] = eval_monomial(support[j], points[r]);
        aug[r][m] = values[r];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && aug[piv][col] == 0) ++piv;
        if (piv == m) throw std::logic_error("interpolate_map: singular system");
        std::swap(aug[piv], aug[col]);
        Rational inv = Rational(1) / aug[col][col];
        for (std::size_t j = col; j <= m; ++j) aug[col][j] *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            Rational f = aug[r][col];
            for (std::size_t j = col; j <= m; ++j) aug[r][j] -= f * aug[col][j];
        }
    }

    Polynomial result(static_cast<int>(ell));
    for (std::size_t j = 0; j < m; ++j) result.add_term(support[j], aug[j][m]);
    return result;
}

} // namespace cimp
