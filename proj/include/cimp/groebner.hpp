#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cimp/polynomial.hpp"

namespace cimp {

/// A (possibly degree-truncated) Groebner basis together with the order it was
/// computed under. Generators are monic and inter-reduced when produced by
/// buchberger(); explicitly constructed values (e.g. from the dual-discriminator
/// pipeline) carry whatever generators the caller supplied.
struct GroebnerBasis {
    std::vector<Polynomial> generators;
    MonomialOrder order;
    std::optional<int> truncation_degree;

    bool is_trivial_unit() const {
        return generators.size() == 1 && generators.front().is_constant() &&
               !generators.front().is_zero();
    }
};

namespace detail {

inline void make_monic(Polynomial& g, const MonomialOrder& ord) {
    auto [c, m] = g.leading(ord);
    if (c != 1) g = (Rational(1) / c) * g;
}

/// Keeps only generators whose leading monomial is not divisible by another's,
/// then tail-reduces each survivor against the rest. Result is the reduced
/// basis (unique for a fixed order when the input generates the ideal's LT).
inline std::vector<Polynomial> interreduce(std::vector<Polynomial> gens,
                                           const MonomialOrder& ord) {
    for (auto& g : gens) make_monic(g, ord);
    std::sort(gens.begin(), gens.end(), [&](const Polynomial& a, const Polynomial& b) {
        return ord.less(a.leading_monomial(ord), b.leading_monomial(ord));
    });

    std::vector<Polynomial> minimal;
    for (const auto& g : gens) {
        Exponents lm = g.leading_monomial(ord);
        bool redundant = false;
        for (const auto& kept : minimal) {
            if (divides(kept.leading_monomial(ord), lm)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(g);
    }

    std::vector<Polynomial> reduced = minimal;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        std::vector<Polynomial> others;
        for (std::size_t j = 0; j < reduced.size(); ++j)
            if (j != i) others.push_back(reduced[j]);
        if (others.empty()) break;
        reduced[i] = divide(reduced[i], others, ord).remainder;
        make_monic(reduced[i], ord);
    }
    return reduced;
}

} // namespace detail

/// Buchberger's algorithm. Pairs are processed by smallest lcm in the active
/// order (ties by generator insertion index). With degree_bound set, pairs
/// whose lcm exceeds the bound are dropped and generators above the bound are
/// excluded from the returned basis; membership answers derived from such a
/// basis are sound, and complete for inputs of degree <= bound whenever the
/// truncation captured the full truncated basis.
inline GroebnerBasis buchberger(const std::vector<Polynomial>& generators,
                                const MonomialOrder& ord,
                                std::optional<int> degree_bound = std::nullopt) {
    if (generators.empty()) throw std::invalid_argument("buchberger: no generators");
    for (const auto& g : generators)
        if (g.is_zero()) throw std::invalid_argument("buchberger: zero generator");
    const int arity = generators.front().arity();

    std::vector<Polynomial> basis;
    for (const auto& g : generators) {
        Polynomial h = g;
        detail::make_monic(h, ord);
        basis.push_back(h);
    }

    struct Pair {
        std::size_t i, j;
        Exponents lcm;
    };
    std::vector<Pair> pairs;
    auto push_pairs_for = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            Exponents l = exponent_lcm(basis[i].leading_monomial(ord),
                                       basis[j].leading_monomial(ord));
            if (degree_bound && total_degree(l) > *degree_bound) continue;
            pairs.push_back({i, j, std::move(l)});
        }
    };
    for (std::size_t j = 0; j < basis.size(); ++j) push_pairs_for(j);

    while (!pairs.empty()) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pairs.size(); ++k) {
            auto c = ord.compare(pairs[k].lcm, pairs[best].lcm);
            if (c < 0 || (c == 0 && std::tie(pairs[k].i, pairs[k].j) <
                                        std::tie(pairs[best].i, pairs[best].j)))
                best = k;
        }
        Pair pr = pairs[best];
        pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));

        // Relatively prime leading monomials always reduce to zero.
        Exponents lmi = basis[pr.i].leading_monomial(ord);
        Exponents lmj = basis[pr.j].leading_monomial(ord);
        if (pr.lcm == exponent_sum(lmi, lmj)) continue;

        Polynomial s = s_polynomial(basis[pr.i], basis[pr.j], ord);
        Polynomial r = divide(s, basis, ord).remainder;
        if (r.is_zero()) continue;
        detail::make_monic(r, ord);
        basis.push_back(r);
        push_pairs_for(basis.size() - 1);
    }

    if (degree_bound) {
        std::vector<Polynomial> kept;
        for (const auto& g : basis)
            if (g.degree() <= *degree_bound) kept.push_back(g);
        basis = std::move(kept);
    }
    if (basis.empty()) return {{}, ord, degree_bound};

    // A nonzero constant collapses the basis to {1}.
    for (const auto& g : basis) {
        if (g.is_constant()) {
            return {{Polynomial::constant(arity, 1)}, ord, degree_bound};
        }
    }

    return {detail::interreduce(std::move(basis), ord), ord, degree_bound};
}

inline Polynomial normal_form(const Polynomial& f, const GroebnerBasis& gb) {
    if (gb.generators.empty()) return f;
    return divide(f, gb.generators, gb.order).remainder;
}

inline bool is_member(const Polynomial& f, const GroebnerBasis& gb) {
    if (gb.truncation_degree && f.degree() > *gb.truncation_degree)
        throw CapExceeded("is_member: input degree " + std::to_string(f.degree()) +
                          " exceeds truncation bound " + std::to_string(*gb.truncation_degree));
    return normal_form(f, gb).is_zero();
}

/// Ideal-membership proof: cofactors with sum(cofactor_i * generator_i) = f,
/// straight from the division quotients. Absent when f is not a member.
inline std::optional<std::vector<std::pair<Polynomial, Polynomial>>> certificate(
    const Polynomial& f, const GroebnerBasis& gb) {
    if (gb.generators.empty()) return std::nullopt;
    DivisionResult d = divide(f, gb.generators, gb.order);
    if (!d.remainder.is_zero()) return std::nullopt;
    std::vector<std::pair<Polynomial, Polynomial>> out;
    for (std::size_t i = 0; i < gb.generators.size(); ++i)
        out.emplace_back(gb.generators[i], d.quotients[i]);
    return out;
}

/// Independent Buchberger-criterion audit: every S-pair (with lcm degree within
/// the truncation bound, when one is set) must reduce to zero against the basis.
inline bool buchberger_criterion_holds(const GroebnerBasis& gb) {
    const auto& g = gb.generators;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            Exponents l = exponent_lcm(g[i].leading_monomial(gb.order),
                                       g[j].leading_monomial(gb.order));
            if (gb.truncation_degree && total_degree(l) > *gb.truncation_degree) continue;
            Polynomial s = s_polynomial(g[i], g[j], gb.order);
            if (!divide(s, g, gb.order).remainder.is_zero()) return false;
        }
    }
    return true;
}

} // namespace cimp
