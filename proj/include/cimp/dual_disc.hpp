#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cimp/csp.hpp"
#include "cimp/encode.hpp"
#include "cimp/groebner.hpp"

namespace cimp {

/// Structural shape of a binary relation under the dual-discriminator
/// classification: complete product, graph of a bijection, or two-fan
/// ({a} x D_j) u (D_i x {b}).
struct BinaryClassification {
    enum class Kind { Complete, Permutation, TwoFan, NotDualDisc };
    Kind kind = Kind::NotDualDisc;
    std::set<int> left_domain, right_domain;
    std::map<int, int> permutation; // Kind::Permutation
    int fan_left = -1, fan_right = -1; // apexes for Kind::TwoFan
};

inline BinaryClassification classify_binary(const Relation& r, int /*domain_size*/) {
    BinaryClassification c;
    if (r.arity != 2) throw std::invalid_argument("classify_binary: arity must be 2");
    for (const auto& t : r.tuples) {
        c.left_domain.insert(t[0]);
        c.right_domain.insert(t[1]);
    }
    if (r.tuples.size() == c.left_domain.size() * c.right_domain.size()) {
        c.kind = BinaryClassification::Kind::Complete;
        return c;
    }
    if (c.left_domain.size() == c.right_domain.size() &&
        r.tuples.size() == c.left_domain.size()) {
        std::map<int, int> pi;
        std::set<int> image;
        bool ok = true;
        for (const auto& t : r.tuples) {
            if (pi.count(t[0]) || image.count(t[1])) {
                ok = false;
                break;
            }
            pi[t[0]] = t[1];
            image.insert(t[1]);
        }
        if (ok) {
            c.kind = BinaryClassification::Kind::Permutation;
            c.permutation = std::move(pi);
            return c;
        }
    }
    for (int a : c.left_domain) {
        for (int b : c.right_domain) {
            std::size_t expected = c.left_domain.size() + c.right_domain.size() - 1;
            if (r.tuples.size() != expected) break;
            bool match = true;
            for (const auto& t : r.tuples)
                if (t[0] != a && t[1] != b) {
                    match = false;
                    break;
                }
            if (!match) continue;
            // every (a, y) and (x, b) must be present
            for (int y : c.right_domain)
                if (!r.contains({a, y})) {
                    match = false;
                    break;
                }
            if (!match) continue;
            for (int x : c.left_domain)
                if (!r.contains({x, b})) {
                    match = false;
                    break;
                }
            if (match) {
                c.kind = BinaryClassification::Kind::TwoFan;
                c.fan_left = a;
                c.fan_right = b;
                return c;
            }
        }
    }
    c.kind = BinaryClassification::Kind::NotDualDisc;
    return c;
}

/// Replaces every constraint of arity above 2 by all of its pairwise and unary
/// projections; solution set is unchanged when the witness is a majority
/// polymorphism of every relation used. Scopes with repeated variables are
/// contracted first.
inline CspInstance binarize(const CspInstance& p, const OperationTable& witness) {
    if (!witness.is_majority())
        throw std::invalid_argument("binarize: witness is not a majority operation");
    for (const auto& r : used_relations(p))
        if (!check_polymorphism(witness, r))
            throw std::invalid_argument("binarize: witness is not a polymorphism of the instance");

    CspInstance out;
    out.variables = p.variables;
    out.domain_size = p.domain_size;

    std::set<std::pair<std::vector<int>, std::string>> seen;
    auto emit = [&](std::vector<int> scope, Relation rel, const std::string& hint) {
        std::string name = out.add_relation(hint, std::move(rel));
        auto key = std::make_pair(scope, name);
        if (seen.insert(key).second) out.constraints.push_back({std::move(scope), name});
    };

    int counter = 0;
    for (const auto& c : p.constraints) {
        Relation r = p.relation_of(c);
        std::vector<int> scope = c.scope;

        // contract repeated scope variables
        std::vector<int> uniq;
        for (int v : scope)
            if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
        if (uniq.size() != scope.size()) {
            Relation contracted;
            contracted.arity = static_cast<int>(uniq.size());
            for (const auto& t : r.tuples) {
                std::vector<int> img(uniq.size(), -1);
                bool agree = true;
                for (std::size_t pos = 0; pos < scope.size() && agree; ++pos) {
                    std::size_t slot = static_cast<std::size_t>(
                        std::find(uniq.begin(), uniq.end(), scope[pos]) - uniq.begin());
                    if (img[slot] == -1)
                        img[slot] = t[pos];
                    else if (img[slot] != t[pos])
                        agree = false;
                }
                if (agree) contracted.tuples.insert(std::move(img));
            }
            r = std::move(contracted);
            scope = std::move(uniq);
        }

        const int ar = static_cast<int>(scope.size());
        ++counter;
        if (ar <= 2) {
            emit(scope, r, c.relation);
            continue;
        }
        for (int i = 0; i < ar; ++i) {
            Relation proj;
            proj.arity = 1;
            for (const auto& t : r.tuples) proj.tuples.insert({t[static_cast<std::size_t>(i)]});
            emit({scope[static_cast<std::size_t>(i)]}, std::move(proj),
                 "__pr" + std::to_string(counter) + "_" + std::to_string(i));
        }
        for (int i = 0; i < ar; ++i)
            for (int j = i + 1; j < ar; ++j) {
                Relation proj;
                proj.arity = 2;
                for (const auto& t : r.tuples)
                    proj.tuples.insert({t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]});
                emit({scope[static_cast<std::size_t>(i)], scope[static_cast<std::size_t>(j)]},
                     std::move(proj),
                     "__pr" + std::to_string(counter) + "_" + std::to_string(i) + "_" +
                         std::to_string(j));
            }
    }
    return out;
}

/// Result of permutation elimination: the rewritten polynomial and instance.
struct PermutationFreeResult {
    Polynomial f0;
    CspInstance instance;
};

/// Removes permutation constraints one at a time: the permuted variable is
/// deleted, incident constraints are composed with pi or its inverse, and the
/// polynomial substitutes the interpolation of pi. The surviving variable
/// keeps the permutation's left domain as a unary constraint. A permutation
/// on a repeated scope (x, x) first reduces to its fixed points.
inline PermutationFreeResult eliminate_permutations(Polynomial f0, CspInstance p) {
    auto fold_self_loops = [&](CspInstance& inst) {
        for (auto& c : inst.constraints) {
            if (c.scope.size() == 2 && c.scope[0] == c.scope[1]) {
                const Relation& r = inst.relation_of(c);
                Relation diag;
                diag.arity = 1;
                for (const auto& t : r.tuples)
                    if (t[0] == t[1]) diag.tuples.insert({t[0]});
                std::string name = inst.add_relation("__diag_" + c.relation, std::move(diag));
                c = {{c.scope[0]}, name};
            }
        }
    };

    fold_self_loops(p);
    while (true) {
        std::optional<std::size_t> target;
        BinaryClassification cls;
        for (std::size_t idx = 0; idx < p.constraints.size(); ++idx) {
            const auto& c = p.constraints[idx];
            if (c.scope.size() != 2) continue;
            BinaryClassification k = classify_binary(p.relation_of(c), p.domain_size);
            if (k.kind == BinaryClassification::Kind::Permutation) {
                target = idx;
                cls = std::move(k);
                break;
            }
        }
        if (!target) break;

        const Constraint chosen = p.constraints[*target];
        const int xi = chosen.scope[0], xj = chosen.scope[1];

        // interpolation of pi over the left domain
        std::vector<std::vector<int>> pts;
        std::vector<Rational> vals;
        for (const auto& [a, b] : cls.permutation) {
            pts.push_back({a});
            vals.push_back(b);
        }
        Polynomial interp1 = interpolate_map(pts, vals); // univariate in slot 0
        Polynomial pi_of_xi = interp1.remap(p.var_count(), {xi});

        std::map<int, int> inverse;
        for (const auto& [a, b] : cls.permutation) inverse[b] = a;

        // rebuild the instance without x_j
        CspInstance next;
        next.domain_size = p.domain_size;
        std::vector<int> var_map(static_cast<std::size_t>(p.var_count()), -1);
        for (int v = 0; v < p.var_count(); ++v) {
            if (v == xj) continue;
            var_map[static_cast<std::size_t>(v)] = static_cast<int>(next.variables.size());
            next.variables.push_back(p.variables[static_cast<std::size_t>(v)]);
        }
        var_map[static_cast<std::size_t>(xj)] = var_map[static_cast<std::size_t>(xi)];

        auto remap_scope = [&](const std::vector<int>& scope) {
            std::vector<int> out;
            out.reserve(scope.size());
            for (int v : scope) out.push_back(var_map[static_cast<std::size_t>(v)]);
            return out;
        };

        for (std::size_t idx = 0; idx < p.constraints.size(); ++idx) {
            if (idx == *target) continue;
            const auto& c = p.constraints[idx];
            const Relation& r = p.relation_of(c);
            if (c.scope.size() == 1) {
                if (c.scope[0] == xj) {
                    // unary on x_j becomes unary on x_i through pi^{-1}
                    Relation moved;
                    moved.arity = 1;
                    for (const auto& t : r.tuples) {
                        auto it = inverse.find(t[0]);
                        if (it != inverse.end()) moved.tuples.insert({it->second});
                    }
                    std::string name = next.add_relation("__perm_u_" + c.relation, std::move(moved));
                    next.constraints.push_back({remap_scope({xi}), name});
                } else {
                    std::string name = next.add_relation(c.relation, r);
                    next.constraints.push_back({remap_scope(c.scope), name});
                }
                continue;
            }
            bool touches = c.scope[0] == xj || c.scope[1] == xj;
            if (!touches) {
                std::string name = next.add_relation(c.relation, r);
                next.constraints.push_back({remap_scope(c.scope), name});
                continue;
            }
            Relation moved;
            std::vector<int> scope;
            if (c.scope[0] == xj && c.scope[1] == xj) {
                // both slots permuted: fold through pi^{-1} on each coordinate
                moved.arity = 2;
                for (const auto& t : r.tuples) {
                    auto it0 = inverse.find(t[0]);
                    auto it1 = inverse.find(t[1]);
                    if (it0 != inverse.end() && it1 != inverse.end())
                        moved.tuples.insert({it0->second, it1->second});
                }
                scope = {xi, xi};
            } else if (c.scope[1] == xj) {
                moved.arity = 2;
                for (const auto& t : r.tuples) {
                    auto it = inverse.find(t[1]);
                    if (it != inverse.end()) moved.tuples.insert({t[0], it->second});
                }
                scope = {c.scope[0], xi};
            } else {
                moved.arity = 2;
                for (const auto& t : r.tuples) {
                    auto it = inverse.find(t[0]);
                    if (it != inverse.end()) moved.tuples.insert({it->second, t[1]});
                }
                scope = {xi, c.scope[1]};
            }
            std::string name = next.add_relation("__perm_" + c.relation, std::move(moved));
            next.constraints.push_back({remap_scope(scope), name});
        }

        // keep x_i restricted to the permutation's left domain
        if (static_cast<int>(cls.left_domain.size()) != p.domain_size) {
            Relation dom;
            dom.arity = 1;
            for (int a : cls.left_domain) dom.tuples.insert({a});
            std::string name = next.add_relation(
                "__perm_dom_" + p.variables[static_cast<std::size_t>(xi)], std::move(dom));
            next.constraints.push_back({remap_scope({xi}), name});
        }

        f0 = f0.substitute(xj, pi_of_xi).remap(next.var_count(), var_map);
        p = std::move(next);
        fold_self_loops(p);
    }
    return {std::move(f0), std::move(p)};
}

/// Explicit Groebner basis of a binary, permutation-free, dual-discriminator
/// classifiable instance under grlex: {1} when unsatisfiable, otherwise the
/// restricted domain polynomial of every variable plus one quadratic per
/// two-fan pair of the consistency closure.
inline GroebnerBasis dual_disc_groebner(const CspInstance& p) {
    const int n = p.var_count();
    MonomialOrder ord = MonomialOrder::grlex(n);
    auto unit = [&] {
        return GroebnerBasis{{Polynomial::constant(n, 1)}, ord, std::nullopt};
    };

    BinaryNetwork net = build_network(p);
    if (!close_network(net)) return unit();
    if (!network_satisfiable(net)) return unit();

    struct Fan {
        int i, j, a, b;
    };
    std::vector<Fan> fans;
    for (const auto& [key, rel] : net.pair_rel) {
        auto [i, j] = key;
        Relation r;
        r.arity = 2;
        for (const auto& [a, b] : rel) r.tuples.insert({a, b});
        BinaryClassification cls = classify_binary(r, p.domain_size);
        switch (cls.kind) {
            case BinaryClassification::Kind::Complete:
                break;
            case BinaryClassification::Kind::TwoFan:
                fans.push_back({i, j, cls.fan_left, cls.fan_right});
                break;
            case BinaryClassification::Kind::Permutation:
                throw EngineInapplicable(
                    "dual_disc_groebner: consistency closure induced a permutation between " +
                        p.variables[static_cast<std::size_t>(i)] + " and " +
                        p.variables[static_cast<std::size_t>(j)],
                    /*induced_permutation=*/true);
            case BinaryClassification::Kind::NotDualDisc:
                throw EngineInapplicable(
                    "dual_disc_groebner: relation between " +
                    p.variables[static_cast<std::size_t>(i)] + " and " +
                    p.variables[static_cast<std::size_t>(j)] +
                    " is not complete/permutation/two-fan");
        }
    }

    std::vector<Polynomial> gens;
    for (int v = 0; v < n; ++v) {
        Polynomial g = Polynomial::constant(n, 1);
        for (int a : net.domains[static_cast<std::size_t>(v)])
            g = g * (Polynomial::variable(n, v) - Polynomial::constant(n, a));
        gens.push_back(std::move(g));
    }
    for (const auto& f : fans)
        gens.push_back((Polynomial::variable(n, f.i) - Polynomial::constant(n, f.a)) *
                       (Polynomial::variable(n, f.j) - Polynomial::constant(n, f.b)));
    return {std::move(gens), ord, std::nullopt};
}

/// Closure property behind the emitted basis: for two-fans (x_i-a)(x_j-b) and
/// (x_i-c)(x_k-d) with a != c, the generator (x_j-b)(x_k-d) must be present
/// (or at least reduce to zero against the basis).
inline bool two_fan_closure_holds(const GroebnerBasis& gb, bool allow_reduction = false) {
    struct Fan {
        int i, j;
        Rational a, b;
    };
    std::vector<Fan> fans;
    for (const auto& g : gb.generators) {
        if (g.degree() != 2) continue;
        Exponents lm = g.leading_monomial(gb.order);
        std::vector<int> vars;
        for (std::size_t v = 0; v < lm.size(); ++v)
            if (lm[v] == 1) vars.push_back(static_cast<int>(v));
        if (vars.size() != 2) continue;
        // g = (x_i - a)(x_j - b): read apexes off the linear coefficients
        Rational a = 0, b = 0;
        for (const auto& [e, c] : g.terms()) {
            if (total_degree(e) == 1 && e[static_cast<std::size_t>(vars[0])] == 1) b = -c;
            if (total_degree(e) == 1 && e[static_cast<std::size_t>(vars[1])] == 1) a = -c;
        }
        fans.push_back({vars[0], vars[1], a, b});
    }
    auto has_fan = [&](int i, int j, const Rational& a, const Rational& b) {
        if (i > j) return false;
        for (const auto& f : fans)
            if (f.i == i && f.j == j && f.a == a && f.b == b) return true;
        return false;
    };
    for (const auto& f : fans)
        for (const auto& g : fans) {
            // shared variable with different apex values, in all four orientations
            int j = -1, k = -1;
            Rational bval, dval;
            if (f.i == g.i && f.a != g.a) {
                j = f.j; bval = f.b; k = g.j; dval = g.b;
            } else if (f.i == g.j && f.a != g.b) {
                j = f.j; bval = f.b; k = g.i; dval = g.a;
            } else if (f.j == g.i && f.b != g.a) {
                j = f.i; bval = f.a; k = g.j; dval = g.b;
            } else if (f.j == g.j && f.b != g.b) {
                j = f.i; bval = f.a; k = g.i; dval = g.a;
            } else {
                continue;
            }
            if (j == k) continue;
            int lo = std::min(j, k), hi = std::max(j, k);
            const Rational& lov = (lo == j) ? bval : dval;
            const Rational& hiv = (lo == j) ? dval : bval;
            if (has_fan(lo, hi, lov, hiv)) continue;
            if (allow_reduction) {
                int n = gb.generators.front().arity();
                Polynomial h = (Polynomial::variable(n, lo) - Polynomial::constant(n, lov)) *
                               (Polynomial::variable(n, hi) - Polynomial::constant(n, hiv));
                if (normal_form(h, gb).is_zero()) continue;
            }
            return false;
        }
    return true;
}

} // namespace cimp
