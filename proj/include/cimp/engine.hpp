#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cimp/csp.hpp"
#include "cimp/dual_disc.hpp"
#include "cimp/encode.hpp"
#include "cimp/groebner.hpp"
#include "cimp/modp.hpp"
#include "cimp/reductions.hpp"

namespace cimp {

enum class Engine { Auto, Oracle, Buchberger, DualDisc, ModP };

inline std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Auto: return "auto";
        case Engine::Oracle: return "oracle";
        case Engine::Buchberger: return "buchberger";
        case Engine::DualDisc: return "dualdisc";
        case Engine::ModP: return "modp";
    }
    return "?";
}

struct EngineOptions {
    std::optional<int> degree_bound;
    long long enumeration_cap = kDefaultEnumerationCap;
};

/// Variety oracle: by radicality, membership is vanishing on every solution.
inline bool decide_oracle(const Polynomial& f0, const CspInstance& p,
                          long long cap = kDefaultEnumerationCap) {
    for (const auto& a : enumerate_solutions(p, cap))
        if (f0.evaluate(a) != 0) return false;
    return true;
}

/// Generic route: Buchberger on the instance encoding (generators first
/// tail-reduced against the domain polynomials to keep degrees near the
/// reduced forms), then a normal-form test.
inline bool decide_buchberger(const Polynomial& f0, const CspInstance& p,
                              std::optional<int> degree_bound = std::nullopt) {
    const int n = p.var_count();
    MonomialOrder ord = MonomialOrder::grlex(n);
    std::vector<Polynomial> gens = instance_ideal(p);
    std::vector<Polynomial> domain(gens.begin(), gens.begin() + n);
    for (std::size_t i = static_cast<std::size_t>(n); i < gens.size(); ++i) {
        gens[i] = divide(gens[i], domain, ord).remainder + Polynomial::zero(n);
        if (gens[i].is_zero()) gens[i] = domain.front();
    }
    if (degree_bound && f0.degree() > *degree_bound)
        throw CapExceeded("buchberger engine: polynomial degree exceeds bound " +
                          std::to_string(*degree_bound));
    GroebnerBasis gb = buchberger(gens, ord, degree_bound);
    return is_member(f0, gb);
}

/// Dual-discriminator route: binarize, then alternate permutation elimination
/// with the consistency closure until the explicit basis applies.
inline bool decide_dualdisc(const Polynomial& f0, const CspInstance& p) {
    std::vector<Relation> gamma = used_relations(p);
    auto witness = detect_special_polymorphism(gamma, SpecialPolymorphism::DualDiscriminator,
                                               p.domain_size);
    if (!witness)
        throw EngineInapplicable("dualdisc: instance lacks the dual-discriminator polymorphism");

    CspInstance binary = binarize(p, *witness);
    Polynomial f = f0;
    for (int rounds = 0; rounds <= p.var_count() + 1; ++rounds) {
        PermutationFreeResult pf = eliminate_permutations(std::move(f), std::move(binary));
        f = std::move(pf.f0);
        binary = std::move(pf.instance);
        try {
            GroebnerBasis gb = dual_disc_groebner(binary);
            return normal_form(f, gb).is_zero();
        } catch (const EngineInapplicable& e) {
            if (!e.induced_permutation()) throw;
            auto closed = arc_consistency(binary);
            if (!closed) return true; // unsatisfiable: everything is a member
            binary = std::move(*closed);
        }
    }
    throw std::logic_error("dualdisc: permutation elimination failed to converge");
}

/// Linear-algebra route: the instance is translated into one system over
/// GF(|D|) and decided through the truncated basis conversion.
inline bool decide_modp_instance(const Polynomial& f0, const CspInstance& p,
                                 std::optional<int> degree_bound = std::nullopt) {
    for (int q = 2; q * q <= p.domain_size; ++q)
        if (p.domain_size % q == 0)
            throw EngineInapplicable("modp: domain size " + std::to_string(p.domain_size) +
                                     " is not prime");
    ModPSystem s = instance_to_modp_system(p);
    int d = degree_bound ? *degree_bound : std::max(f0.degree(), 0);
    return decide_modp(f0, s, d);
}

// ---------------------------------------------------------------------------
// Conservative semilattice route: encode the ordered domain into Boolean
// staircase vectors, rewrite the polynomial through the value-recovery
// interpolation, and run the truncated generic engine on the image.
// ---------------------------------------------------------------------------

struct SemilatticeEmbedding {
    CspInstance instance;     // Boolean image
    Polynomial f0;            // rewritten polynomial
    std::vector<int> order;   // domain sorted ascending by the semilattice
};

/// Value v of rank r maps to r ones followed by zeros, so bitwise minimum on
/// the image matches the semilattice operation and the image of every relation
/// stays min-closed. The chain constraints force staircase shape.
inline SemilatticeEmbedding semilattice_embed(const Polynomial& f0, const CspInstance& p,
                                              const OperationTable& op) {
    const int t = p.domain_size;
    const int ell = t - 1;
    std::vector<int> order = semilattice_order(op);
    std::vector<int> rank(static_cast<std::size_t>(t));
    for (int r = 0; r < t; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;

    auto staircase = [&](int value) {
        std::vector<int> bits(static_cast<std::size_t>(ell), 0);
        for (int i = 0; i < rank[static_cast<std::size_t>(value)]; ++i)
            bits[static_cast<std::size_t>(i)] = 1;
        return bits;
    };

    SemilatticeEmbedding out;
    out.order = order;
    out.instance.domain_size = 2;
    for (const auto& v : p.variables)
        for (int b = 0; b < ell; ++b)
            out.instance.variables.push_back(v + "__b" + std::to_string(b));

    auto coords = [&](int v) {
        std::vector<int> c(static_cast<std::size_t>(ell));
        for (int b = 0; b < ell; ++b) c[static_cast<std::size_t>(b)] = v * ell + b;
        return c;
    };

    // chain constraints keep each block a staircase
    if (ell >= 2) {
        Relation geq;
        geq.arity = 2;
        geq.tuples = {{0, 0}, {1, 0}, {1, 1}}; // first >= second
        std::string geq_name = out.instance.add_relation("__chain", std::move(geq));
        for (int v = 0; v < p.var_count(); ++v)
            for (int b = 0; b + 1 < ell; ++b)
                out.instance.constraints.push_back({{v * ell + b, v * ell + b + 1}, geq_name});
    }

    for (const auto& c : p.constraints) {
        const Relation& r = p.relation_of(c);
        Relation image;
        image.arity = r.arity * ell;
        for (const auto& tup : r.tuples) {
            std::vector<int> flat;
            for (int val : tup) {
                auto bits = staircase(val);
                flat.insert(flat.end(), bits.begin(), bits.end());
            }
            image.tuples.insert(std::move(flat));
        }
        std::string name = out.instance.add_relation("__sl_" + c.relation, std::move(image));
        std::vector<int> scope;
        for (int v : c.scope) {
            auto cs = coords(v);
            scope.insert(scope.end(), cs.begin(), cs.end());
        }
        out.instance.constraints.push_back({std::move(scope), name});
    }

    // value recovery: bits of rank r evaluate back to the domain value
    std::vector<std::vector<int>> pts;
    std::vector<Rational> vals;
    for (int value = 0; value < t; ++value) {
        pts.push_back(staircase(value));
        vals.push_back(value);
    }
    Polynomial recover = interpolate_map(pts, vals);

    std::vector<Polynomial> images;
    for (int v = 0; v < p.var_count(); ++v)
        images.push_back(recover.remap(out.instance.var_count(), coords(v)));
    Polynomial f(out.instance.var_count());
    for (const auto& [e, cf] : f0.terms()) {
        Polynomial term = Polynomial::constant(out.instance.var_count(), cf);
        for (int v = 0; v < p.var_count(); ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k)
                term = term * images[static_cast<std::size_t>(v)];
        f += term;
    }
    out.f0 = std::move(f);
    return out;
}

inline bool decide_semilattice(const Polynomial& f0, const CspInstance& p,
                               const OperationTable& op,
                               std::optional<int> degree_bound = std::nullopt) {
    SemilatticeEmbedding emb = semilattice_embed(f0, p, op);
    int bound = degree_bound ? *degree_bound : std::max(emb.f0.degree(), 0) + 1;
    return decide_buchberger(emb.f0, emb.instance, bound);
}

// ---------------------------------------------------------------------------
// Dispatch.
// ---------------------------------------------------------------------------

struct Decision {
    bool member = false;
    std::string engine;
    std::optional<std::vector<int>> witness; // satisfying assignment with f0 != 0
};

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

/// Picks the engine per the detected polymorphism: dual-discriminator, then
/// affine, then conservative semilattice, then generic Buchberger; the oracle
/// is the last resort when the generic route is refused and the instance fits
/// under the enumeration cap.
inline Decision decide(const Polynomial& f0, const CspInstance& p, Engine engine,
                       const EngineOptions& opts = {}) {
    Decision d;
    switch (engine) {
        case Engine::Oracle:
            d.engine = "oracle";
            d.member = decide_oracle(f0, p, opts.enumeration_cap);
            break;
        case Engine::Buchberger:
            d.engine = "buchberger";
            d.member = decide_buchberger(f0, p, opts.degree_bound);
            break;
        case Engine::DualDisc:
            d.engine = "dualdisc";
            d.member = decide_dualdisc(f0, p);
            break;
        case Engine::ModP:
            d.engine = "modp";
            d.member = decide_modp_instance(f0, p, opts.degree_bound);
            break;
        case Engine::Auto: {
            std::vector<Relation> gamma = used_relations(p);
            if (detect_special_polymorphism(gamma, SpecialPolymorphism::DualDiscriminator,
                                            p.domain_size)) {
                d.engine = "dualdisc";
                d.member = decide_dualdisc(f0, p);
                break;
            }
            if (is_prime(p.domain_size) &&
                detect_special_polymorphism(gamma, SpecialPolymorphism::Affine, p.domain_size)) {
                d.engine = "modp";
                d.member = decide_modp_instance(f0, p, opts.degree_bound);
                break;
            }
            if (p.domain_size <= kSemilatticeSearchCap) {
                auto op = detect_special_polymorphism(
                    gamma, SpecialPolymorphism::SemilatticeConservative, p.domain_size);
                if (op) {
                    d.engine = "semilattice";
                    d.member = decide_semilattice(f0, p, *op, opts.degree_bound);
                    break;
                }
            }
            try {
                d.engine = "buchberger";
                d.member = decide_buchberger(f0, p, opts.degree_bound);
            } catch (const CapExceeded&) {
                d.engine = "oracle";
                d.member = decide_oracle(f0, p, opts.enumeration_cap);
            }
            break;
        }
    }
    return d;
}

/// Full decision with witness recovery for non-members via self-reduction.
inline Decision decide_with_witness(const Polynomial& f0, const CspInstance& p, Engine engine,
                                    const EngineOptions& opts = {}) {
    Decision d = decide(f0, p, engine, opts);
    if (d.member) return d;
    Engine fixed = engine;
    if (engine == Engine::Auto) {
        if (d.engine == "oracle") fixed = Engine::Oracle;
        else if (d.engine == "buchberger") fixed = Engine::Buchberger;
        else if (d.engine == "dualdisc") fixed = Engine::DualDisc;
        else if (d.engine == "modp") fixed = Engine::ModP;
    }
    if (d.engine == "oracle") {
        for (const auto& a : enumerate_solutions(p, opts.enumeration_cap))
            if (f0.evaluate(a) != 0) {
                d.witness = a;
                return d;
            }
        throw std::logic_error("oracle: non-member without witness");
    }
    MembershipEngine decide_fn;
    if (d.engine == "semilattice") {
        std::vector<Relation> gamma = used_relations(p);
        auto op = detect_special_polymorphism(gamma, SpecialPolymorphism::SemilatticeConservative,
                                              p.domain_size);
        decide_fn = [op, &opts](const Polynomial& f, const CspInstance& q) {
            return decide_semilattice(f, q, *op, opts.degree_bound);
        };
    } else {
        decide_fn = [fixed, &opts](const Polynomial& f, const CspInstance& q) {
            return decide(f, q, fixed, opts).member;
        };
    }
    WitnessResult w = search_witness(f0, p, decide_fn);
    if (w.member) throw std::logic_error("witness search disagreed with the decision");
    d.witness = std::move(w.witness);
    return d;
}

} // namespace cimp
