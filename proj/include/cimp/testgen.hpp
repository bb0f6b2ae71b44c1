#pragma once

#include <random>
#include <string>
#include <vector>

#include "cimp/csp.hpp"
#include "cimp/engine.hpp"
#include "cimp/modp.hpp"
#include "cimp/polynomial.hpp"

namespace cimp {

/// Deterministic generators for randomized cross-checks. Everything is driven
/// by a caller-seeded mt19937 so runs are reproducible from the seed alone.
namespace testgen {

inline int uniform(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<std::string> var_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

inline Polynomial random_polynomial(std::mt19937& rng, int nvars, int max_degree, int max_terms,
                                    int coeff_range = 3) {
    Polynomial f(nvars);
    int terms = uniform(rng, 1, max_terms);
    for (int t = 0; t < terms; ++t) {
        Exponents e(static_cast<std::size_t>(nvars), 0);
        int deg = uniform(rng, 0, max_degree);
        for (int d = 0; d < deg; ++d) ++e[static_cast<std::size_t>(uniform(rng, 0, nvars - 1))];
        int c = uniform(rng, -coeff_range, coeff_range);
        if (c == 0) c = 1;
        f.add_term(std::move(e), c);
    }
    if (f.is_zero()) f = Polynomial::variable(nvars, 0);
    return f;
}

/// Random relation of one of the three dual-discriminator shapes over
/// subdomains of {0,...,t-1}.
inline Relation random_dual_disc_relation(std::mt19937& rng, int t) {
    auto subdomain = [&](int min_size) {
        std::vector<int> all(static_cast<std::size_t>(t));
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        int size = uniform(rng, min_size, t);
        std::vector<int> d(all.begin(), all.begin() + size);
        std::sort(d.begin(), d.end());
        return d;
    };
    Relation r;
    r.arity = 2;
    switch (uniform(rng, 0, 2)) {
        case 0: { // complete
            auto di = subdomain(1), dj = subdomain(1);
            for (int a : di)
                for (int b : dj) r.tuples.insert({a, b});
            break;
        }
        case 1: { // permutation
            auto di = subdomain(1);
            std::vector<int> img = di;
            std::shuffle(img.begin(), img.end(), rng);
            for (std::size_t i = 0; i < di.size(); ++i) r.tuples.insert({di[i], img[i]});
            break;
        }
        default: { // two-fan
            auto di = subdomain(1), dj = subdomain(1);
            int a = di[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(di.size()) - 1))];
            int b = dj[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(dj.size()) - 1))];
            for (int y : dj) r.tuples.insert({a, y});
            for (int x : di) r.tuples.insert({x, b});
            break;
        }
    }
    return r;
}

inline CspInstance random_dual_disc_instance(std::mt19937& rng, int t, int nvars,
                                             int nconstraints) {
    CspInstance p;
    p.domain_size = t;
    p.variables = var_names(nvars);
    for (int c = 0; c < nconstraints; ++c) {
        Relation r = random_dual_disc_relation(rng, t);
        int i = uniform(rng, 0, nvars - 1);
        int j = uniform(rng, 0, nvars - 1);
        while (j == i) j = uniform(rng, 0, nvars - 1);
        std::string name = p.add_relation("R" + std::to_string(c), std::move(r));
        p.constraints.push_back({{i, j}, name});
    }
    return p;
}

inline ModPSystem random_modp_system(std::mt19937& rng, int p, int nvars, int nequations) {
    ModPSystem s;
    s.p = p;
    s.nvars = nvars;
    for (int e = 0; e < nequations; ++e) {
        std::vector<int> coeffs(static_cast<std::size_t>(nvars));
        for (auto& c : coeffs) c = uniform(rng, 0, p - 1);
        s.equations.emplace_back(std::move(coeffs), uniform(rng, 0, p - 1));
    }
    return s;
}

inline CspInstance random_affine_instance(std::mt19937& rng, int p, int nvars, int nconstraints) {
    CspInstance inst;
    inst.domain_size = p;
    inst.variables = var_names(nvars);
    for (int c = 0; c < nconstraints; ++c) {
        // random linear equation over a random binary or ternary scope
        int arity = uniform(rng, 1, std::min(3, nvars));
        std::vector<int> scope;
        for (int i = 0; i < arity; ++i) scope.push_back(uniform(rng, 0, nvars - 1));
        std::vector<int> coeffs(static_cast<std::size_t>(arity));
        bool nonzero = false;
        for (auto& cf : coeffs) {
            cf = uniform(rng, 0, p - 1);
            nonzero |= cf != 0;
        }
        if (!nonzero) coeffs[0] = 1;
        int rhs = uniform(rng, 0, p - 1);
        Relation r;
        r.arity = arity;
        std::vector<int> tup(static_cast<std::size_t>(arity), 0);
        while (true) {
            long acc = 0;
            for (int i = 0; i < arity; ++i)
                acc += static_cast<long>(coeffs[static_cast<std::size_t>(i)]) *
                       tup[static_cast<std::size_t>(i)];
            if (mod_norm(acc, p) == rhs) r.tuples.insert(tup);
            int i = arity - 1;
            while (i >= 0 && tup[static_cast<std::size_t>(i)] == p - 1)
                tup[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++tup[static_cast<std::size_t>(i)];
        }
        if (r.tuples.empty()) continue; // inconsistent single equation: skip
        std::string name = inst.add_relation("E" + std::to_string(c), std::move(r));
        inst.constraints.push_back({std::move(scope), name});
    }
    return inst;
}

/// Arbitrary small relations; nothing structural guaranteed. Exercises the
/// generic engine.
inline CspInstance random_mixed_instance(std::mt19937& rng, int t, int nvars, int nconstraints,
                                         bool allow_pins = true) {
    CspInstance p;
    p.domain_size = t;
    p.variables = var_names(nvars);
    for (int c = 0; c < nconstraints; ++c) {
        int arity = uniform(rng, 1, std::min(2, nvars));
        Relation full = Relation::full(arity, t);
        Relation r;
        r.arity = arity;
        for (const auto& tup : full.tuples)
            if (uniform(rng, 0, 2) > 0) r.tuples.insert(tup);
        if (r.tuples.empty()) r.tuples.insert(*full.tuples.begin());
        std::vector<int> scope;
        std::vector<int> pool(static_cast<std::size_t>(nvars));
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int i = 0; i < arity; ++i) scope.push_back(pool[static_cast<std::size_t>(i)]);
        std::string name = p.add_relation("M" + std::to_string(c), std::move(r));
        p.constraints.push_back({std::move(scope), name});
    }
    if (allow_pins && uniform(rng, 0, 2) == 0)
        p.add_pin(uniform(rng, 0, nvars - 1), uniform(rng, 0, t - 1));
    return p;
}

/// Random relation closed under the dual-discriminator, built by closing a
/// random tuple set under the componentwise action.
inline Relation random_dd_closed_relation(std::mt19937& rng, int t, int arity, int seeds) {
    Relation r;
    r.arity = arity;
    for (int s = 0; s < seeds; ++s) {
        std::vector<int> tup(static_cast<std::size_t>(arity));
        for (auto& v : tup) v = uniform(rng, 0, t - 1);
        r.tuples.insert(std::move(tup));
    }
    OperationTable nabla = dual_discriminator(t);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> tuples(r.tuples.begin(), r.tuples.end());
        for (const auto& a : tuples)
            for (const auto& b : tuples)
                for (const auto& c : tuples) {
                    std::vector<int> img(static_cast<std::size_t>(arity));
                    for (int i = 0; i < arity; ++i)
                        img[static_cast<std::size_t>(i)] =
                            nabla.apply({a[static_cast<std::size_t>(i)],
                                         b[static_cast<std::size_t>(i)],
                                         c[static_cast<std::size_t>(i)]});
                    if (r.tuples.insert(std::move(img)).second) grew = true;
                }
    }
    return r;
}

} // namespace testgen
} // namespace cimp
