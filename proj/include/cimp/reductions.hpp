#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cimp/csp.hpp"
#include "cimp/encode.hpp"
#include "cimp/polynomial.hpp"

namespace cimp {

// ---------------------------------------------------------------------------
// Constant (pinning) elimination.
// ---------------------------------------------------------------------------

struct EliminateConstantsResult {
    bool member_immediate = false; // conflicting pins: 1 lies in the ideal
    Polynomial fstar;
    CspInstance pstar;
    std::vector<int> var_map;      // original variable -> variable of pstar
    int pinned_value_count = 0;    // |A|
};

/// Removes pinning constraints by merging, per pinned value a, all variables
/// pinned to a into one fresh variable, and multiplying the polynomial by
/// prod_{a in A} prod_{b != a} (x_a - b). Membership is preserved; the degree
/// grows by exactly |A| (|D| - 1). Conflicting pins on one variable make the
/// instance unsatisfiable, so membership holds immediately.
inline EliminateConstantsResult eliminate_constants(const Polynomial& f0, const CspInstance& p) {
    std::map<int, int> pinned; // variable -> value
    std::set<int> values;
    for (const auto& c : p.constraints) {
        auto v = p.pin_value(c);
        if (!v) continue;
        auto it = pinned.find(c.scope[0]);
        if (it != pinned.end() && it->second != *v) return {true, f0, p, {}, 0};
        pinned[c.scope[0]] = *v;
        values.insert(*v);
    }
    if (pinned.empty()) {
        EliminateConstantsResult r{false, f0, p, {}, 0};
        r.var_map.resize(static_cast<std::size_t>(p.var_count()));
        std::iota(r.var_map.begin(), r.var_map.end(), 0);
        return r;
    }

    CspInstance out;
    out.domain_size = p.domain_size;
    std::vector<int> var_map(static_cast<std::size_t>(p.var_count()), -1);
    for (int v = 0; v < p.var_count(); ++v) {
        if (pinned.count(v)) continue;
        var_map[static_cast<std::size_t>(v)] = static_cast<int>(out.variables.size());
        out.variables.push_back(p.variables[static_cast<std::size_t>(v)]);
    }
    std::map<int, int> value_var; // pinned value a -> index of x_a
    for (int a : values) {
        value_var[a] = static_cast<int>(out.variables.size());
        out.variables.push_back("pin__" + std::to_string(a));
    }
    for (const auto& [v, a] : pinned) var_map[static_cast<std::size_t>(v)] = value_var[a];

    for (const auto& c : p.constraints) {
        if (p.pin_value(c)) continue;
        std::string name = out.add_relation(c.relation, p.relation_of(c));
        std::vector<int> scope;
        scope.reserve(c.scope.size());
        for (int v : c.scope) scope.push_back(var_map[static_cast<std::size_t>(v)]);
        out.constraints.push_back({std::move(scope), name});
    }

    Polynomial fprime = f0.remap(out.var_count(), var_map);
    Polynomial multiplier = Polynomial::constant(out.var_count(), 1);
    for (const auto& [a, xa] : value_var)
        for (int b = 0; b < p.domain_size; ++b) {
            if (b == a) continue;
            multiplier = multiplier * (Polynomial::variable(out.var_count(), xa) -
                                       Polynomial::constant(out.var_count(), b));
        }

    EliminateConstantsResult r;
    r.member_immediate = false;
    r.fstar = multiplier * fprime;
    r.pstar = std::move(out);
    r.var_map = std::move(var_map);
    r.pinned_value_count = static_cast<int>(values.size());
    return r;
}

// ---------------------------------------------------------------------------
// Primitive positive definitions.
// ---------------------------------------------------------------------------

struct PPAtom {
    std::string relation; // "=" for equality atoms
    std::vector<std::string> args;
};

struct PPDefinition {
    std::string target;
    std::vector<std::string> params;     // free variables, arity of the target
    std::vector<std::string> exist_vars; // existentially quantified
    std::vector<PPAtom> atoms;
};

/// Parses lines of the form
///   define R(x,y) := exists u : S(x,u) & S(u,y) & x=x
/// ('exists' section optional, equality atoms allowed).
inline std::vector<PPDefinition> parse_pp_definitions(const std::string& text) {
    std::vector<PPDefinition> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("definition line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream probe(line);
        std::string word;
        if (!(probe >> word)) continue;
        if (word != "define") fail("expected 'define'");

        auto assign = line.find(":=");
        if (assign == std::string::npos) fail("missing ':='");
        std::string head = line.substr(line.find("define") + 6, assign - line.find("define") - 6);
        std::string body = line.substr(assign + 2);

        PPDefinition def;
        auto lp = head.find('(');
        auto rp = head.find(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp) fail("malformed head");
        {
            std::string name = head.substr(0, lp);
            std::istringstream ns(name);
            ns >> def.target;
            std::string args = head.substr(lp + 1, rp - lp - 1);
            for (char& ch : args)
                if (ch == ',') ch = ' ';
            std::istringstream as(args);
            std::string a;
            while (as >> a) def.params.push_back(a);
        }
        {
            auto ex = body.find("exists");
            auto colon = body.find(':');
            if (ex != std::string::npos) {
                if (colon == std::string::npos) fail("'exists' without ':'");
                std::string names = body.substr(ex + 6, colon - ex - 6);
                std::istringstream ns(names);
                std::string v;
                while (ns >> v) def.exist_vars.push_back(v);
                body = body.substr(colon + 1);
            }
        }
        // conjuncts split on '&'
        std::vector<std::string> parts;
        {
            std::string cur;
            std::istringstream bs(body);
            char ch;
            while (bs.get(ch)) {
                if (ch == '&') {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            parts.push_back(cur);
        }
        for (std::string part : parts) {
            auto eq = part.find('=');
            auto lparen = part.find('(');
            PPAtom atom;
            if (lparen != std::string::npos && (eq == std::string::npos || lparen < eq)) {
                auto rparen = part.find(')');
                if (rparen == std::string::npos) fail("missing ')'");
                std::string name = part.substr(0, lparen);
                std::istringstream ns(name);
                ns >> atom.relation;
                std::string args = part.substr(lparen + 1, rparen - lparen - 1);
                for (char& ch : args)
                    if (ch == ',') ch = ' ';
                std::istringstream as(args);
                std::string a;
                while (as >> a) atom.args.push_back(a);
                if (atom.relation.empty() || atom.args.empty()) fail("malformed atom");
            } else if (eq != std::string::npos) {
                std::string lhs = part.substr(0, eq), rhs = part.substr(eq + 1);
                std::istringstream l(lhs), r(rhs);
                std::string la, ra;
                if (!(l >> la) || !(r >> ra)) fail("malformed equality");
                atom.relation = "=";
                atom.args = {la, ra};
            } else {
                fail("expected atom");
            }
            def.atoms.push_back(std::move(atom));
        }
        out.push_back(std::move(def));
    }
    return out;
}

struct PPDefinitionResult {
    CspInstance instance;
    std::vector<int> var_map; // original variable -> variable of the new instance
};

/// Rewrites an instance over Delta into one over Gamma, given a pp-definition
/// for every Delta relation used. Fresh existential variables are named
/// <formal>__c<constraintIndex>__e<existIndex>; equality atoms are eliminated
/// by variable identification (the returned map tells where each original
/// variable went).
inline PPDefinitionResult apply_pp_definition(const CspInstance& p,
                                              const std::map<std::string, PPDefinition>& defs,
                                              const std::map<std::string, Relation>& gamma) {
    struct RawConstraint {
        std::string relation;
        std::vector<int> scope;
    };
    std::vector<RawConstraint> raw;
    std::vector<std::string> names = p.variables;
    std::vector<std::pair<int, int>> merges;

    for (std::size_t ci = 0; ci < p.constraints.size(); ++ci) {
        const auto& c = p.constraints[ci];
        auto dit = defs.find(c.relation);
        if (dit == defs.end())
            throw std::invalid_argument("apply_pp_definition: no definition for relation '" +
                                        c.relation + "'");
        const PPDefinition& def = dit->second;
        if (def.params.size() != c.scope.size())
            throw std::invalid_argument("apply_pp_definition: arity mismatch for '" + c.relation +
                                        "'");

        std::map<std::string, int> local; // formal name -> variable index
        for (std::size_t k = 0; k < def.params.size(); ++k) local[def.params[k]] = c.scope[k];
        for (std::size_t k = 0; k < def.exist_vars.size(); ++k) {
            std::string fresh = def.exist_vars[k] + "__c" + std::to_string(ci) + "__e" +
                                std::to_string(k);
            while (std::find(names.begin(), names.end(), fresh) != names.end()) fresh += "_";
            local[def.exist_vars[k]] = static_cast<int>(names.size());
            names.push_back(fresh);
        }

        for (const auto& atom : def.atoms) {
            std::vector<int> scope;
            for (const auto& a : atom.args) {
                auto it = local.find(a);
                if (it == local.end())
                    throw std::invalid_argument("apply_pp_definition: unbound variable '" + a +
                                                "' in definition of '" + def.target + "'");
                scope.push_back(it->second);
            }
            if (atom.relation == "=") {
                if (scope[0] != scope[1]) merges.emplace_back(scope[0], scope[1]);
            } else {
                if (!gamma.count(atom.relation))
                    throw std::invalid_argument("apply_pp_definition: relation '" + atom.relation +
                                                "' missing from the target language");
                raw.push_back({atom.relation, std::move(scope)});
            }
        }
    }

    // union-find for equality identification; smaller index survives
    std::vector<int> parent(names.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (auto [a, b] : merges) {
        int ra = find(a), rb = find(b);
        if (ra == rb) continue;
        if (ra > rb) std::swap(ra, rb);
        parent[static_cast<std::size_t>(rb)] = ra;
    }

    PPDefinitionResult out;
    out.instance.domain_size = p.domain_size;
    std::vector<int> compact(names.size(), -1);
    for (std::size_t v = 0; v < names.size(); ++v) {
        if (find(static_cast<int>(v)) != static_cast<int>(v)) continue;
        compact[v] = static_cast<int>(out.instance.variables.size());
        out.instance.variables.push_back(names[v]);
    }
    auto image = [&](int v) { return compact[static_cast<std::size_t>(find(v))]; };

    std::set<std::pair<std::string, std::vector<int>>> seen;
    for (const auto& rc : raw) {
        std::string name = out.instance.add_relation(rc.relation, gamma.at(rc.relation));
        std::vector<int> scope;
        scope.reserve(rc.scope.size());
        for (int v : rc.scope) scope.push_back(image(v));
        if (seen.insert({name, scope}).second)
            out.instance.constraints.push_back({std::move(scope), name});
    }
    out.var_map.resize(static_cast<std::size_t>(p.var_count()));
    for (int v = 0; v < p.var_count(); ++v) out.var_map[static_cast<std::size_t>(v)] = image(v);
    return out;
}

// ---------------------------------------------------------------------------
// Primitive positive interpretations.
// ---------------------------------------------------------------------------

/// Interpretation of a language on E inside a language on D: carrier F inside
/// D^ell, onto map pi : F -> E, and explicit preimage relations. Preimage
/// tuples are laid out position-major: the coordinates encoding position 1,
/// then position 2, and so on.
struct PPInterpretation {
    int ell = 1;
    int domain_d = 2;
    int domain_e = 2;
    Relation carrier;                       // F, arity ell
    std::map<std::vector<int>, int> pi;     // F tuple -> E value
    Relation equality_preimage;             // arity 2*ell
    std::map<std::string, Relation> preimages; // per E relation, arity k*ell
};

inline void validate_interpretation(const PPInterpretation& interp,
                                    const std::map<std::string, Relation>& delta) {
    if (static_cast<int>(interp.pi.size()) != static_cast<int>(interp.carrier.tuples.size()))
        throw std::invalid_argument("interpretation: pi must be defined exactly on F");
    std::set<int> image;
    for (const auto& [t, v] : interp.pi) {
        if (!interp.carrier.contains(t))
            throw std::invalid_argument("interpretation: pi defined outside F");
        if (v < 0 || v >= interp.domain_e)
            throw std::invalid_argument("interpretation: pi value out of E");
        image.insert(v);
    }
    if (static_cast<int>(image.size()) != interp.domain_e)
        throw std::invalid_argument("interpretation: pi is not onto E");

    auto check_preimage = [&](const Relation& pre, const Relation& rel, const std::string& name) {
        const int k = rel.arity;
        if (pre.arity != k * interp.ell)
            throw std::invalid_argument("interpretation: preimage arity mismatch for " + name);
        // every preimage tuple must decode into a tuple of rel
        for (const auto& t : pre.tuples) {
            std::vector<int> decoded(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                std::vector<int> block(t.begin() + static_cast<std::ptrdiff_t>(i * interp.ell),
                                       t.begin() + static_cast<std::ptrdiff_t>((i + 1) * interp.ell));
                auto it = interp.pi.find(block);
                if (it == interp.pi.end())
                    throw std::invalid_argument("interpretation: preimage tuple leaves F for " +
                                                name);
                decoded[static_cast<std::size_t>(i)] = it->second;
            }
            if (!rel.contains(decoded))
                throw std::invalid_argument("interpretation: preimage decodes outside " + name);
        }
        // and every combination of carrier blocks decoding into rel must be present
        std::vector<std::vector<int>> blocks(interp.carrier.tuples.begin(),
                                             interp.carrier.tuples.end());
        std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
        while (true) {
            std::vector<int> flat;
            std::vector<int> decoded(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                const auto& b = blocks[pick[static_cast<std::size_t>(i)]];
                flat.insert(flat.end(), b.begin(), b.end());
                decoded[static_cast<std::size_t>(i)] = interp.pi.at(b);
            }
            if (rel.contains(decoded) && !pre.contains(flat))
                throw std::invalid_argument("interpretation: preimage missing a tuple for " + name);
            int i = k - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == blocks.size() - 1)
                pick[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
        }
    };

    Relation eq;
    eq.arity = 2;
    for (int v = 0; v < interp.domain_e; ++v) eq.tuples.insert({v, v});
    check_preimage(interp.equality_preimage, eq, "equality");
    for (const auto& [name, rel] : delta) {
        auto it = interp.preimages.find(name);
        if (it == interp.preimages.end())
            throw std::invalid_argument("interpretation: missing preimage for " + name);
        check_preimage(it->second, rel, name);
    }
}

/// Builds a valid interpretation's preimage relations straight from pi.
inline PPInterpretation make_interpretation(int ell, int domain_d, int domain_e, Relation carrier,
                                            std::map<std::vector<int>, int> pi,
                                            const std::map<std::string, Relation>& delta) {
    PPInterpretation interp;
    interp.ell = ell;
    interp.domain_d = domain_d;
    interp.domain_e = domain_e;
    interp.carrier = std::move(carrier);
    interp.pi = std::move(pi);

    auto preimage_of = [&](const Relation& rel) {
        Relation pre;
        pre.arity = rel.arity * ell;
        std::vector<std::vector<int>> blocks(interp.carrier.tuples.begin(),
                                             interp.carrier.tuples.end());
        std::vector<std::size_t> pick(static_cast<std::size_t>(rel.arity), 0);
        while (true) {
            std::vector<int> flat;
            std::vector<int> decoded(static_cast<std::size_t>(rel.arity));
            for (int i = 0; i < rel.arity; ++i) {
                const auto& b = blocks[pick[static_cast<std::size_t>(i)]];
                flat.insert(flat.end(), b.begin(), b.end());
                decoded[static_cast<std::size_t>(i)] = interp.pi.at(b);
            }
            if (rel.contains(decoded)) pre.tuples.insert(flat);
            int i = rel.arity - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == blocks.size() - 1)
                pick[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
        }
        return pre;
    };

    Relation eq;
    eq.arity = 2;
    for (int v = 0; v < domain_e; ++v) eq.tuples.insert({v, v});
    interp.equality_preimage = preimage_of(eq);
    for (const auto& [name, rel] : delta) interp.preimages[name] = preimage_of(rel);
    return interp;
}

struct PPInterpretationResult {
    Polynomial f0;
    CspInstance instance;
};

/// Rewrites (f0, P) over E into the preimage language over D: each E-variable
/// x becomes ell D-variables x__1..x__ell constrained to the carrier, each
/// constraint becomes its pi-preimage, and f0 substitutes the interpolating
/// polynomial of pi for every variable.
inline PPInterpretationResult apply_pp_interpretation(const Polynomial& f0, const CspInstance& p,
                                                      const PPInterpretation& interp) {
    validate_interpretation(interp, p.relations);
    const int ell = interp.ell;
    const int n = p.var_count();

    CspInstance out;
    out.domain_size = interp.domain_d;
    for (int v = 0; v < n; ++v)
        for (int r = 1; r <= ell; ++r)
            out.variables.push_back(p.variables[static_cast<std::size_t>(v)] + "__" +
                                    std::to_string(r));

    auto coords = [&](int v) {
        std::vector<int> c(static_cast<std::size_t>(ell));
        for (int r = 0; r < ell; ++r) c[static_cast<std::size_t>(r)] = v * ell + r;
        return c;
    };

    std::string carrier_name = out.add_relation("__carrier", interp.carrier);
    for (int v = 0; v < n; ++v) out.constraints.push_back({coords(v), carrier_name});
    for (const auto& c : p.constraints) {
        const Relation& pre = interp.preimages.at(c.relation);
        std::vector<int> scope;
        for (int v : c.scope) {
            auto cs = coords(v);
            scope.insert(scope.end(), cs.begin(), cs.end());
        }
        std::string name = out.add_relation("__pre_" + c.relation, pre);
        out.constraints.push_back({std::move(scope), name});
    }

    // interpolation of pi over the carrier points
    std::vector<std::vector<int>> pts;
    std::vector<Rational> vals;
    for (const auto& [t, v] : interp.pi) {
        pts.push_back(t);
        vals.push_back(v);
    }
    Polynomial interp_poly = interpolate_map(pts, vals); // over ell slots

    Polynomial f(out.var_count());
    {
        // substitute block polynomials variable by variable
        Polynomial acc = Polynomial::zero(out.var_count());
        // first lift f0 into the big ring on dummy positions, then substitute
        std::vector<Polynomial> images;
        images.reserve(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<int> m(static_cast<std::size_t>(ell));
            for (int r = 0; r < ell; ++r) m[static_cast<std::size_t>(r)] = v * ell + r;
            images.push_back(interp_poly.remap(out.var_count(), m));
        }
        for (const auto& [e, cf] : f0.terms()) {
            Polynomial term = Polynomial::constant(out.var_count(), cf);
            for (int v = 0; v < n; ++v)
                for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k)
                    term = term * images[static_cast<std::size_t>(v)];
            acc += term;
        }
        f = std::move(acc);
    }
    return {std::move(f), std::move(out)};
}

// ---------------------------------------------------------------------------
// Witness search by self-reducibility.
// ---------------------------------------------------------------------------

using MembershipEngine = std::function<bool(const Polynomial&, const CspInstance&)>;

struct WitnessResult {
    bool member = false;
    std::vector<int> witness; // over the instance's variables when !member
};

/// Self-reduction: when f0 is a non-member, fixes variables one at a time by
/// pinning each candidate value and re-deciding; the decide engine must accept
/// pinned variants. Issues at most |X|*|D| decide calls.
inline WitnessResult search_witness(const Polynomial& f0, const CspInstance& p,
                                    const MembershipEngine& decide) {
    if (decide(f0, p)) return {true, {}};
    Polynomial f = f0;
    CspInstance inst = p;
    std::vector<int> witness(static_cast<std::size_t>(p.var_count()), -1);
    for (int v = 0; v < p.var_count(); ++v) {
        bool fixed = false;
        for (int a = 0; a < p.domain_size && !fixed; ++a) {
            Polynomial fa = f.substitute_value(v, a);
            CspInstance pa = inst;
            pa.add_pin(v, a);
            if (!decide(fa, pa)) {
                witness[static_cast<std::size_t>(v)] = a;
                f = std::move(fa);
                inst = std::move(pa);
                fixed = true;
            }
        }
        if (!fixed)
            throw std::logic_error("search_witness: no extendable value; engine inconsistent");
    }
    return {false, std::move(witness)};
}

} // namespace cimp
