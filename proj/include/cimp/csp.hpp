#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cimp/errors.hpp"
#include "cimp/polynomial.hpp"

namespace cimp {

/// Explicit finite relation: a set of arity-length tuples over {0,...,t-1}.
struct Relation {
    int arity = 0;
    std::set<std::vector<int>> tuples;

    bool contains(const std::vector<int>& t) const { return tuples.count(t) > 0; }
    bool operator==(const Relation& o) const = default;

    static Relation full(int arity, int domain_size) {
        Relation r;
        r.arity = arity;
        std::vector<int> t(static_cast<std::size_t>(arity), 0);
        while (true) {
            r.tuples.insert(t);
            int i = arity - 1;
            while (i >= 0 && t[static_cast<std::size_t>(i)] == domain_size - 1) {
                t[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++t[static_cast<std::size_t>(i)];
        }
        return r;
    }

    static Relation singleton(std::vector<int> tuple) {
        Relation r;
        r.arity = static_cast<int>(tuple.size());
        r.tuples.insert(std::move(tuple));
        return r;
    }
};

struct Constraint {
    std::vector<int> scope; // variable indices, repetitions allowed
    std::string relation;
};

struct CspInstance {
    std::vector<std::string> variables;
    int domain_size = 0;
    std::map<std::string, Relation> relations;
    std::vector<Constraint> constraints;

    int var_count() const { return static_cast<int>(variables.size()); }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("unknown variable '" + name + "'");
    }

    const Relation& relation_of(const Constraint& c) const {
        auto it = relations.find(c.relation);
        if (it == relations.end())
            throw std::invalid_argument("unknown relation '" + c.relation + "'");
        return it->second;
    }

    bool satisfies(const std::vector<int>& assignment) const {
        for (const auto& c : constraints) {
            std::vector<int> t;
            t.reserve(c.scope.size());
            for (int v : c.scope) t.push_back(assignment[static_cast<std::size_t>(v)]);
            if (!relation_of(c).contains(t)) return false;
        }
        return true;
    }

    /// Registers a relation, reusing the name if the identical relation is
    /// already present and inventing a fresh name on clashes.
    std::string add_relation(std::string name, Relation r) {
        auto it = relations.find(name);
        if (it == relations.end()) {
            relations.emplace(name, std::move(r));
            return name;
        }
        if (it->second == r) return name;
        int suffix = 2;
        std::string candidate;
        do {
            candidate = name + "_" + std::to_string(suffix++);
            it = relations.find(candidate);
        } while (it != relations.end() && !(it->second == r));
        if (it == relations.end()) relations.emplace(candidate, std::move(r));
        return candidate;
    }

    void add_pin(int var, int value) {
        std::string name = add_relation("__pin_" + std::to_string(value),
                                        Relation::singleton({value}));
        constraints.push_back({{var}, name});
    }

    /// A pinning constraint is a unary constraint whose relation is a singleton.
    std::optional<int> pin_value(const Constraint& c) const {
        if (c.scope.size() != 1) return std::nullopt;
        const Relation& r = relation_of(c);
        if (r.arity != 1 || r.tuples.size() != 1) return std::nullopt;
        return r.tuples.begin()->front();
    }

    VarTable var_table() const { return VarTable(variables); }
};

constexpr long long kDefaultEnumerationCap = 10'000'000;

/// Brute-force solution enumeration: the ground-truth oracle. Refuses when
/// |D|^|X| exceeds the cap.
inline std::vector<std::vector<int>> enumerate_solutions(
    const CspInstance& p, long long cap = kDefaultEnumerationCap) {
    const int n = p.var_count();
    long long space = 1;
    for (int i = 0; i < n; ++i) {
        space *= p.domain_size;
        if (space > cap)
            throw CapExceeded("enumerate_solutions: assignment space exceeds cap " +
                              std::to_string(cap));
    }

    std::vector<std::vector<int>> out;
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    while (true) {
        if (p.satisfies(a)) out.push_back(a);
        int i = n - 1;
        while (i >= 0 && a[static_cast<std::size_t>(i)] == p.domain_size - 1) {
            a[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++a[static_cast<std::size_t>(i)];
    }
    return out;
}

/// Finitary operation on the domain as an explicit value table.
struct OperationTable {
    int arity = 0;
    int domain_size = 0;
    std::vector<int> table; // indexed in mixed radix, first argument most significant

    int apply(const std::vector<int>& args) const {
        std::size_t idx = 0;
        for (int a : args) idx = idx * static_cast<std::size_t>(domain_size) +
                                 static_cast<std::size_t>(a);
        return table[idx];
    }

    bool is_idempotent() const {
        std::vector<int> args(static_cast<std::size_t>(arity));
        for (int x = 0; x < domain_size; ++x) {
            std::fill(args.begin(), args.end(), x);
            if (apply(args) != x) return false;
        }
        return true;
    }

    bool is_majority() const {
        if (arity != 3) return false;
        for (int x = 0; x < domain_size; ++x)
            for (int y = 0; y < domain_size; ++y)
                if (apply({x, x, y}) != x || apply({x, y, x}) != x || apply({y, x, x}) != x)
                    return false;
        return true;
    }
};

/// The dual-discriminator: g(x,y,z) = y if y = z, else x.
inline OperationTable dual_discriminator(int domain_size) {
    OperationTable op{3, domain_size, {}};
    op.table.resize(static_cast<std::size_t>(domain_size) * domain_size * domain_size);
    for (int x = 0; x < domain_size; ++x)
        for (int y = 0; y < domain_size; ++y)
            for (int z = 0; z < domain_size; ++z)
                op.table[static_cast<std::size_t>((x * domain_size + y) * domain_size + z)] =
                    (y == z) ? y : x;
    return op;
}

/// The affine operation x - y + z mod p.
inline OperationTable affine_operation(int p) {
    OperationTable op{3, p, {}};
    op.table.resize(static_cast<std::size_t>(p) * p * p);
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int z = 0; z < p; ++z)
                op.table[static_cast<std::size_t>((x * p + y) * p + z)] =
                    ((x - y + z) % p + p) % p;
    return op;
}

/// Binary minimum under the total order given as a permutation of the domain
/// (order[0] is the least element). Always a conservative semilattice operation.
inline OperationTable order_min_operation(const std::vector<int>& order) {
    int t = static_cast<int>(order.size());
    std::vector<int> rank(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    OperationTable op{2, t, {}};
    op.table.resize(static_cast<std::size_t>(t) * t);
    for (int x = 0; x < t; ++x)
        for (int y = 0; y < t; ++y)
            op.table[static_cast<std::size_t>(x * t + y)] =
                rank[static_cast<std::size_t>(x)] <= rank[static_cast<std::size_t>(y)] ? x : y;
    return op;
}

/// True iff the component-wise action of op maps every tuple-combination of r
/// back into r.
inline bool check_polymorphism(const OperationTable& op, const Relation& r) {
    std::vector<std::vector<int>> tuples(r.tuples.begin(), r.tuples.end());
    if (tuples.empty()) return true;
    const int k = op.arity;
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    while (true) {
        std::vector<int> image(static_cast<std::size_t>(r.arity));
        std::vector<int> args(static_cast<std::size_t>(k));
        for (int pos = 0; pos < r.arity; ++pos) {
            for (int j = 0; j < k; ++j)
                args[static_cast<std::size_t>(j)] =
                    tuples[pick[static_cast<std::size_t>(j)]][static_cast<std::size_t>(pos)];
            image[static_cast<std::size_t>(pos)] = op.apply(args);
        }
        if (!r.contains(image)) return false;

        int j = k - 1;
        while (j >= 0 && pick[static_cast<std::size_t>(j)] == tuples.size() - 1) {
            pick[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++pick[static_cast<std::size_t>(j)];
    }
    return true;
}

inline bool check_polymorphism(const OperationTable& op, const std::vector<Relation>& gamma) {
    for (const auto& r : gamma)
        if (!check_polymorphism(op, r)) return false;
    return true;
}

enum class SpecialPolymorphism { DualDiscriminator, SemilatticeConservative, Affine };

constexpr int kSemilatticeSearchCap = 4;

/// Looks for a witnessing operation table. Dual-discriminator and affine have a
/// single candidate each; conservative semilattices are searched over all total
/// orders of the domain (domains above the cap are refused).
inline std::optional<OperationTable> detect_special_polymorphism(
    const std::vector<Relation>& gamma, SpecialPolymorphism kind, int domain_size) {
    switch (kind) {
        case SpecialPolymorphism::DualDiscriminator: {
            OperationTable op = dual_discriminator(domain_size);
            if (check_polymorphism(op, gamma)) return op;
            return std::nullopt;
        }
        case SpecialPolymorphism::Affine: {
            OperationTable op = affine_operation(domain_size);
            if (check_polymorphism(op, gamma)) return op;
            return std::nullopt;
        }
        case SpecialPolymorphism::SemilatticeConservative: {
            if (domain_size > kSemilatticeSearchCap)
                throw CapExceeded("semilattice search: domain size exceeds cap " +
                                  std::to_string(kSemilatticeSearchCap));
            std::vector<int> order(static_cast<std::size_t>(domain_size));
            std::iota(order.begin(), order.end(), 0);
            do {
                OperationTable op = order_min_operation(order);
                if (check_polymorphism(op, gamma)) return op;
            } while (std::next_permutation(order.begin(), order.end()));
            return std::nullopt;
        }
    }
    return std::nullopt;
}

/// Extracts the total order defined by a conservative semilattice operation
/// (least element first): u <= v iff op(u,v) = u.
inline std::vector<int> semilattice_order(const OperationTable& op) {
    std::vector<int> order(static_cast<std::size_t>(op.domain_size));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int u, int v) { return u != v && op.apply({u, v}) == u; });
    return order;
}

// ---------------------------------------------------------------------------
// Binary constraint networks and the consistency closure.
// ---------------------------------------------------------------------------

/// Normalized view of a unary/binary instance: one domain per variable, one
/// relation per ordered pair (i < j), complete where unconstrained.
struct BinaryNetwork {
    int domain_size = 0;
    std::vector<std::set<int>> domains;
    std::map<std::pair<int, int>, std::set<std::pair<int, int>>> pair_rel; // key i < j

    bool pair_allows(int i, int j, int a, int b) const {
        if (i == j) return a == b;
        if (i > j) return pair_allows(j, i, b, a);
        auto it = pair_rel.find({i, j});
        if (it == pair_rel.end())
            return domains[static_cast<std::size_t>(i)].count(a) > 0 &&
                   domains[static_cast<std::size_t>(j)].count(b) > 0;
        return it->second.count({a, b}) > 0;
    }
};

/// Builds the materialized network of a unary/binary instance. Scopes of the
/// form (x, x) fold into the unary diagonal. Throws on arity > 2.
inline BinaryNetwork build_network(const CspInstance& p) {
    const int n = p.var_count();
    BinaryNetwork net;
    net.domain_size = p.domain_size;
    net.domains.assign(static_cast<std::size_t>(n), {});
    for (auto& d : net.domains)
        for (int a = 0; a < p.domain_size; ++a) d.insert(a);

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::set<std::pair<int, int>> full;
            for (int a = 0; a < p.domain_size; ++a)
                for (int b = 0; b < p.domain_size; ++b) full.insert({a, b});
            net.pair_rel[{i, j}] = std::move(full);
        }

    for (const auto& c : p.constraints) {
        const Relation& r = p.relation_of(c);
        if (r.arity == 1) {
            std::set<int> allowed;
            for (const auto& t : r.tuples) allowed.insert(t[0]);
            auto& dom = net.domains[static_cast<std::size_t>(c.scope[0])];
            std::set<int> cut;
            std::set_intersection(dom.begin(), dom.end(), allowed.begin(), allowed.end(),
                                  std::inserter(cut, cut.begin()));
            dom = std::move(cut);
        } else if (r.arity == 2) {
            int i = c.scope[0], j = c.scope[1];
            if (i == j) {
                auto& dom = net.domains[static_cast<std::size_t>(i)];
                std::set<int> keep;
                for (int a : dom)
                    if (r.contains({a, a})) keep.insert(a);
                dom = std::move(keep);
                continue;
            }
            bool swap = i > j;
            if (swap) std::swap(i, j);
            auto& rel = net.pair_rel[{i, j}];
            std::set<std::pair<int, int>> keep;
            for (const auto& [a, b] : rel) {
                std::vector<int> t = swap ? std::vector<int>{b, a} : std::vector<int>{a, b};
                if (r.contains(t)) keep.insert({a, b});
            }
            rel = std::move(keep);
        } else {
            throw std::invalid_argument("binary network: constraint arity > 2");
        }
    }
    // keep pair relations inside the unary-reduced domains
    for (auto& [key, rel] : net.pair_rel) {
        auto [i, j] = key;
        std::set<std::pair<int, int>> keep;
        for (const auto& [a, b] : rel)
            if (net.domains[static_cast<std::size_t>(i)].count(a) &&
                net.domains[static_cast<std::size_t>(j)].count(b))
                keep.insert({a, b});
        rel = std::move(keep);
    }
    return net;
}

/// Closure used throughout the dual-discriminator pipeline: prunes domains by
/// pair support and enforces, for every ordered pair and every third variable,
/// that each allowed (a,b) extends through some c. Returns false on wipeout.
/// The solution set is unchanged.
inline bool close_network(BinaryNetwork& net) {
    const int n = static_cast<int>(net.domains.size());
    bool changed = true;
    while (changed) {
        changed = false;
        // Tuples outside current domains, then domain values without support.
        for (auto& [key, rel] : net.pair_rel) {
            auto [i, j] = key;
            std::set<std::pair<int, int>> keep;
            for (const auto& [a, b] : rel)
                if (net.domains[static_cast<std::size_t>(i)].count(a) &&
                    net.domains[static_cast<std::size_t>(j)].count(b))
                    keep.insert({a, b});
            if (keep.size() != rel.size()) changed = true;
            rel = std::move(keep);
        }
        for (const auto& [key, rel] : net.pair_rel) {
            auto [i, j] = key;
            std::set<int> si, sj;
            for (const auto& [a, b] : rel) {
                si.insert(a);
                sj.insert(b);
            }
            if (si.size() != net.domains[static_cast<std::size_t>(i)].size()) {
                net.domains[static_cast<std::size_t>(i)] = std::move(si);
                changed = true;
            }
            if (sj.size() != net.domains[static_cast<std::size_t>(j)].size()) {
                net.domains[static_cast<std::size_t>(j)] = std::move(sj);
                changed = true;
            }
        }
        // Path step: (a,b) in R_ij needs c in D_k with (a,c) in R_ik, (c,b) in R_kj.
        for (auto& [key, rel] : net.pair_rel) {
            auto [i, j] = key;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                std::set<std::pair<int, int>> keep;
                for (const auto& [a, b] : rel) {
                    bool ok = false;
                    for (int c : net.domains[static_cast<std::size_t>(k)]) {
                        if (net.pair_allows(i, k, a, c) && net.pair_allows(k, j, c, b)) {
                            ok = true;
                            break;
                        }
                    }
                    if (ok) keep.insert({a, b});
                }
                if (keep.size() != rel.size()) {
                    rel = std::move(keep);
                    changed = true;
                }
            }
        }
        for (const auto& d : net.domains)
            if (d.empty()) return false;
        for (const auto& [key, rel] : net.pair_rel)
            if (rel.empty()) return false;
    }
    return true;
}

/// Renders a closed network back into instance form: a unary constraint per
/// reduced domain and a binary constraint per pair that is tighter than the
/// product of its domains.
inline CspInstance network_to_instance(const BinaryNetwork& net,
                                       const std::vector<std::string>& variables,
                                       int domain_size) {
    CspInstance out;
    out.variables = variables;
    out.domain_size = domain_size;
    const int n = static_cast<int>(variables.size());
    for (int i = 0; i < n; ++i) {
        const auto& dom = net.domains[static_cast<std::size_t>(i)];
        if (static_cast<int>(dom.size()) == domain_size) continue;
        Relation r;
        r.arity = 1;
        for (int a : dom) r.tuples.insert({a});
        std::string name = out.add_relation("__ac_dom_" + variables[static_cast<std::size_t>(i)],
                                            std::move(r));
        out.constraints.push_back({{i}, name});
    }
    for (const auto& [key, rel] : net.pair_rel) {
        auto [i, j] = key;
        std::size_t product = net.domains[static_cast<std::size_t>(i)].size() *
                              net.domains[static_cast<std::size_t>(j)].size();
        if (rel.size() == product) continue;
        Relation r;
        r.arity = 2;
        for (const auto& [a, b] : rel) r.tuples.insert({a, b});
        std::string name = out.add_relation("__ac_" + variables[static_cast<std::size_t>(i)] +
                                                "_" + variables[static_cast<std::size_t>(j)],
                                            std::move(r));
        out.constraints.push_back({{i, j}, name});
    }
    return out;
}

/// Consistency closure of a unary/binary instance. Returns nullopt on
/// unsatisfiability detected by the closure; otherwise an instance with the
/// same solution set. When the closure changes nothing the input is returned
/// verbatim.
inline std::optional<CspInstance> arc_consistency(const CspInstance& p) {
    BinaryNetwork net = build_network(p);
    BinaryNetwork original = net;
    if (!close_network(net)) return std::nullopt;

    bool same = net.domains == original.domains;
    if (same) {
        for (const auto& [key, rel] : net.pair_rel) {
            if (original.pair_rel.at(key) != rel) {
                same = false;
                break;
            }
        }
    }
    if (same) return p;
    return network_to_instance(net, p.variables, p.domain_size);
}

/// Backtracking satisfiability check on a closed network; desk scale only.
inline bool network_satisfiable(const BinaryNetwork& net) {
    const int n = static_cast<int>(net.domains.size());
    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    auto consistent = [&](int var, int value) {
        for (int o = 0; o < var; ++o)
            if (!net.pair_allows(o, var, assignment[static_cast<std::size_t>(o)], value))
                return false;
        return true;
    };
    int var = 0;
    std::vector<int> choice(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> options(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        options[static_cast<std::size_t>(i)] = {net.domains[static_cast<std::size_t>(i)].begin(),
                                                net.domains[static_cast<std::size_t>(i)].end()};
    while (var >= 0) {
        if (var == n) return true;
        auto& pos = choice[static_cast<std::size_t>(var)];
        bool advanced = false;
        for (int next = pos + 1;
             next < static_cast<int>(options[static_cast<std::size_t>(var)].size()); ++next) {
            int value = options[static_cast<std::size_t>(var)][static_cast<std::size_t>(next)];
            if (consistent(var, value)) {
                pos = next;
                assignment[static_cast<std::size_t>(var)] = value;
                advanced = true;
                break;
            }
        }
        if (advanced) {
            ++var;
            if (var < n) choice[static_cast<std::size_t>(var)] = -1;
        } else {
            --var;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Instance text format (line oriented):
//
//   domain 3
//   vars x y z
//   relation R arity 2 { (0,1) (1,2) (2,2) }
//   constraint R (x, y)
//   pin z 2
// ---------------------------------------------------------------------------

inline CspInstance parse_csp(const std::string& text) {
    CspInstance p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool domain_seen = false;

    auto fail = [&](const std::string& msg) {
        throw ParseError("instance line " + std::to_string(lineno) + ": " + msg);
    };

    std::string pending; // continuation buffer for multi-line tuple lists
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (!pending.empty()) {
            line = pending + " " + line;
            pending.clear();
        }
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;

        if (word == "domain") {
            if (!(ls >> p.domain_size) || p.domain_size < 1) fail("bad domain size");
            domain_seen = true;
        } else if (word == "vars") {
            std::string v;
            while (ls >> v) {
                for (const auto& existing : p.variables)
                    if (existing == v) fail("duplicate variable '" + v + "'");
                p.variables.push_back(v);
            }
        } else if (word == "relation") {
            if (!domain_seen) fail("relation before domain");
            std::string name, kw;
            int arity = 0;
            if (!(ls >> name >> kw >> arity) || kw != "arity" || arity < 1)
                fail("expected: relation NAME arity K { tuples }");
            std::string rest;
            std::getline(ls, rest);
            if (rest.find('{') == std::string::npos) fail("missing '{'");
            if (rest.find('}') == std::string::npos) {
                pending = line;
                --lineno;
                continue;
            }
            std::string body = rest.substr(rest.find('{') + 1);
            body = body.substr(0, body.find('}'));
            for (char& ch : body)
                if (ch == '(' || ch == ')' || ch == ',') ch = ' ';
            std::istringstream bs(body);
            std::vector<int> vals;
            int x;
            while (bs >> x) vals.push_back(x);
            if (vals.size() % static_cast<std::size_t>(arity) != 0)
                fail("tuple list length not a multiple of arity");
            Relation r;
            r.arity = arity;
            for (std::size_t i = 0; i < vals.size(); i += static_cast<std::size_t>(arity)) {
                std::vector<int> t(vals.begin() + static_cast<std::ptrdiff_t>(i),
                                   vals.begin() + static_cast<std::ptrdiff_t>(i + arity));
                for (int e : t)
                    if (e < 0 || e >= p.domain_size) fail("tuple entry out of domain");
                r.tuples.insert(std::move(t));
            }
            if (p.relations.count(name)) fail("duplicate relation '" + name + "'");
            p.relations.emplace(name, std::move(r));
        } else if (word == "constraint") {
            std::string name, rest;
            if (!(ls >> name)) fail("expected: constraint NAME (vars)");
            std::getline(ls, rest);
            for (char& ch : rest)
                if (ch == '(' || ch == ')' || ch == ',') ch = ' ';
            std::istringstream vs(rest);
            Constraint c;
            c.relation = name;
            std::string v;
            while (vs >> v) c.scope.push_back(p.var_index(v));
            auto it = p.relations.find(name);
            if (it == p.relations.end()) fail("unknown relation '" + name + "'");
            if (static_cast<int>(c.scope.size()) != it->second.arity)
                fail("scope length does not match arity of '" + name + "'");
            p.constraints.push_back(std::move(c));
        } else if (word == "pin") {
            std::string v;
            int a = 0;
            if (!(ls >> v >> a)) fail("expected: pin VAR VALUE");
            if (a < 0 || a >= p.domain_size) fail("pin value out of domain");
            p.add_pin(p.var_index(v), a);
        } else {
            fail("unknown directive '" + word + "'");
        }
    }
    if (!domain_seen) throw ParseError("instance: missing 'domain' line");
    return p;
}

inline std::string format_csp(const CspInstance& p) {
    std::ostringstream out;
    out << "domain " << p.domain_size << "\n";
    out << "vars";
    for (const auto& v : p.variables) out << " " << v;
    out << "\n";
    for (const auto& [name, r] : p.relations) {
        out << "relation " << name << " arity " << r.arity << " {";
        for (const auto& t : r.tuples) {
            out << " (";
            for (std::size_t i = 0; i < t.size(); ++i)
                out << (i ? "," : "") << t[i];
            out << ")";
        }
        out << " }\n";
    }
    for (const auto& c : p.constraints) {
        out << "constraint " << c.relation << " (";
        for (std::size_t i = 0; i < c.scope.size(); ++i)
            out << (i ? ", " : "") << p.variables[static_cast<std::size_t>(c.scope[i])];
        out << ")\n";
    }
    return out.str();
}

/// Distinct relations actually used by the instance's constraints.
inline std::vector<Relation> used_relations(const CspInstance& p) {
    std::vector<Relation> out;
    std::set<std::string> seen;
    for (const auto& c : p.constraints)
        if (seen.insert(c.relation).second) out.push_back(p.relation_of(c));
    return out;
}

} // namespace cimp
