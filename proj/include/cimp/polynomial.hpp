#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cimp/errors.hpp"
#include "cimp/rational.hpp"

namespace cimp {

/// Exponent vector of a monomial; one entry per ring variable, all >= 0.
using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0);
}

inline bool divides(const Exponents& a, const Exponents& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exponents exponent_sum(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Exponents exponent_diff(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Exponents exponent_lcm(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

enum class OrderKind { Lex, Grlex };

/// Monomial order: lex or grlex over a fixed variable priority list.
/// priority[0] is the most significant variable index.
struct MonomialOrder {
    OrderKind kind = OrderKind::Grlex;
    std::vector<int> priority;

    static MonomialOrder lex(int nvars) { return {OrderKind::Lex, natural(nvars)}; }
    static MonomialOrder grlex(int nvars) { return {OrderKind::Grlex, natural(nvars)}; }

    static std::vector<int> natural(int nvars) {
        std::vector<int> p(static_cast<std::size_t>(nvars));
        std::iota(p.begin(), p.end(), 0);
        return p;
    }

    std::strong_ordering compare(const Exponents& a, const Exponents& b) const {
        if (a.size() != b.size() || a.size() != priority.size())
            throw std::invalid_argument("monomial comparison: exponent length mismatch");
        if (kind == OrderKind::Grlex) {
            int da = total_degree(a), db = total_degree(b);
            if (da != db) return da <=> db;
        }
        for (int v : priority) {
            if (a[v] != b[v]) return a[v] <=> b[v];
        }
        return std::strong_ordering::equal;
    }

    bool less(const Exponents& a, const Exponents& b) const { return compare(a, b) < 0; }
};

inline std::strong_ordering compare_monomials(const Exponents& a, const Exponents& b,
                                              const MonomialOrder& ord) {
    return ord.compare(a, b);
}

/// Sparse multivariate polynomial over exact rationals. Terms are kept in a
/// canonical map keyed by exponent vector; ordering-dependent queries
/// (leading term) scan against the requested order.
class Polynomial {
public:
    Polynomial() : arity_(0) {}
    explicit Polynomial(int arity) : arity_(arity) {}

    static Polynomial zero(int arity) { return Polynomial(arity); }

    static Polynomial constant(int arity, const Rational& c) {
        Polynomial p(arity);
        p.add_term(Exponents(static_cast<std::size_t>(arity), 0), c);
        return p;
    }

    static Polynomial variable(int arity, int var) {
        Polynomial p(arity);
        Exponents e(static_cast<std::size_t>(arity), 0);
        e[static_cast<std::size_t>(var)] = 1;
        p.add_term(e, 1);
        return p;
    }

    static Polynomial monomial(int arity, Exponents e, const Rational& c) {
        Polynomial p(arity);
        p.add_term(std::move(e), c);
        return p;
    }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    /// Total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    void add_term(Exponents e, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_same_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same_ring(b);
        Polynomial r(a.arity_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(exponent_sum(ea, eb), ca * cb);
        return r;
    }

    friend Polynomial operator*(const Rational& c, const Polynomial& p) {
        Polynomial r(p.arity_);
        if (c == 0) return r;
        for (const auto& [e, k] : p.terms_) r.terms_.emplace(e, c * k);
        return r;
    }

    friend Polynomial operator-(const Polynomial& p) { return Rational(-1) * p; }

    bool operator==(const Polynomial& o) const {
        return arity_ == o.arity_ && terms_ == o.terms_;
    }

    Polynomial pow(int n) const {
        Polynomial r = constant(arity_, 1);
        for (int i = 0; i < n; ++i) r = r * (*this);
        return r;
    }

    /// Leading (coefficient, monomial) under ord. Throws on the zero polynomial.
    std::pair<Rational, Exponents> leading(const MonomialOrder& ord) const {
        if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (ord.less(best->first, it->first)) best = it;
        return {best->second, best->first};
    }

    Exponents leading_monomial(const MonomialOrder& ord) const { return leading(ord).second; }

    Rational evaluate(const std::vector<Rational>& point) const {
        if (point.size() != static_cast<std::size_t>(arity_))
            throw std::invalid_argument("evaluate: wrong point dimension");
        Rational acc = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) t *= point[i];
            acc += t;
        }
        return acc;
    }

    Rational evaluate(const std::vector<int>& point) const {
        std::vector<Rational> q(point.size());
        for (std::size_t i = 0; i < point.size(); ++i) q[i] = point[i];
        return evaluate(q);
    }

    /// Moves the polynomial into a ring with new_arity variables; var_map[i] is
    /// the new index of old variable i. Old variables mapped to the same new
    /// index have their exponents added (variable identification).
    Polynomial remap(int new_arity, const std::vector<int>& var_map) const {
        Polynomial r(new_arity);
        for (const auto& [e, c] : terms_) {
            Exponents ne(static_cast<std::size_t>(new_arity), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                int nv = var_map[i];
                if (nv < 0 || nv >= new_arity)
                    throw std::invalid_argument("remap: variable image out of range");
                ne[static_cast<std::size_t>(nv)] += e[i];
            }
            r.add_term(std::move(ne), c);
        }
        return r;
    }

    /// Substitutes g for variable var; g must live in the same ring.
    Polynomial substitute(int var, const Polynomial& g) const {
        Polynomial r(arity_);
        for (const auto& [e, c] : terms_) {
            Exponents rest = e;
            int k = rest[static_cast<std::size_t>(var)];
            rest[static_cast<std::size_t>(var)] = 0;
            Polynomial t = monomial(arity_, rest, c);
            if (k > 0) t = t * g.pow(k);
            r += t;
        }
        return r;
    }

    Polynomial substitute_value(int var, const Rational& a) const {
        return substitute(var, constant(arity_, a));
    }

private:
    void check_same_ring(const Polynomial& o) const {
        if (arity_ != o.arity_) throw std::invalid_argument("polynomial arity mismatch");
    }

    int arity_;
    std::map<Exponents, Rational> terms_;
};

struct DivisionResult {
    std::vector<Polynomial> quotients;
    Polynomial remainder;
};

/// Classical multivariate division: scans divisors in list order and restarts
/// from the first divisor after every reduction step. Guarantees
/// f = sum q_i d_i + r with no term of r divisible by any LT(d_i) and
/// multideg(q_i d_i) <= multideg(f).
inline DivisionResult divide(const Polynomial& f, const std::vector<Polynomial>& divisors,
                             const MonomialOrder& ord) {
    for (const auto& d : divisors)
        if (d.is_zero()) throw std::invalid_argument("divide: zero divisor");

    const int arity = f.arity();
    DivisionResult res;
    res.quotients.assign(divisors.size(), Polynomial::zero(arity));
    res.remainder = Polynomial::zero(arity);

    std::vector<std::pair<Rational, Exponents>> lts;
    lts.reserve(divisors.size());
    for (const auto& d : divisors) lts.push_back(d.leading(ord));

    Polynomial p = f;
    while (!p.is_zero()) {
        auto [pc, pm] = p.leading(ord);
        bool reduced = false;
        for (std::size_t i = 0; i < divisors.size(); ++i) {
            if (!divides(lts[i].second, pm)) continue;
            Rational c = pc / lts[i].first;
            Exponents m = exponent_diff(pm, lts[i].second);
            Polynomial t = Polynomial::monomial(arity, m, c);
            res.quotients[i] += t;
            p -= t * divisors[i];
            reduced = true;
            break;
        }
        if (!reduced) {
            Polynomial t = Polynomial::monomial(arity, pm, pc);
            res.remainder += t;
            p -= t;
        }
    }
    return res;
}

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g,
                               const MonomialOrder& ord) {
    if (f.is_zero() || g.is_zero()) throw std::domain_error("s_polynomial of zero polynomial");
    auto [fc, fm] = f.leading(ord);
    auto [gc, gm] = g.leading(ord);
    Exponents gamma = exponent_lcm(fm, gm);
    Polynomial a = Polynomial::monomial(f.arity(), exponent_diff(gamma, fm), Rational(1) / fc);
    Polynomial b = Polynomial::monomial(g.arity(), exponent_diff(gamma, gm), Rational(1) / gc);
    return a * f - b * g;
}

// ---------------------------------------------------------------------------
// Variable interning and the polynomial text grammar.
//
//   poly   := [sign] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := rational | var ['^' int]
//   var    := [A-Za-z_][A-Za-z0-9_]*
//
// Whitespace insensitive, e.g. "2*x1^2*x2 - 3/2*x2 + 1".
// ---------------------------------------------------------------------------

/// Interns variable names to indices; all core math is index-based.
class VarTable {
public:
    VarTable() = default;
    explicit VarTable(const std::vector<std::string>& names) {
        for (const auto& n : names) intern(n);
    }

    int intern(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    std::optional<int> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

namespace detail {

inline bool ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

struct PolyLexer {
    std::string s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        skip_ws();
        return s[pos++];
    }
    std::string take_ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && ident_char(s[pos])) ++pos;
        return s.substr(start, pos - start);
    }
    std::string take_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) throw ParseError("expected number at position " + std::to_string(start) +
                                           " in '" + s + "'");
        return s.substr(start, pos - start);
    }
};

} // namespace detail

/// Parses the polynomial grammar against vars. When allow_new_vars is false an
/// unknown variable is a ParseError; the resulting polynomial's arity is the
/// table size after parsing, so callers sharing one table get one ring.
inline Polynomial parse_polynomial(const std::string& text, VarTable& vars,
                                   bool allow_new_vars = true) {
    detail::PolyLexer lx{text};

    struct RawTerm {
        Rational coeff;
        std::vector<std::pair<int, int>> powers; // (var, exponent)
    };
    std::vector<RawTerm> raw;

    bool first_term = true;
    while (!lx.done()) {
        int sign = 1;
        if (!first_term) {
            char c = lx.take();
            if (c == '+')
                sign = 1;
            else if (c == '-')
                sign = -1;
            else
                throw ParseError("expected '+' or '-' in '" + text + "'");
        } else {
            if (lx.peek() == '+') { lx.take(); }
            else if (lx.peek() == '-') { lx.take(); sign = -1; }
        }
        first_term = false;

        RawTerm term;
        term.coeff = sign;
        bool expect_factor = true;
        while (expect_factor) {
            char c = lx.peek();
            if (c >= '0' && c <= '9') {
                std::string num = lx.take_number();
                if (lx.peek() == '/') {
                    lx.take();
                    num += "/" + lx.take_number();
                }
                term.coeff *= parse_rational(num);
            } else if (detail::ident_start(c)) {
                std::string name = lx.take_ident();
                int var;
                if (allow_new_vars) {
                    var = vars.intern(name);
                } else {
                    auto id = vars.find(name);
                    if (!id) throw ParseError("unknown variable '" + name + "'");
                    var = *id;
                }
                int e = 1;
                if (lx.peek() == '^') {
                    lx.take();
                    e = std::stoi(lx.take_number());
                }
                term.powers.emplace_back(var, e);
            } else {
                throw ParseError("unexpected character '" + std::string(1, c) + "' in '" + text +
                                 "'");
            }
            expect_factor = false;
            if (lx.peek() == '*') {
                lx.take();
                expect_factor = true;
            }
        }
        raw.push_back(std::move(term));
    }

    if (raw.empty()) throw ParseError("empty polynomial text");

    Polynomial p(vars.size());
    for (const auto& t : raw) {
        Exponents e(static_cast<std::size_t>(vars.size()), 0);
        for (auto [v, k] : t.powers) e[static_cast<std::size_t>(v)] += k;
        p.add_term(std::move(e), t.coeff);
    }
    return p;
}

/// Renders terms in descending grlex with natural priority; inverse of the grammar.
inline std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    MonomialOrder ord = MonomialOrder::grlex(p.arity());
    std::vector<const std::pair<const Exponents, Rational>*> ts;
    for (const auto& t : p.terms()) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [&](auto* a, auto* b) { return ord.less(b->first, a->first); });

    std::string out;
    bool first = true;
    for (auto* t : ts) {
        Rational c = t->second;
        bool neg = c < 0;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        Rational mag = neg ? Rational(-c) : c;

        std::string monom;
        for (std::size_t i = 0; i < t->first.size(); ++i) {
            int e = t->first[i];
            if (e == 0) continue;
            if (!monom.empty()) monom += "*";
            monom += names[i];
            if (e > 1) monom += "^" + std::to_string(e);
        }
        if (monom.empty()) {
            out += to_string(mag);
        } else {
            if (mag != 1) out += to_string(mag) + "*";
            out += monom;
        }
    }
    return out;
}

inline std::string format_polynomial(const Polynomial& p, const VarTable& vars) {
    return format_polynomial(p, vars.names());
}

} // namespace cimp
