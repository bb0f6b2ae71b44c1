#include <gtest/gtest.h>

#include <random>

#include "cimp/polynomial.hpp"

using namespace cimp;

namespace {

Polynomial parse(const std::string& s, VarTable& vars) { return parse_polynomial(s, vars); }

TEST(MonomialOrder, GrlexComparesTotalDegreeFirst) {
    MonomialOrder ord = MonomialOrder::grlex(3);
    EXPECT_TRUE(ord.compare({1, 2, 0}, {0, 3, 4}) < 0); // degrees 3 < 7
    EXPECT_TRUE(ord.compare({0, 3, 4}, {1, 2, 0}) > 0);
}

TEST(MonomialOrder, LexUsesLeftmostDifference) {
    MonomialOrder ord = MonomialOrder::lex(2);
    EXPECT_TRUE(ord.compare({1, 0}, {0, 5}) > 0);
    EXPECT_TRUE(ord.compare({2, 3}, {2, 3}) == 0);
}

TEST(MonomialOrder, RespectsPriorityPermutation) {
    MonomialOrder ord{OrderKind::Lex, {1, 0}}; // second variable most significant
    EXPECT_TRUE(ord.compare({1, 0}, {0, 5}) < 0);
}

TEST(MonomialOrder, LengthMismatchThrows) {
    MonomialOrder ord = MonomialOrder::lex(2);
    EXPECT_THROW((void)ord.compare({1, 0, 0}, {0, 1}), std::invalid_argument);
}

TEST(MonomialOrder, TotalOrderOnRandomTriples) {
    std::mt19937 rng(7);
    MonomialOrder ord = MonomialOrder::grlex(3);
    auto rand_exp = [&] {
        Exponents e(3);
        for (auto& x : e) x = static_cast<int>(rng() % 4);
        return e;
    };
    for (int i = 0; i < 500; ++i) {
        Exponents a = rand_exp(), b = rand_exp(), c = rand_exp();
        // antisymmetry
        EXPECT_EQ(ord.compare(a, b) < 0, ord.compare(b, a) > 0);
        // transitivity
        if (ord.compare(a, b) <= 0 && ord.compare(b, c) <= 0) EXPECT_TRUE(ord.compare(a, c) <= 0);
        // grlex refines total degree
        if (total_degree(a) < total_degree(b)) EXPECT_TRUE(ord.compare(a, b) < 0);
    }
}

TEST(LeadingTerm, WorkedGrlexExample) {
    VarTable vars;
    Polynomial f = parse("x^2*y - x*y^2 + y", vars);
    auto [c, m] = f.leading(MonomialOrder::grlex(2));
    EXPECT_EQ(c, Rational(1));
    EXPECT_EQ(m, (Exponents{2, 1}));
}

TEST(LeadingTerm, ConstantAndLinear) {
    VarTable vars;
    vars.intern("x");
    vars.intern("y");
    Polynomial seven = Polynomial::constant(2, 7);
    auto [c7, m7] = seven.leading(MonomialOrder::grlex(2));
    EXPECT_EQ(c7, Rational(7));
    EXPECT_EQ(m7, (Exponents{0, 0}));

    Polynomial f = parse_polynomial("x + y", vars, false);
    auto [c, m] = f.leading(MonomialOrder::lex(2));
    EXPECT_EQ(c, Rational(1));
    EXPECT_EQ(m, (Exponents{1, 0}));
}

TEST(LeadingTerm, ZeroThrows) {
    Polynomial z = Polynomial::zero(2);
    EXPECT_THROW((void)z.leading(MonomialOrder::grlex(2)), std::domain_error);
}

TEST(Division, TextbookQuotients) {
    VarTable vars;
    Polynomial f = parse("x^2*y - x*y^2 + y", vars);
    Polynomial f1 = parse_polynomial("x^2", vars, false);
    Polynomial f2 = parse_polynomial("x*y - 1", vars, false);
    MonomialOrder ord = MonomialOrder::grlex(2);

    DivisionResult r = divide(f, {f1, f2}, ord);
    EXPECT_EQ(r.quotients[0], parse_polynomial("y", vars, false));
    EXPECT_EQ(r.quotients[1], parse_polynomial("-y", vars, false));
    EXPECT_TRUE(r.remainder.is_zero());
}

TEST(Division, DivisorOrderChangesRemainder) {
    VarTable vars;
    Polynomial f = parse("x^2*y - x*y^2 + y", vars);
    Polynomial f1 = parse_polynomial("x*y - 1", vars, false);
    Polynomial f2 = parse_polynomial("x^2", vars, false);
    MonomialOrder ord = MonomialOrder::grlex(2);

    DivisionResult r = divide(f, {f1, f2}, ord);
    EXPECT_EQ(r.remainder, parse_polynomial("x", vars, false));
    // f - (x - y)(xy - 1) = x exactly
    EXPECT_EQ(f - parse_polynomial("x - y", vars, false) * f1, parse_polynomial("x", vars, false));
}

TEST(Division, SelfDivision) {
    VarTable vars;
    Polynomial f = parse("x^2*y - 3*x + 1/2", vars);
    DivisionResult r = divide(f, {f}, MonomialOrder::grlex(2));
    EXPECT_EQ(r.quotients[0], Polynomial::constant(2, 1));
    EXPECT_TRUE(r.remainder.is_zero());
}

TEST(Division, ZeroDivisorThrows) {
    VarTable vars;
    Polynomial f = parse("x", vars);
    EXPECT_THROW(divide(f, {Polynomial::zero(1)}, MonomialOrder::grlex(1)),
                 std::invalid_argument);
}

TEST(Division, IdentityAndIrreducibilityProperties) {
    std::mt19937 rng(42);
    for (int round = 0; round < 60; ++round) {
        int nvars = 2 + static_cast<int>(rng() % 2);
        MonomialOrder ord = MonomialOrder::grlex(nvars);
        auto rand_poly = [&](int maxdeg, int terms) {
            Polynomial p(nvars);
            for (int t = 0; t < terms; ++t) {
                Exponents e(static_cast<std::size_t>(nvars), 0);
                int d = static_cast<int>(rng() % (maxdeg + 1));
                for (int i = 0; i < d; ++i) ++e[rng() % nvars];
                p.add_term(std::move(e), static_cast<int>(rng() % 7) - 3);
            }
            return p;
        };
        Polynomial f = rand_poly(4, 5);
        std::vector<Polynomial> divisors;
        for (int i = 0; i < 2; ++i) {
            Polynomial d = rand_poly(2, 3);
            if (!d.is_zero()) divisors.push_back(d);
        }
        if (divisors.empty()) continue;

        DivisionResult r = divide(f, divisors, ord);
        Polynomial recon = r.remainder;
        for (std::size_t i = 0; i < divisors.size(); ++i) recon += r.quotients[i] * divisors[i];
        EXPECT_EQ(recon, f);

        for (const auto& [m, c] : r.remainder.terms())
            for (const auto& d : divisors)
                EXPECT_FALSE(divides(d.leading_monomial(ord), m));

        if (!f.is_zero()) {
            Exponents fm = f.leading_monomial(ord);
            for (std::size_t i = 0; i < divisors.size(); ++i) {
                if (r.quotients[i].is_zero()) continue;
                Polynomial qd = r.quotients[i] * divisors[i];
                if (!qd.is_zero()) EXPECT_TRUE(ord.compare(qd.leading_monomial(ord), fm) <= 0);
            }
        }
    }
}

TEST(SPolynomial, TwoFanCaseReducesToLinearCombination) {
    // f = (x_i - 1) x_j, g = (x_i - 1)(x_k - 2): S = x_k f - x_j g = 2 f - 0 g
    VarTable vars({"x_i", "x_j", "x_k"});
    Polynomial f = parse_polynomial("x_i*x_j - x_j", vars, false);
    Polynomial g = parse_polynomial("x_i*x_k - 2*x_i - x_k + 2", vars, false);
    MonomialOrder ord = MonomialOrder::grlex(3);
    Polynomial s = s_polynomial(f, g, ord);
    EXPECT_EQ(s, Rational(2) * f);
}

TEST(SPolynomial, SelfIsZeroAndAntisymmetry) {
    VarTable vars;
    Polynomial f = parse("x^2 + y", vars);
    Polynomial g = parse_polynomial("x*y + 1", vars, false);
    MonomialOrder ord = MonomialOrder::grlex(2);
    EXPECT_TRUE(s_polynomial(f, f, ord).is_zero());
    EXPECT_EQ(s_polynomial(f, g, ord), -s_polynomial(g, f, ord));
}

TEST(SPolynomial, CoprimeLeadingMonomialsReduceToZero) {
    VarTable vars({"x", "y"});
    Polynomial f = parse_polynomial("x^2", vars, false);
    Polynomial g = parse_polynomial("y^2", vars, false);
    MonomialOrder ord = MonomialOrder::grlex(2);
    Polynomial s = s_polynomial(f, g, ord);
    EXPECT_TRUE(divide(s, {f, g}, ord).remainder.is_zero());
}

TEST(Parser, GrammarAndRoundTrip) {
    VarTable vars;
    Polynomial p = parse("2*x1^2*x2 - 3/2*x2 + 1", vars);
    EXPECT_EQ(vars.size(), 2);
    EXPECT_EQ(p.term_count(), 3u);
    EXPECT_EQ(p.evaluate(std::vector<int>{1, 2}), Rational(2 * 2) - Rational(3) + 1);

    std::string printed = format_polynomial(p, vars);
    VarTable vars2(vars.names());
    EXPECT_EQ(parse_polynomial(printed, vars2, false), p);
}

TEST(Parser, WhitespaceInsensitiveAndSigns) {
    VarTable a, b;
    EXPECT_EQ(parse_polynomial("  - x +2* y ", a), parse_polynomial("-x+2*y", b));
    EXPECT_THROW(parse_polynomial("x + + y", a), ParseError);
    EXPECT_THROW(parse_polynomial("", a), ParseError);
    EXPECT_THROW(parse_polynomial("x ~ y", a), ParseError);
}

TEST(Parser, RationalCoefficients) {
    VarTable vars;
    Polynomial p = parse("1/3*x - 2/6*x", vars);
    EXPECT_TRUE(p.is_zero());
}

TEST(Parser, UnknownVariableRejectedWhenLocked) {
    VarTable vars;
    vars.intern("x");
    EXPECT_THROW(parse_polynomial("x + y", vars, false), ParseError);
}

TEST(Polynomial, SubstituteAndRemap) {
    VarTable vars;
    Polynomial f = parse("x*y + y^2", vars);
    Polynomial g = parse_polynomial("1 - x", vars, false); // substitute y := 1 - x
    Polynomial h = f.substitute(1, g);
    // x(1-x) + (1-x)^2 = 1 - x
    EXPECT_EQ(h, parse_polynomial("1 - x", vars, false));

    Polynomial merged = f.remap(1, {0, 0}); // identify x and y
    VarTable one;
    one.intern("x");
    EXPECT_EQ(merged, parse_polynomial("2*x^2", one, false));
}

} // namespace
