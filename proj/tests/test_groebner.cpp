#include <gtest/gtest.h>

#include <random>

#include "cimp/csp.hpp"
#include "cimp/encode.hpp"
#include "cimp/groebner.hpp"

using namespace cimp;

namespace {

TEST(Buchberger, WholeRingDetected) {
    VarTable vars({"x", "y"});
    Polynomial f1 = parse_polynomial("x^2", vars, false);
    Polynomial f2 = parse_polynomial("x*y - 1", vars, false);
    GroebnerBasis gb = buchberger({f1, f2}, MonomialOrder::grlex(2));
    ASSERT_TRUE(gb.is_trivial_unit());
    // cross-check: the variety is empty (x^2 = 0 forces x = 0, then xy = 1 fails)
}

TEST(Buchberger, SingleLinearGeneratorIsItsOwnBasis) {
    VarTable vars({"x"});
    Polynomial f = parse_polynomial("x - 1", vars, false);
    GroebnerBasis gb = buchberger({f}, MonomialOrder::grlex(1));
    ASSERT_EQ(gb.generators.size(), 1u);
    EXPECT_EQ(gb.generators[0], f);
}

TEST(Buchberger, RelativelyPrimeLeadingMonomialsAlreadyBasis) {
    VarTable vars({"x", "y"});
    Polynomial f1 = parse_polynomial("x^2 - x", vars, false);
    Polynomial f2 = parse_polynomial("y^2 - y", vars, false);
    GroebnerBasis gb = buchberger({f1, f2}, MonomialOrder::grlex(2));
    ASSERT_EQ(gb.generators.size(), 2u);
    EXPECT_TRUE(buchberger_criterion_holds(gb));
    EXPECT_TRUE(is_member(f1, gb));
    EXPECT_TRUE(is_member(f2, gb));
}

TEST(Buchberger, EmptyOrZeroGeneratorsRejected) {
    EXPECT_THROW(buchberger({}, MonomialOrder::grlex(1)), std::invalid_argument);
    EXPECT_THROW(buchberger({Polynomial::zero(1)}, MonomialOrder::grlex(1)),
                 std::invalid_argument);
}

TEST(Buchberger, ReducedBasisIsMinimalAndMonic) {
    VarTable vars({"x", "y"});
    Polynomial f1 = parse_polynomial("x^2 + y^2 - 1", vars, false);
    Polynomial f2 = parse_polynomial("x*y - 1", vars, false);
    MonomialOrder ord = MonomialOrder::grlex(2);
    GroebnerBasis gb = buchberger({f1, f2}, ord);
    EXPECT_TRUE(buchberger_criterion_holds(gb));
    for (const auto& g : gb.generators) {
        EXPECT_EQ(g.leading(ord).first, Rational(1));
        for (const auto& h : gb.generators) {
            if (&g == &h) continue;
            for (const auto& [m, c] : g.terms())
                EXPECT_FALSE(divides(h.leading_monomial(ord), m));
        }
    }
}

TEST(NormalForm, BasicsAndWholeRing) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    Polynomial x = parse_polynomial("x", vars, false);
    GroebnerBasis gx{{x}, ord, std::nullopt};
    EXPECT_TRUE(normal_form(x, gx).is_zero());

    GroebnerBasis unit{{Polynomial::constant(2, 1)}, ord, std::nullopt};
    EXPECT_TRUE(normal_form(parse_polynomial("x^3*y - 7", vars, false), unit).is_zero());
}

TEST(NormalForm, BooleanReduction) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    Polynomial f1 = parse_polynomial("x^2 - x", vars, false);
    Polynomial f2 = parse_polynomial("y^2 - y", vars, false);
    GroebnerBasis gb = buchberger({f1, f2}, ord);
    Polynomial f = parse_polynomial("x^2*y", vars, false);
    Polynomial nf = normal_form(f, gb);
    EXPECT_EQ(nf, parse_polynomial("x*y", vars, false));
    // both agree as functions on {0,1}^2
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            EXPECT_EQ(f.evaluate(std::vector<int>{a, b}), nf.evaluate(std::vector<int>{a, b}));
}

TEST(NormalForm, IndependentOfGeneratorListingAndIdempotent) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    GroebnerBasis gb = buchberger({parse_polynomial("x^2 - y", vars, false),
                                   parse_polynomial("x^3 - x", vars, false)},
                                  ord);
    GroebnerBasis reversed = gb;
    std::reverse(reversed.generators.begin(), reversed.generators.end());
    std::mt19937 rng(3);
    for (int round = 0; round < 40; ++round) {
        Polynomial f(2);
        for (int t = 0; t < 4; ++t) {
            Exponents e{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)};
            f.add_term(std::move(e), static_cast<int>(rng() % 5) - 2);
        }
        Polynomial n1 = normal_form(f, gb);
        EXPECT_EQ(n1, normal_form(f, reversed));
        EXPECT_EQ(n1, normal_form(n1, gb));
    }
}

TEST(Membership, PinnedContradictionCompletesToUnit) {
    VarTable vars({"x"});
    Polynomial f1 = parse_polynomial("x - 1", vars, false);
    Polynomial f2 = parse_polynomial("x", vars, false);
    GroebnerBasis gb = buchberger({f1, f2}, MonomialOrder::grlex(1));
    EXPECT_TRUE(gb.is_trivial_unit());
    EXPECT_TRUE(is_member(Polynomial::constant(1, 1), gb));
}

TEST(Membership, NonMemberAndTruncationRefusal) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    GroebnerBasis gb = buchberger({parse_polynomial("y", vars, false)}, ord);
    EXPECT_FALSE(is_member(parse_polynomial("x", vars, false), gb));

    GroebnerBasis trunc = gb;
    trunc.truncation_degree = 1;
    EXPECT_THROW((void)is_member(parse_polynomial("x^2", vars, false), trunc), CapExceeded);
    try {
        (void)is_member(parse_polynomial("x^2", vars, false), trunc);
    } catch (const CapExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
    }
}

TEST(Certificate, SingleGeneratorAndQuotients) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    Polynomial g = parse_polynomial("x^2 - x", vars, false);
    GroebnerBasis gb{{g}, ord, std::nullopt};
    auto cert = certificate(g, gb);
    ASSERT_TRUE(cert.has_value());
    ASSERT_EQ(cert->size(), 1u);
    EXPECT_EQ((*cert)[0].second, Polynomial::constant(2, 1));

    // f = y*(x^2) - y*(xy - 1) against the raw pair {x^2, xy-1}
    Polynomial f1 = parse_polynomial("x^2", vars, false);
    Polynomial f2 = parse_polynomial("x*y - 1", vars, false);
    GroebnerBasis raw{{f1, f2}, ord, std::nullopt};
    Polynomial f = parse_polynomial("y", vars, false) * f1 -
                   parse_polynomial("y", vars, false) * f2;
    auto c2 = certificate(f, raw);
    ASSERT_TRUE(c2.has_value());
    EXPECT_EQ((*c2)[0].second, parse_polynomial("y", vars, false));
    EXPECT_EQ((*c2)[1].second, parse_polynomial("-y", vars, false));
}

TEST(Certificate, AbsentForNonMembersReconstructsForMembers) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    GroebnerBasis gb = buchberger({parse_polynomial("x^2 - x", vars, false),
                                   parse_polynomial("x*y - y", vars, false)},
                                  ord);
    EXPECT_FALSE(certificate(parse_polynomial("x + y", vars, false), gb).has_value());

    std::mt19937 rng(11);
    for (int round = 0; round < 30; ++round) {
        // random member: random combination of the generators
        Polynomial member(2);
        for (const auto& g : gb.generators) {
            Polynomial cof(2);
            for (int t = 0; t < 2; ++t) {
                Exponents e{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
                cof.add_term(std::move(e), static_cast<int>(rng() % 5) - 2);
            }
            member += cof * g;
        }
        auto cert = certificate(member, gb);
        ASSERT_TRUE(cert.has_value());
        Polynomial recon(2);
        for (const auto& [gen, cof] : *cert) recon += cof * gen;
        EXPECT_EQ(recon, member);
    }
}

TEST(Truncation, BoundedRunDropsHighDegreePairsButStaysSound) {
    VarTable vars({"x", "y"});
    MonomialOrder ord = MonomialOrder::grlex(2);
    std::vector<Polynomial> gens = {parse_polynomial("x^2 - x", vars, false),
                                    parse_polynomial("y^2 - y", vars, false),
                                    parse_polynomial("x*y", vars, false)};
    GroebnerBasis full = buchberger(gens, ord);
    GroebnerBasis trunc = buchberger(gens, ord, 2);
    EXPECT_TRUE(buchberger_criterion_holds(trunc));
    for (const auto& g : trunc.generators) EXPECT_LE(g.degree(), 2);
    // truncation of the full reduced basis at degree 2 equals the bounded run
    std::vector<Polynomial> expect;
    for (const auto& g : full.generators)
        if (g.degree() <= 2) expect.push_back(g);
    EXPECT_EQ(trunc.generators.size(), expect.size());
    for (const auto& g : expect)
        EXPECT_NE(std::find(trunc.generators.begin(), trunc.generators.end(), g),
                  trunc.generators.end());
}

TEST(Truncation, GeneratorsAboveBoundExcluded) {
    VarTable vars({"x", "y", "z"});
    MonomialOrder ord = MonomialOrder::grlex(3);
    std::vector<Polynomial> gens = {parse_polynomial("x*y*z - 1", vars, false),
                                    parse_polynomial("x - y", vars, false)};
    GroebnerBasis gb = buchberger(gens, ord, 1);
    for (const auto& g : gb.generators) EXPECT_LE(g.degree(), 1);
}

TEST(Buchberger, RandomIdealsSatisfyCriterionAndContainGenerators) {
    std::mt19937 rng(5);
    for (int round = 0; round < 25; ++round) {
        int nvars = 2 + static_cast<int>(rng() % 2);
        MonomialOrder ord = MonomialOrder::grlex(nvars);
        std::vector<Polynomial> gens;
        for (int i = 0; i < 2; ++i) {
            Polynomial g(nvars);
            for (int t = 0; t < 3; ++t) {
                Exponents e(static_cast<std::size_t>(nvars), 0);
                int d = static_cast<int>(rng() % 3);
                for (int j = 0; j < d; ++j) ++e[rng() % nvars];
                g.add_term(std::move(e), static_cast<int>(rng() % 5) - 2);
            }
            if (!g.is_zero()) gens.push_back(g);
        }
        if (gens.empty()) continue;
        GroebnerBasis gb = buchberger(gens, ord);
        EXPECT_TRUE(buchberger_criterion_holds(gb));
        for (const auto& g : gens) EXPECT_TRUE(normal_form(g, gb).is_zero());
    }
}

} // namespace
