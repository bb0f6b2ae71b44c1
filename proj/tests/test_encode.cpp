#include <gtest/gtest.h>

#include "cimp/encode.hpp"
#include "cimp/testgen.hpp"

using namespace cimp;

namespace {

TEST(Indicator, BooleanAndTernary) {
    VarTable vars({"x"});
    EXPECT_EQ(indicator_polynomial(1, 2, 0, 1), parse_polynomial("x", vars, false));
    EXPECT_EQ(indicator_polynomial(0, 2, 0, 1), parse_polynomial("1 - x", vars, false));
    EXPECT_EQ(indicator_polynomial(1, 3, 0, 1), parse_polynomial("-x^2 + 2*x", vars, false));
    EXPECT_THROW(indicator_polynomial(3, 3, 0, 1), std::invalid_argument);
}

TEST(Indicator, KroneckerValuesAndPartitionOfUnity) {
    for (int t : {2, 3, 4}) {
        Polynomial sum(1);
        for (int v = 0; v < t; ++v) {
            Polynomial ind = indicator_polynomial(v, t, 0, 1);
            EXPECT_LE(ind.degree(), t - 1);
            for (int a = 0; a < t; ++a)
                EXPECT_EQ(ind.evaluate(std::vector<int>{a}), Rational(a == v ? 1 : 0));
            sum += ind;
        }
        EXPECT_EQ(sum, Polynomial::constant(1, 1));
    }
}

TEST(DomainPolynomial, ExpansionsAndRoots) {
    VarTable vars({"x"});
    EXPECT_EQ(domain_polynomial(0, 2, 1), parse_polynomial("x^2 - x", vars, false));
    EXPECT_EQ(domain_polynomial(0, 3, 1), parse_polynomial("x^3 - 3*x^2 + 2*x", vars, false));
    Polynomial d4 = domain_polynomial(0, 4, 1);
    for (int a = -1; a <= 4; ++a)
        EXPECT_EQ(d4.evaluate(std::vector<int>{a}) == 0, a >= 0 && a <= 3);
}

TEST(ConstraintGenerators, EmptyRelationGivesUnit) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y"};
    Relation empty;
    empty.arity = 2;
    p.relations.emplace("E", empty);
    p.constraints.push_back({{0, 1}, "E"});
    Polynomial prod = constraint_product_polynomial(p, p.constraints[0]);
    EXPECT_EQ(prod, Polynomial::constant(2, 1));
}

TEST(ConstraintGenerators, SingletonRelationVanishesExactlyThere) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y"};
    p.relations.emplace("R", Relation::singleton({0, 1}));
    p.constraints.push_back({{0, 1}, "R"});
    Polynomial prod = constraint_product_polynomial(p, p.constraints[0]);
    VarTable vars({"x", "y"});
    EXPECT_EQ(prod, parse_polynomial("1 - y + x*y", vars, false));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            EXPECT_EQ(prod.evaluate(std::vector<int>{a, b}) == 0, a == 0 && b == 1);
}

TEST(ConstraintGenerators, FullRelationVanishesEverywhere) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y"};
    p.relations.emplace("F", Relation::full(2, 2));
    p.constraints.push_back({{0, 1}, "F"});
    Polynomial prod = constraint_product_polynomial(p, p.constraints[0]);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            EXPECT_EQ(prod.evaluate(std::vector<int>{a, b}), Rational(0));
    auto gens = constraint_generators(p, p.constraints[0]);
    EXPECT_EQ(gens.size(), 3u); // product + one domain polynomial per scope variable
}

TEST(InstanceIdeal, UnconstrainedBooleanPair) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y"};
    auto gens = instance_ideal(p);
    VarTable vars({"x", "y"});
    ASSERT_EQ(gens.size(), 2u);
    EXPECT_EQ(gens[0], parse_polynomial("x^2 - x", vars, false));
    EXPECT_EQ(gens[1], parse_polynomial("y^2 - y", vars, false));
}

TEST(InstanceIdeal, PinContributesIndicatorComplement) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x"};
    p.add_pin(0, 1);
    auto gens = instance_ideal(p);
    VarTable vars({"x"});
    ASSERT_EQ(gens.size(), 2u);
    EXPECT_EQ(gens[1], parse_polynomial("1 - x", vars, false));
}

TEST(InstanceIdeal, VarietyEqualsSolutionsOnRandomInstances) {
    std::mt19937 rng(31);
    for (int round = 0; round < 50; ++round) {
        int t = 2 + testgen::uniform(rng, 0, 1);
        int n = testgen::uniform(rng, 1, 3);
        CspInstance p = testgen::random_mixed_instance(rng, t, n, testgen::uniform(rng, 1, 3));
        auto gens = instance_ideal(p);
        auto sols = enumerate_solutions(p);
        std::set<std::vector<int>> sol_set(sols.begin(), sols.end());
        // exhaustive scan of D^X: point in variety iff point is a solution
        std::vector<int> a(static_cast<std::size_t>(n), 0);
        while (true) {
            bool vanishes = true;
            for (const auto& g : gens)
                if (g.evaluate(a) != 0) {
                    vanishes = false;
                    break;
                }
            EXPECT_EQ(vanishes, sol_set.count(a) > 0);
            int i = n - 1;
            while (i >= 0 && a[static_cast<std::size_t>(i)] == t - 1)
                a[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
            ++a[static_cast<std::size_t>(i)];
        }
    }
}

TEST(Interpolation, IdentityAndConstant) {
    Polynomial id = interpolate_map({{0}, {1}}, {0, 1});
    VarTable vars({"x"});
    EXPECT_EQ(id, parse_polynomial("x", vars, false));
    Polynomial c = interpolate_map({{5}}, {7});
    EXPECT_EQ(c, Polynomial::constant(1, 7));
}

TEST(Interpolation, StaircaseOrderExample) {
    // (0,0) -> 0, (0,1) -> 1, (1,1) -> 2 has the least-degree solution x + y
    Polynomial f = interpolate_map({{0, 0}, {0, 1}, {1, 1}}, {0, 1, 2});
    VarTable vars({"x", "y"});
    EXPECT_EQ(f, parse_polynomial("x + y", vars, false));
}

TEST(Interpolation, DuplicatePointsRejected) {
    EXPECT_THROW(interpolate_map({{0}, {0}}, {1, 2}), std::invalid_argument);
}

TEST(Interpolation, RandomMapsFitWithinDegreeBounds) {
    std::mt19937 rng(37);
    for (int round = 0; round < 40; ++round) {
        int ell = testgen::uniform(rng, 1, 3);
        int t = testgen::uniform(rng, 2, 3);
        std::set<std::vector<int>> pts;
        int want = testgen::uniform(rng, 1, 5);
        for (int i = 0; i < want; ++i) {
            std::vector<int> p(static_cast<std::size_t>(ell));
            for (auto& v : p) v = testgen::uniform(rng, 0, t - 1);
            pts.insert(std::move(p));
        }
        std::vector<std::vector<int>> points(pts.begin(), pts.end());
        std::vector<Rational> values;
        for (std::size_t i = 0; i < points.size(); ++i)
            values.push_back(testgen::uniform(rng, -4, 4));
        Polynomial f = interpolate_map(points, values);
        for (std::size_t i = 0; i < points.size(); ++i)
            EXPECT_EQ(f.evaluate(points[i]), values[i]);
        for (const auto& [e, c] : f.terms())
            for (int v : e) EXPECT_LE(v, t - 1);
    }
}

} // namespace
