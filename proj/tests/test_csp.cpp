#include <gtest/gtest.h>

#include "cimp/csp.hpp"
#include "cimp/dual_disc.hpp"
#include "cimp/testgen.hpp"

using namespace cimp;

namespace {

CspInstance nae_instance() {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y", "z"};
    Relation nae;
    nae.arity = 3;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                if (!(a == b && b == c)) nae.tuples.insert({a, b, c});
    p.relations.emplace("NAE", std::move(nae));
    p.constraints.push_back({{0, 1, 2}, "NAE"});
    return p;
}

TEST(Parse, RoundTripAndPins) {
    std::string text =
        "domain 3\n"
        "vars x y z\n"
        "relation R arity 2 { (0,1) (1,2) (2,2) }\n"
        "constraint R (x, y)\n"
        "constraint R (y, z)\n"
        "pin z 2\n";
    CspInstance p = parse_csp(text);
    EXPECT_EQ(p.domain_size, 3);
    EXPECT_EQ(p.var_count(), 3);
    EXPECT_EQ(p.constraints.size(), 3u);
    EXPECT_TRUE(p.pin_value(p.constraints[2]).has_value());
    EXPECT_EQ(*p.pin_value(p.constraints[2]), 2);

    CspInstance again = parse_csp(format_csp(p));
    EXPECT_EQ(enumerate_solutions(p), enumerate_solutions(again));
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_csp("vars x\n"), ParseError);
    EXPECT_THROW(parse_csp("domain 2\nvars x\nconstraint R (x)\n"), ParseError);
    EXPECT_THROW(parse_csp("domain 2\nvars x\nrelation R arity 1 { (3) }\n"), ParseError);
    EXPECT_THROW(parse_csp("domain 2\nvars x x\n"), ParseError);
}

TEST(Enumerate, SingleConstraint) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y"};
    p.relations.emplace("R", Relation::singleton({0, 1}));
    p.constraints.push_back({{0, 1}, "R"});
    auto sols = enumerate_solutions(p);
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_EQ(sols[0], (std::vector<int>{0, 1}));
}

TEST(Enumerate, NaeHasSixSolutions) {
    EXPECT_EQ(enumerate_solutions(nae_instance()).size(), 6u);
}

TEST(Enumerate, ConflictingPinsEmpty) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x"};
    p.add_pin(0, 0);
    p.add_pin(0, 1);
    EXPECT_TRUE(enumerate_solutions(p).empty());
}

TEST(Enumerate, CapRefusalNamesTheCap) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"a", "b", "c", "d", "e"};
    try {
        enumerate_solutions(p, 16);
        FAIL() << "expected CapExceeded";
    } catch (const CapExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("16"), std::string::npos);
    }
}

TEST(Polymorphism, FullRelationAlwaysClosed) {
    Relation full = Relation::full(2, 3);
    EXPECT_TRUE(check_polymorphism(dual_discriminator(3), full));
    EXPECT_TRUE(check_polymorphism(affine_operation(3), full));
}

TEST(Polymorphism, DualDiscriminatorOnOrder) {
    Relation leq;
    leq.arity = 2;
    leq.tuples = {{0, 0}, {0, 1}, {1, 1}};
    EXPECT_TRUE(check_polymorphism(dual_discriminator(2), leq));
}

TEST(Polymorphism, AffineOnParityGraph) {
    Relation xor1;
    xor1.arity = 2;
    xor1.tuples = {{0, 1}, {1, 0}};
    EXPECT_TRUE(check_polymorphism(affine_operation(2), xor1));
}

TEST(Polymorphism, IdempotentOpPreservesConstantTuples) {
    for (int t : {2, 3}) {
        OperationTable ops[] = {dual_discriminator(t), affine_operation(t),
                                order_min_operation(MonomialOrder::natural(t))};
        for (const auto& op : ops) {
            ASSERT_TRUE(op.is_idempotent());
            for (int a = 0; a < t; ++a) {
                Relation diag = Relation::singleton({a, a});
                EXPECT_TRUE(check_polymorphism(op, diag));
            }
        }
    }
}

TEST(Detect, SemilatticeOnBooleanOrder) {
    Relation leq;
    leq.arity = 2;
    leq.tuples = {{0, 0}, {0, 1}, {1, 1}};
    auto op = detect_special_polymorphism({leq}, SpecialPolymorphism::SemilatticeConservative, 2);
    ASSERT_TRUE(op.has_value());
    EXPECT_TRUE(check_polymorphism(*op, leq));
}

TEST(Detect, AffineOnXorGraph) {
    Relation xor1;
    xor1.arity = 2;
    xor1.tuples = {{0, 1}, {1, 0}};
    auto op = detect_special_polymorphism({xor1}, SpecialPolymorphism::Affine, 2);
    ASSERT_TRUE(op.has_value());
}

TEST(Detect, NaeHasNoneOfTheThree) {
    Relation nae;
    nae.arity = 3;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                if (!(a == b && b == c)) nae.tuples.insert({a, b, c});
    EXPECT_FALSE(
        detect_special_polymorphism({nae}, SpecialPolymorphism::DualDiscriminator, 2).has_value());
    EXPECT_FALSE(detect_special_polymorphism({nae}, SpecialPolymorphism::Affine, 2).has_value());
    EXPECT_FALSE(
        detect_special_polymorphism({nae}, SpecialPolymorphism::SemilatticeConservative, 2)
            .has_value());
}

TEST(Detect, SemilatticeSearchCapRefusal) {
    EXPECT_THROW(detect_special_polymorphism({}, SpecialPolymorphism::SemilatticeConservative, 6),
                 CapExceeded);
}

TEST(ArcConsistency, AlreadyConsistentUnchanged) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x", "y"};
    Relation full = Relation::full(2, 2);
    p.relations.emplace("F", full);
    p.constraints.push_back({{0, 1}, "F"});
    auto out = arc_consistency(p);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(out->constraints.size(), p.constraints.size());
    EXPECT_EQ(format_csp(*out), format_csp(p));
}

TEST(ArcConsistency, ChainWithPinReducesDomains) {
    std::string text =
        "domain 2\n"
        "vars x y z\n"
        "relation LEQ arity 2 { (0,0) (0,1) (1,1) }\n"
        "constraint LEQ (x, y)\n"
        "constraint LEQ (y, z)\n"
        "pin z 0\n";
    CspInstance p = parse_csp(text);
    auto out = arc_consistency(p);
    ASSERT_TRUE(out.has_value());
    // all three variables forced to 0; compare against brute force projections
    auto sols = enumerate_solutions(*out);
    EXPECT_EQ(sols, enumerate_solutions(p));
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_EQ(sols[0], (std::vector<int>{0, 0, 0}));
    BinaryNetwork net = build_network(*out);
    EXPECT_EQ(net.domains[0], (std::set<int>{0}));
    EXPECT_EQ(net.domains[1], (std::set<int>{0}));
}

TEST(ArcConsistency, ContradictionSignalsUnsat) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x"};
    p.add_pin(0, 0);
    p.add_pin(0, 1);
    EXPECT_FALSE(arc_consistency(p).has_value());
}

TEST(ArcConsistency, PreservesSolutionsOnRandomInstances) {
    std::mt19937 rng(17);
    for (int round = 0; round < 60; ++round) {
        int t = 2 + testgen::uniform(rng, 0, 1);
        CspInstance p = testgen::random_mixed_instance(rng, t, testgen::uniform(rng, 2, 4),
                                                       testgen::uniform(rng, 1, 3));
        auto out = arc_consistency(p);
        auto sols = enumerate_solutions(p);
        if (!out) {
            EXPECT_TRUE(sols.empty());
            continue;
        }
        EXPECT_EQ(enumerate_solutions(*out), sols);
    }
}

TEST(ArcConsistency, TripleConditionHoldsAtFixpoint) {
    std::mt19937 rng(23);
    for (int round = 0; round < 40; ++round) {
        CspInstance p = testgen::random_dual_disc_instance(rng, 3, 4, 4);
        auto out = arc_consistency(p);
        if (!out) continue;
        BinaryNetwork net = build_network(*out);
        const int n = static_cast<int>(net.domains.size());
        for (const auto& [key, rel] : net.pair_rel) {
            auto [i, j] = key;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                for (const auto& [a, b] : rel) {
                    bool extends = false;
                    for (int c : net.domains[static_cast<std::size_t>(k)])
                        if (net.pair_allows(i, k, a, c) && net.pair_allows(k, j, c, b)) {
                            extends = true;
                            break;
                        }
                    EXPECT_TRUE(extends);
                }
            }
        }
    }
}

TEST(Polymorphism, DualDiscClosedRelationsClassify) {
    std::mt19937 rng(29);
    for (int round = 0; round < 40; ++round) {
        int t = 2 + testgen::uniform(rng, 0, 1);
        Relation r = testgen::random_dd_closed_relation(rng, t, 2 + testgen::uniform(rng, 0, 1),
                                                        testgen::uniform(rng, 1, 4));
        ASSERT_TRUE(check_polymorphism(dual_discriminator(t), r));
        // every pairwise projection of a dual-disc closed relation classifies
        for (int i = 0; i < r.arity; ++i)
            for (int j = i + 1; j < r.arity; ++j) {
                Relation proj;
                proj.arity = 2;
                for (const auto& tup : r.tuples)
                    proj.tuples.insert({tup[static_cast<std::size_t>(i)],
                                        tup[static_cast<std::size_t>(j)]});
                BinaryClassification cls = classify_binary(proj, t);
                EXPECT_NE(cls.kind, BinaryClassification::Kind::NotDualDisc);
            }
    }
}

} // namespace
