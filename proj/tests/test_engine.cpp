#include <gtest/gtest.h>

#include <random>

#include "cimp/engine.hpp"
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

TEST(Engines, NaeConstantOneIsNotMemberWithValidWitness) {
    CspInstance p = nae_instance();
    Polynomial one = Polynomial::constant(3, 1);
    Decision d = decide_with_witness(one, p, Engine::Auto);
    EXPECT_FALSE(d.member);
    EXPECT_EQ(d.engine, "buchberger"); // NAE has none of the three polymorphisms
    ASSERT_TRUE(d.witness.has_value());
    EXPECT_TRUE(p.satisfies(*d.witness));
}

TEST(Engines, ConflictingPinsMemberOnEveryEngine) {
    CspInstance p;
    p.domain_size = 2;
    p.variables = {"x"};
    p.add_pin(0, 0);
    p.add_pin(0, 1);
    Polynomial f0 = Polynomial::variable(1, 0) + Polynomial::constant(1, 5);
    EXPECT_TRUE(decide(f0, p, Engine::Oracle).member);
    EXPECT_TRUE(decide(f0, p, Engine::Buchberger).member);
    EXPECT_TRUE(decide(f0, p, Engine::DualDisc).member);
    EXPECT_TRUE(decide(f0, p, Engine::ModP).member);
}

TEST(Engines, AutoDispatchesModPOnAffineInstance) {
    std::mt19937 rng(2);
    CspInstance p = testgen::random_affine_instance(rng, 2, 3, 2);
    Polynomial f0 = testgen::random_polynomial(rng, 3, 2, 3);
    Decision d = decide(f0, p, Engine::Auto);
    // x - y + z closed relations are also closed under the dual-discriminator
    // only in degenerate cases; affine instances normally route to modp
    EXPECT_TRUE(d.engine == "modp" || d.engine == "dualdisc");
    EXPECT_EQ(d.member, decide_oracle(f0, p));
}

TEST(Engines, AutoDispatchesDualDiscOnTwoFanInstance) {
    CspInstance p = parse_csp(
        "domain 3\n"
        "vars x y\n"
        "relation TF arity 2 { (0,0) (0,1) (0,2) (1,0) (2,0) }\n"
        "constraint TF (x, y)\n");
    VarTable vars = p.var_table();
    Polynomial f0 = parse_polynomial("x*y", vars, false);
    Decision d = decide(f0, p, Engine::Auto);
    EXPECT_EQ(d.engine, "dualdisc");
    EXPECT_TRUE(d.member);
}

TEST(Engines, SemilatticeRouteMatchesOracle) {
    // min-closed ternary-domain language that is neither dual-disc nor affine
    Relation r;
    r.arity = 2;
    r.tuples = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}; // total order <=
    CspInstance p;
    p.domain_size = 3;
    p.variables = {"x", "y", "z"};
    p.relations.emplace("LEQ", r);
    p.constraints.push_back({{0, 1}, "LEQ"});
    p.constraints.push_back({{1, 2}, "LEQ"});

    ASSERT_FALSE(detect_special_polymorphism({r}, SpecialPolymorphism::Affine, 3).has_value());
    auto op = detect_special_polymorphism({r}, SpecialPolymorphism::SemilatticeConservative, 3);
    ASSERT_TRUE(op.has_value());

    std::mt19937 rng(5);
    for (int round = 0; round < 15; ++round) {
        Polynomial f0 = testgen::random_polynomial(rng, 3, 2, 3);
        EXPECT_EQ(decide_semilattice(f0, p, *op), decide_oracle(f0, p));
    }
}

TEST(Engines, SemilatticeEmbeddingBijectsSolutions) {
    Relation r;
    r.arity = 2;
    r.tuples = {{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1}, {2, 2}}; // >= under natural order
    CspInstance p;
    p.domain_size = 3;
    p.variables = {"x", "y"};
    p.relations.emplace("GEQ", r);
    p.constraints.push_back({{0, 1}, "GEQ"});
    auto op = detect_special_polymorphism({r}, SpecialPolymorphism::SemilatticeConservative, 3);
    ASSERT_TRUE(op.has_value());
    VarTable vars = p.var_table();
    Polynomial f0 = parse_polynomial("x - y", vars, false);
    SemilatticeEmbedding emb = semilattice_embed(f0, p, *op);
    EXPECT_EQ(enumerate_solutions(emb.instance).size(), enumerate_solutions(p).size());
    // every embedded solution decodes to a matching polynomial value
    for (const auto& s : enumerate_solutions(emb.instance)) {
        // bits are staircases by construction; count ones per block
        std::vector<int> decoded(2);
        for (int v = 0; v < 2; ++v) {
            int ones = s[static_cast<std::size_t>(2 * v)] + s[static_cast<std::size_t>(2 * v + 1)];
            decoded[static_cast<std::size_t>(v)] = emb.order[static_cast<std::size_t>(ones)];
        }
        EXPECT_TRUE(p.satisfies(decoded));
        EXPECT_EQ(f0.evaluate(decoded), emb.f0.evaluate(s));
    }
}

TEST(Engines, ModPEngineRefusesNonAffineRelation) {
    CspInstance p = parse_csp(
        "domain 2\n"
        "vars x y\n"
        "relation LEQ arity 2 { (0,0) (0,1) (1,1) }\n"
        "constraint LEQ (x, y)\n");
    VarTable vars = p.var_table();
    EXPECT_THROW(decide_modp_instance(parse_polynomial("x", vars, false), p),
                 EngineInapplicable);
    CspInstance q;
    q.domain_size = 4;
    q.variables = {"x"};
    EXPECT_THROW(decide_modp_instance(Polynomial::variable(1, 0), q), EngineInapplicable);
}

TEST(Engines, WitnessSearchUsesTheSameEngine) {
    std::mt19937 rng(7);
    CspInstance p = testgen::random_affine_instance(rng, 3, 3, 2);
    Polynomial f0 = testgen::random_polynomial(rng, 3, 2, 3);
    Decision d = decide_with_witness(f0, p, Engine::ModP);
    if (!d.member) {
        ASSERT_TRUE(d.witness.has_value());
        EXPECT_TRUE(p.satisfies(*d.witness));
        EXPECT_NE(f0.evaluate(*d.witness), Rational(0));
    }
}

TEST(Engines, AllApplicableEnginesAgreeOnSharedInstances) {
    // instances whose single relation is both affine and dual-disc closed:
    // graphs of bijections (permutation relations) qualify
    std::mt19937 rng(11);
    for (int round = 0; round < 20; ++round) {
        int p_dom = 2 + testgen::uniform(rng, 0, 1);
        CspInstance p;
        p.domain_size = p_dom;
        p.variables = testgen::var_names(3);
        // x - y = c is a permutation graph and a linear equation
        int c = testgen::uniform(rng, 0, p_dom - 1);
        Relation shift;
        shift.arity = 2;
        for (int a = 0; a < p_dom; ++a) shift.tuples.insert({a, (a + c) % p_dom});
        p.relations.emplace("SH", shift);
        p.constraints.push_back({{0, 1}, "SH"});
        p.constraints.push_back({{1, 2}, "SH"});
        Polynomial f0 = testgen::random_polynomial(rng, 3, 2, 3);
        bool oracle = decide_oracle(f0, p);
        EXPECT_EQ(decide(f0, p, Engine::Buchberger).member, oracle);
        EXPECT_EQ(decide(f0, p, Engine::DualDisc).member, oracle);
        EXPECT_EQ(decide(f0, p, Engine::ModP).member, oracle);
    }
}

TEST(Engines, BuchbergerTruncationSoundOnMixedInstances) {
    std::mt19937 rng(13);
    for (int round = 0; round < 25; ++round) {
        int t = 2 + testgen::uniform(rng, 0, 1);
        int n = testgen::uniform(rng, 2, 3);
        CspInstance p = testgen::random_mixed_instance(rng, t, n, testgen::uniform(rng, 1, 2));
        Polynomial f0 = testgen::random_polynomial(rng, n, 2, 3);
        bool oracle = decide_oracle(f0, p);
        EXPECT_EQ(decide_buchberger(f0, p), oracle);
        // truncated at deg f0 must at least stay sound; at desk scale it
        // has always been complete as well
        EXPECT_EQ(decide_buchberger(f0, p, std::max(f0.degree(), 1)), oracle);
    }
}

} // namespace
