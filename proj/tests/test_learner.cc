/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include "oracles.hh"

#include <cqlearn/fitting.hh>
#include <cqlearn/generators.hh>
#include <cqlearn/hom.hh>
#include <cqlearn/learner.hh>
#include <cqlearn/product.hh>
#include <cqlearn/syntax.hh>

#include <doctest.h>

using namespace cqlearn;

namespace
{
    auto example(const char * facts, Tuple tuple) -> Example
    {
        return Example{parse_instance(facts), std::move(tuple)};
    }

    auto equivalent(const Query & a, const Query & b) -> bool
    {
        auto contained = [] (const Query & x, const Query & y) {
            auto xs = std::holds_alternative<CQ>(x) ? std::vector<CQ>{std::get<CQ>(x)} : std::get<UCQ>(x).disjuncts();
            for (auto & d : xs)
                if (oracle::evaluate(y, canonical_instance(d)) != Label::positive)
                    return false;
            return true;
        };
        return contained(a, b) && contained(b, a);
    }

    /// Labels by the target but rejects one chosen example.
    class LyingOracle : public MembershipOracle
    {
        private:
            Query _target;
            Example _liar;

        protected:
            auto label(const Example & e) -> Label override
            {
                return e == _liar ? Label::negative : oracle::evaluate(_target, e);
            }

        public:
            LyingOracle(Query target, Example liar) : _target(std::move(target)), _liar(std::move(liar)) {}
    };
}

TEST_SUITE("learner")
{
    TEST_CASE("greedy minimisation by hand")
    {
        TargetOracle o{parse_cq("q(x) :- R(x,y), P(y).")};
        auto critical = minimize_critical(example("R(a,b). R(b,c). P(b). P(c).", {"a"}), o);
        CHECK(critical == example("R(a,b). P(b).", {"a"}));
        CHECK(o.call_count() <= 5);
    }

    TEST_CASE("critical inputs come back unchanged")
    {
        auto q = parse_cq("q(x) :- R(x,y), P(y).");
        TargetOracle o{q};
        auto e = canonical_instance(q);
        CHECK(minimize_critical(e, o) == e);
        // one check of the input, then one call per deletion that leaves x in place
        std::size_t well_formed_deletions = 0;
        for (std::size_t i = 0 ; i < e.instance.fact_count() ; ++i)
            well_formed_deletions += Example{e.instance.without_fact(i), e.distinguished}.well_formed();
        CHECK(well_formed_deletions == 1);
        CHECK(o.call_count() == 1 + well_formed_deletions);
    }

    TEST_CASE("negative inputs are rejected")
    {
        TargetOracle o{parse_cq("q(x) :- P(x).")};
        CHECK_THROWS_AS(minimize_critical(example("R(a,b).", {"a"}), o), LearnerError);
    }

    TEST_CASE("minimised examples are critical and no larger than the target")
    {
        RandomProfile profile;
        profile.atoms = 5;
        profile.facts = 8;
        for (std::uint64_t seed = 0 ; seed < 500 ; ++seed) {
            Rng rng{seed};
            auto q = random_cq(rng, profile);
            auto e = random_positive(rng, q, profile);
            TargetOracle o{q};
            auto c = minimize_critical(e, o);
            CHECK(c.instance.fact_count() <= q.atom_count());
            CHECK(oracle::critical(c, q));
            CHECK(o.call_count() <= e.instance.fact_count() + 1);
            CHECK(oracle::homomorphism_exists(c, e));
        }
    }

    TEST_CASE("learning a CQ by hand")
    {
        auto q = parse_cq("q(x) :- R(x,y), P(y).");
        auto e = parse_example_set(
                "instance A { R(a,b). P(b). P(a). }\n"
                "instance C { R(c,d). R(d,c). P(d). }\n"
                "instance U { R(u,v). }\n"
                "+ A (a)\n+ C (c)\n- U (u)\n");
        TargetOracle o{q};
        auto out = learn_cq(e, o);
        CHECK(out.fits_input);
        CHECK(verify_fit(out.hypothesis, e));
        CHECK(atom_count(out.hypothesis) == 2);
        CHECK(equivalent(out.hypothesis, q));
        CHECK(out.trace.size() == 2);
        CHECK(out.oracle_calls == o.call_count());
        CHECK(out.skipped_positives == 0);
    }

    TEST_CASE("a canonical positive is learned exactly")
    {
        auto learn_from_canonical = [] (const CQ & q) {
            LabeledExampleSet e;
            e.add(canonical_instance(q), Label::positive);
            TargetOracle o{q};
            return std::get<CQ>(learn_cq(e, o).hypothesis);
        };
        auto core = parse_cq("q(x) :- R(x,y), R(y,z), P(z), R(x,w), Q(w).");
        CHECK(find_isomorphism(canonical_instance(learn_from_canonical(core)), canonical_instance(core)));

        // R(x,w) folds onto R(x,y), so only the core is learned
        auto redundant = parse_cq("q(x) :- R(x,y), R(y,z), P(z), R(x,w).");
        CHECK(find_isomorphism(canonical_instance(learn_from_canonical(redundant)),
                    canonical_instance(parse_cq("q(x) :- R(x,y), R(y,z), P(z)."))));
    }

    TEST_CASE("learning from the reduction examples")
    {
        auto reduction = gen_cnf_reduction(CnfFormula{2, {{1}, {2}, {-1, 2}}});
        TargetOracle o{assignment_to_path_cq({true, true})};
        auto out = learn_cq(reduction.examples, o);
        CHECK(out.fits_input);
        CHECK(verify_fit(out.hypothesis, reduction.examples));
        CHECK(atom_count(out.hypothesis) <= 6);
    }

    TEST_CASE("learned CQs fit planted sets and stay small")
    {
        RandomProfile profile;
        profile.atoms = 6;
        profile.examples = 8;
        profile.facts = 12;
        for (std::uint64_t seed = 0 ; seed < 200 ; ++seed) {
            Rng rng{seed};
            auto planted = random_planted_set(rng, profile);
            TargetOracle o{planted.target};
            std::vector<Example> criticals;
            LearnerOptions options;
            options.on_critical = [&] (const Example & c) { criticals.push_back(c); };
            auto out = learn_cq(planted.examples, o, options);
            CHECK(out.fits_input);
            CHECK(verify_fit(out.hypothesis, planted.examples));
            CHECK(atom_count(out.hypothesis) <= atom_count(planted.target));
            CHECK(out.oracle_calls <= 2 * out.facts_processed);
            CHECK(criticals.size() == out.trace.size());
            for (auto & c : criticals)
                CHECK(oracle::critical(c, planted.target));
            // every positive maps into the final critical example's CQ
            REQUIRE(! criticals.empty());
            for (auto & p : planted.examples.positives())
                CHECK(oracle::homomorphism_exists(criticals.back(), p));
        }
    }

    TEST_CASE("no positives")
    {
        auto e = parse_example_set("instance I { R(a,b). }\n- I (a)\n");
        TargetOracle o{parse_cq("q(x) :- P(x).")};
        CHECK_THROWS_AS(learn_cq(e, o), NoPositiveExamples);
        CHECK_THROWS_AS(learn_ucq(e, o), NoPositiveExamples);
    }

    TEST_CASE("an oracle that disagrees with the labels")
    {
        auto q = parse_cq("q(x) :- R(x,y).");
        auto e = parse_example_set("instance I { R(a,b). }\ninstance J { R(c,c). }\n+ I (a)\n+ J (c)\n");
        LyingOracle o{q, e.items()[0].first};
        auto out = learn_cq(e, o);
        CHECK(out.skipped_positives == 1);
        // only J is used, so the hypothesis demands a loop and misses I
        CHECK(! out.fits_input);

        LyingOracle all{parse_cq("q(x) :- P(x)."), Example{}};
        CHECK_THROWS_AS(learn_cq(e, all), LearnerError);
    }

    TEST_CASE("unions with disjoint relations")
    {
        auto target = std::get<UCQ>(parse_query("q(x) :- R(x,y), P(y).\nq(x) :- S(x,z), Q(z)."));
        auto e = parse_example_set(
                "instance A { R(a,b). P(b). R(b,a). }\n"
                "instance B { S(c,d). Q(d). Q(c). }\n"
                "instance C { R(e,f). P(f). P(e). }\n"
                "instance D { S(g,h). Q(h). S(h,h). }\n"
                "instance N { R(u,v). S(u,w). P(u). Q(u). }\n"
                "+ A (a)\n+ B (c)\n+ C (e)\n+ D (g)\n- N (u)\n");
        TargetOracle o{target};
        auto out = learn_ucq(e, o);
        REQUIRE(std::holds_alternative<UCQ>(out.hypothesis));
        CHECK(std::get<UCQ>(out.hypothesis).disjuncts().size() == 2);
        CHECK(out.fits_input);
        CHECK(equivalent(out.hypothesis, target));
    }

    TEST_CASE("learned UCQs fit planted sets and stay small")
    {
        RandomProfile profile;
        profile.atoms = 4;
        profile.examples = 8;
        profile.disjuncts = 2;
        for (std::uint64_t seed = 0 ; seed < 100 ; ++seed) {
            Rng rng{seed};
            auto planted = random_planted_set(rng, profile);
            TargetOracle o{planted.target};
            auto out = learn_ucq(planted.examples, o);
            CHECK(out.fits_input);
            CHECK(verify_fit(out.hypothesis, planted.examples));
            CHECK(atom_count(out.hypothesis) <= atom_count(planted.target));
        }
    }

    TEST_CASE("single-CQ targets give the same hypothesis from both learners")
    {
        RandomProfile profile;
        profile.atoms = 5;
        for (std::uint64_t seed = 0 ; seed < 200 ; ++seed) {
            Rng rng{seed};
            auto planted = random_planted_set(rng, profile);
            TargetOracle o1{planted.target}, o2{planted.target};
            auto cq = learn_cq(planted.examples, o1);
            auto ucq = learn_ucq(planted.examples, o2);
            auto disjuncts = std::holds_alternative<CQ>(ucq.hypothesis)
                ? std::vector<CQ>{std::get<CQ>(ucq.hypothesis)} : std::get<UCQ>(ucq.hypothesis).disjuncts();
            REQUIRE(disjuncts.size() == 1);
            CHECK(find_isomorphism(canonical_instance(disjuncts.front()), canonical_instance(std::get<CQ>(cq.hypothesis))));
        }
    }
}
