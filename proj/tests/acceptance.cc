/* vim: set sw=4 sts=4 et foldmethod=syntax : */

// Runs the acceptance criteria and prints one PASS or FAIL line for each.
// The exit status is non-zero if any criterion fails.

#include "oracles.hh"

#include <cqlearn/fitting.hh>
#include <cqlearn/generators.hh>
#include <cqlearn/hom.hh>
#include <cqlearn/learner.hh>
#include <cqlearn/pac.hh>
#include <cqlearn/product.hh>
#include <cqlearn/syntax.hh>
#include <cqlearn/tree_shape.hh>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace cqlearn;

namespace
{
    using Clock = std::chrono::steady_clock;

    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    auto seconds_since(Clock::time_point start) -> double
    {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    auto format(const char * pattern, auto... args) -> std::string
    {
        char buffer[512];
        std::snprintf(buffer, sizeof(buffer), pattern, args...);
        return buffer;
    }

    auto reduction_equivalence() -> Outcome
    {
        auto start = Clock::now();
        // every clause is a non-empty set of at most three of the four literals
        std::vector<std::vector<int> > clauses;
        std::vector<int> literals{1, -1, 2, -2};
        for (unsigned mask = 1 ; mask < 16 ; ++mask)
            if (std::popcount(mask) <= 3) {
                std::vector<int> clause;
                for (unsigned b = 0 ; b < 4 ; ++b)
                    if (mask >> b & 1)
                        clause.push_back(literals[b]);
                clauses.push_back(clause);
            }

        std::size_t formulas = 0, disagreements = 0, satisfiable = 0;
        auto check = [&] (std::vector<std::vector<int> > chosen) {
            CnfFormula f = CnfFormula{2, std::move(chosen)}.padded();
            bool sat = oracle::satisfiable(f);
            ++formulas;
            satisfiable += sat;
            if (fitting_exists(gen_cnf_reduction(f).examples).exists != sat)
                ++disagreements;
        };
        for (std::size_t a = 0 ; a < clauses.size() ; ++a) {
            check({clauses[a]});
            for (std::size_t b = a + 1 ; b < clauses.size() ; ++b) {
                check({clauses[a], clauses[b]});
                for (std::size_t c = b + 1 ; c < clauses.size() ; ++c)
                    check({clauses[a], clauses[b], clauses[c]});
            }
        }
        auto t = seconds_since(start);
        return {disagreements == 0 && t < 60.0,
            format("%zu formulas (%zu satisfiable), %zu disagreements, %.2f s", formulas, satisfiable, disagreements, t)};
    }

    auto worked_reduction() -> Outcome
    {
        auto r = gen_cnf_reduction(CnfFormula{2, {{1}, {2}, {-1, 2}}});
        std::set<Value> marked;
        for (auto & f : r.instance.facts())
            if (f.relation == "P")
                marked.insert(f.args[0]);
        std::set<Value> expected{
            "p_1_2", "p_1_3", "p_1_4", "n_1_1", "n_1_3", "n_1_4",
            "p_2_1", "p_2_2", "p_2_4", "n_2_1", "n_2_2", "n_2_3",
            "b_1_1", "b_1_3", "b_1_4", "b_2_1", "b_2_2", "b_2_3",
            "b_3_2", "b_3_3"};
        bool fits = verify_fit(assignment_to_path_cq({true, true}), r.examples);
        return {marked == expected && fits,
            format("%zu P-facts, set %s, assignment query %s", marked.size(),
                    marked == expected ? "equal" : "differs", fits ? "fits" : "does not fit")};
    }

    struct LearnerStats
    {
        std::size_t trials = 0, fits = 0, small = 0, within_budget = 0;
        std::size_t criticals = 0, critical_ok = 0;
        double seconds = 0;
    };

    auto learner_trials() -> LearnerStats
    {
        LearnerStats s;
        auto start = Clock::now();
        RandomProfile profile;
        profile.atoms = 8;
        profile.examples = 12;
        profile.facts = 40;
        profile.values = 12;
        for (std::uint64_t seed = 0 ; seed < 200 ; ++seed) {
            Rng rng{Rng::derive(3, seed)};
            auto planted = random_planted_set(rng, profile);
            TargetOracle o{planted.target};
            std::vector<Example> criticals;
            LearnerOptions options;
            options.on_critical = [&] (const Example & c) { criticals.push_back(c); };
            auto out = learn_cq(planted.examples, o, options);
            ++s.trials;
            s.fits += out.fits_input && verify_fit(out.hypothesis, planted.examples);
            s.small += atom_count(out.hypothesis) <= atom_count(planted.target);
            s.within_budget += out.oracle_calls <= 2 * out.facts_processed;
            for (auto & c : criticals) {
                ++s.criticals;
                s.critical_ok += oracle::critical(c, planted.target);
            }
        }
        s.seconds = seconds_since(start);
        return s;
    }

    auto ucq_learner() -> Outcome
    {
        RandomProfile profile;
        profile.atoms = 5;
        profile.examples = 10;
        profile.facts = 20;
        profile.disjuncts = 2;
        std::size_t fits = 0, small = 0;
        auto start = Clock::now();
        for (std::uint64_t seed = 0 ; seed < 100 ; ++seed) {
            Rng rng{Rng::derive(5, seed)};
            auto planted = random_planted_set(rng, profile);
            TargetOracle o{planted.target};
            auto out = learn_ucq(planted.examples, o);
            fits += out.fits_input && verify_fit(out.hypothesis, planted.examples);
            small += atom_count(out.hypothesis) <= atom_count(planted.target);
        }
        return {fits == 100 && small == 100,
            format("fits %zu/100, atoms within target %zu/100, %.2f s", fits, small, seconds_since(start))};
    }

    /// A deep 50-value tree with random P-marks; every value is a support example.
    auto pac_instance() -> Instance
    {
        Rng rng{2024};
        std::vector<Fact> facts;
        for (std::size_t k = 1 ; k < 50 ; ++k)
            facts.push_back(Fact{"R", {"v" + std::to_string(k - 1 - rng.below(std::min<std::size_t>(k, 3))), "v" + std::to_string(k)}});
        for (std::size_t k = 0 ; k < 50 ; ++k)
            if (rng.chance(0.4))
                facts.push_back(Fact{"P", {"v" + std::to_string(k)}});
        return Instance{facts};
    }

    auto pac_contract() -> Outcome
    {
        auto start = Clock::now();
        PacParams reference;
        reference.n_bits = 10;
        bool formula = sample_size(reference) == 100;

        auto target = Query{terminal_path_cq(5)};
        auto instance = pac_instance();
        std::vector<Example> support;
        for (auto & v : instance.active_domain())
            support.push_back(Example{instance, {v}});
        auto distribution = Distribution::uniform(support);
        std::size_t positives = 0;
        for (auto & e : support)
            positives += evaluate(target, e) == Label::positive;

        PacParams params;
        params.n_bits = bit_size(target);
        auto reports = run_pac_experiment(target, distribution, params, 50, 7);
        std::size_t good = 0;
        for (auto & r : reports)
            good += r.empirical_error <= 0.1;
        auto t = seconds_since(start);
        return {formula && distribution.single_instance() && support.size() == 50 && good >= 45 && t < 300.0,
            format("sample_size(n_bits=10)=%zu, n_bits=%zu gives %zu draws, %zu/50 support positive, "
                    "%zu/50 trials with error <= 0.1, %.2f s", sample_size(reference), params.n_bits,
                    sample_size(params), positives, good, t)};
    }

    auto lasso_family() -> Outcome
    {
        auto one = gen_lasso_family(1);
        auto smallest = smallest_fitting_enumeration(one.examples, 3);
        bool none_smaller = ! smallest_fitting_enumeration(one.examples, 2);
        bool n1 = smallest && smallest->atom_count() == 3 && none_smaller;

        auto two = gen_lasso_family(2);
        std::vector<std::size_t> fitting;
        for (std::size_t length = 1 ; length <= 12 ; ++length)
            if (verify_fit(terminal_path_cq(length), two.examples))
                fitting.push_back(length);
        bool n2 = fitting == std::vector<std::size_t>{6, 12};

        auto start = Clock::now();
        auto three = gen_lasso_family(3);
        bool n3 = three.fitting_query.atom_count() == 31;
        for (auto & [e, label] : three.examples.items())
            n3 = n3 && evaluate_tree(three.fitting_query, e) == label;
        auto t = seconds_since(start);
        n3 = n3 && t < 10.0;

        std::string lengths;
        for (auto l : fitting)
            lengths += (lengths.empty() ? "" : ",") + std::to_string(l);
        return {n1 && n2 && n3, format("n=1 minimum %zu atoms (%s below 3), n=2 fitting lengths {%s}, n=3 length-30 query %s in %.3f s",
                smallest ? smallest->atom_count() : 0, none_smaller ? "none" : "some", lengths.c_str(),
                n3 ? "fits" : "fails", t)};
    }

    auto vc_shattering() -> Outcome
    {
        auto start = Clock::now();
        std::size_t evaluations = 0, mismatches = 0, realised = 0;
        for (std::size_t n : {6, 8}) {
            auto family = gen_vc_family(n);
            for (unsigned subset = 0 ; subset < (1u << n) ; ++subset) {
                std::vector<std::size_t> members;
                for (std::size_t i = 1 ; i <= n ; ++i)
                    if (subset >> (i - 1) & 1)
                        members.push_back(i);
                auto q = family.query_for_subset(members);
                bool exact = true;
                for (std::size_t i = 1 ; i <= n ; ++i) {
                    ++evaluations;
                    bool positive = evaluate(q, family.examples[i - 1]) == Label::positive;
                    if (positive != bool(subset >> (i - 1) & 1)) {
                        ++mismatches;
                        exact = false;
                    }
                }
                realised += exact;
            }
        }
        auto t = seconds_since(start);
        return {mismatches == 0 && realised == 64 + 256 && t < 30.0,
            format("%zu/320 subsets realised, %zu evaluations, %zu mismatches, %.2f s", realised, evaluations, mismatches, t)};
    }

    auto quotient_soundness() -> Outcome
    {
        RandomProfile profile;
        profile.atoms = 6;
        profile.values = 6;
        profile.facts = 10;
        std::size_t pairs = 0, agree = 0, tree_cqs = 0, contained = 0, arbitrary = 0;
        for (std::uint64_t seed = 0 ; seed < 500 ; ++seed) {
            Rng rng{Rng::derive(9, seed)};
            auto q = random_cq(rng, profile);
            auto r = quotient_to_tree(q);
            auto t = std::get_if<TreeCQ>(&r);
            tree_cqs += t != nullptr;
            for (int k = 0 ; k < 20 ; ++k) {
                auto i = random_tree_instance(rng, profile);
                ++pairs;
                auto expected = oracle::answers(q, i);
                agree += t ? oracle::answers(t->query, i) == expected : expected.empty();
            }
            auto i = random_instance(rng, profile);
            ++arbitrary;
            if (t) {
                auto smaller = oracle::answers(t->query, i), larger = oracle::answers(q, i);
                contained += std::includes(larger.begin(), larger.end(), smaller.begin(), smaller.end());
            }
            else
                ++contained;
        }
        return {agree == pairs && contained == arbitrary,
            format("%zu/%zu tree-instance pairs agree (%zu of 500 queries reduce), containment on %zu/%zu arbitrary instances",
                    agree, pairs, tree_cqs, contained, arbitrary)};
    }

    auto engine_cross_validation() -> Outcome
    {
        RandomProfile profile;
        profile.atoms = 6;
        profile.values = 8;
        profile.facts = 14;
        std::size_t tree_agree = 0;
        for (std::uint64_t seed = 0 ; seed < 1000 ; ++seed) {
            Rng rng{Rng::derive(10, seed)};
            auto q = random_tree_cq(rng, profile);
            auto i = random_tree_instance(rng, profile);
            auto adom = i.active_domain();
            Example e{i, {adom[rng.below(adom.size())]}};
            tree_agree += evaluate_tree(q, e) == evaluate(q, e);
        }

        RandomProfile small;
        small.arity = 2;
        std::size_t projections = 0, pairs = 0;
        for (std::uint64_t seed = 0 ; pairs < 500 ; ++seed) {
            Rng rng{Rng::derive(11, seed)};
            auto a = random_example(rng, small), b = random_example(rng, small);
            auto p = product_with_projections(a, b);
            if (! p)
                continue;
            ++pairs;
            projections += is_homomorphism(p->to_left, p->product, a) && is_homomorphism(p->to_right, p->product, b);
        }

        std::size_t positive = 0;
        for (std::uint64_t seed = 0 ; seed < 500 ; ++seed) {
            Rng rng{Rng::derive(12, seed)};
            auto q = random_cq(rng, profile);
            auto a = random_positive(rng, q, profile), b = random_positive(rng, q, profile);
            auto p = product_examples(a, b);
            positive += p && p->well_formed() && oracle::evaluate(q, *p) == Label::positive;
        }
        return {tree_agree == 1000 && projections == 500 && positive == 500,
            format("tree evaluation %zu/1000, projections %zu/500, product positivity %zu/500", tree_agree, projections, positive)};
    }
}

auto main() -> int
{
    int failures = 0;
    auto report = [&] (int number, const char * name, const Outcome & o) {
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << number << " " << name << ": " << o.detail << std::endl;
        failures += ! o.pass;
    };

    report(1, "reduction equivalence", reduction_equivalence());
    report(2, "worked reduction", worked_reduction());

    auto learned = learner_trials();
    report(3, "CQ learner contract", {learned.fits == learned.trials && learned.small == learned.trials
            && learned.within_budget == learned.trials && learned.seconds < 120.0,
            format("fits %zu/%zu, atoms within target %zu/%zu, calls within 2x facts %zu/%zu, %.2f s",
                    learned.fits, learned.trials, learned.small, learned.trials, learned.within_budget, learned.trials,
                    learned.seconds)});
    report(4, "criticality", {learned.criticals > 0 && learned.critical_ok == learned.criticals,
            format("%zu/%zu minimised examples critical", learned.critical_ok, learned.criticals)});

    report(5, "UCQ learner contract", ucq_learner());
    report(6, "PAC contract", pac_contract());
    report(7, "lasso family", lasso_family());
    report(8, "VC shattering", vc_shattering());
    report(9, "quotient soundness", quotient_soundness());
    report(10, "engine cross-validation", engine_cross_validation());

    std::cout << (failures ? "FAILED " : "ALL PASSED ") << 10 - failures << "/10" << std::endl;
    return failures ? 1 : 0;
}
