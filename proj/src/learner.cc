/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/fitting.hh>
#include <cqlearn/learner.hh>
#include <cqlearn/product.hh>

#include <optional>

using std::optional;
using std::size_t;
using std::vector;

namespace cqlearn
{
    namespace
    {
        // caller has established that example is positive
        auto sweep(Example example, MembershipOracle & oracle) -> Example
        {
            size_t i = 0;
            while (i < example.instance.fact_count()) {
                Example candidate{example.instance.without_fact(i), example.distinguished};
                if (candidate.well_formed() && oracle.answer(candidate) == Label::positive)
                    example = std::move(candidate);
                else
                    ++i;
            }
            return example;
        }

        auto positive(const Example & example, MembershipOracle & oracle) -> bool
        {
            return example.well_formed() && oracle.answer(example) == Label::positive;
        }

        struct Run
        {
            MembershipOracle & oracle;
            const LearnerOptions & options;
            LearnerOutput & output;
            size_t calls_before;

            // minimise a known-positive example and keep the values short
            auto critical(const Example & example) -> Example
            {
                output.facts_processed += example.instance.fact_count();
                auto result = compact_values(sweep(example, oracle));
                output.trace.push_back(result.instance.fact_count());
                if (options.on_critical)
                    options.on_critical(result);
                return result;
            }
        };

        auto require_positives(const LabeledExampleSet & examples) -> vector<Example>
        {
            auto positives = examples.positives();
            if (positives.empty())
                throw NoPositiveExamples("learning needs at least one positive example");
            return positives;
        }
    }

    auto minimize_critical(const Example & example, MembershipOracle & oracle) -> Example
    {
        if (! positive(example, oracle))
            throw LearnerError("minimisation needs a well-formed example the oracle labels positive");
        return sweep(example, oracle);
    }

    auto learn_cq(const LabeledExampleSet & examples, MembershipOracle & oracle,
            const LearnerOptions & options) -> LearnerOutput
    {
        auto positives = require_positives(examples);
        LearnerOutput output{Query{CQ{{}, {}}}, 0, {}, 0, 0, false};
        Run run{oracle, options, output, oracle.call_count()};

        optional<Example> current;
        for (auto & e : positives) {
            optional<Example> candidate = current ? product_examples(*current, e) : optional<Example>{e};
            if (candidate && positive(*candidate, oracle))
                current = run.critical(*candidate);
            else
                ++output.skipped_positives;
        }
        if (! current)
            throw LearnerError("the membership oracle rejected every positive example");

        output.hypothesis = canonical_cq(*current);
        output.oracle_calls = oracle.call_count() - run.calls_before;
        output.fits_input = verify_fit(output.hypothesis, examples);
        return output;
    }

    auto learn_ucq(const LabeledExampleSet & examples, MembershipOracle & oracle,
            const LearnerOptions & options) -> LearnerOutput
    {
        auto positives = require_positives(examples);
        LearnerOutput output{Query{CQ{{}, {}}}, 0, {}, 0, 0, false};
        Run run{oracle, options, output, oracle.call_count()};

        vector<Example> critical;
        for (auto & e : positives) {
            bool merged = false;
            for (auto & j : critical) {
                auto product = product_examples(j, e);
                if (product && positive(*product, oracle)) {
                    j = run.critical(*product);
                    merged = true;
                    break;
                }
            }
            if (merged)
                continue;
            if (positive(e, oracle))
                critical.push_back(run.critical(e));
            else
                ++output.skipped_positives;
        }
        if (critical.empty())
            throw LearnerError("the membership oracle rejected every positive example");

        vector<CQ> disjuncts;
        for (auto & j : critical)
            disjuncts.push_back(canonical_cq(j));
        output.hypothesis = UCQ{std::move(disjuncts)};
        output.oracle_calls = oracle.call_count() - run.calls_before;
        output.fits_input = verify_fit(output.hypothesis, examples);
        return output;
    }
}
