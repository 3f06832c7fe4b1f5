/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_LEARNER_HH
#define CQLEARN_GUARD_LEARNER_HH 1

#include <cqlearn/oracle.hh>
#include <cqlearn/model.hh>

#include <cstddef>
#include <functional>
#include <vector>

namespace cqlearn
{
    /**
     * Removes facts one at a time, in the instance's sorted fact order, keeping a
     * removal whenever the remainder is well-formed and still positive. The
     * result is critical: dropping any single remaining fact makes it ill-formed
     * or negative. Ill-formed candidates count as negative without asking the
     * oracle. The input is checked with one oracle call, so at most
     * |facts| + 1 calls are made.
     *
     * Throws LearnerError if the oracle labels the input negative.
     */
    auto minimize_critical(const Example & example, MembershipOracle & oracle) -> Example;

    struct LearnerOptions
    {
        /// Called with every critical example the learner produces.
        std::function<void (const Example &)> on_critical;
    };

    struct LearnerOutput
    {
        Query hypothesis;
        std::size_t oracle_calls = 0;
        /// Fact counts of the critical examples, one per processed positive.
        std::vector<std::size_t> trace;
        /// Facts handed to the minimiser across the whole run.
        std::size_t facts_processed = 0;
        /// Positives the oracle rejected (directly or via their product); non-zero means
        /// the oracle disagrees with the labels.
        std::size_t skipped_positives = 0;
        /// Result of checking the hypothesis against every labeled example.
        bool fits_input = false;
    };

    /**
     * Folds the positive examples into one critical example by alternating
     * products and minimisation, and returns its canonical CQ. With an oracle
     * for a target q* consistent with the labels, the hypothesis fits and has
     * no more atoms than q*. Negative examples are only read by the final
     * verification.
     *
     * Throws NoPositiveExamples, or LearnerError if the oracle rejects every positive.
     */
    auto learn_cq(const LabeledExampleSet & examples, MembershipOracle & oracle,
            const LearnerOptions & options = {}) -> LearnerOutput;

    /// Keeps one critical example per group of positives whose product stays
    /// positive; the hypothesis is the disjunction of their canonical CQs.
    auto learn_ucq(const LabeledExampleSet & examples, MembershipOracle & oracle,
            const LearnerOptions & options = {}) -> LearnerOutput;
}

#endif
