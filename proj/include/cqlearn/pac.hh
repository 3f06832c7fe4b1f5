/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_PAC_HH
#define CQLEARN_GUARD_PAC_HH 1

#include <cqlearn/learner.hh>
#include <cqlearn/model.hh>
#include <cqlearn/oracle.hh>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace cqlearn
{
    /// A finite distribution over examples. Weights are normalised on construction.
    class Distribution
    {
        private:
            std::vector<std::pair<Example, double> > _support;
            std::vector<double> _cumulative;
            bool _single_instance = true;

        public:
            /// Throws Error on an empty support, a negative weight or a zero total.
            explicit Distribution(std::vector<std::pair<Example, double> > support);

            static auto uniform(std::vector<Example> examples) -> Distribution;

            auto support() const -> const std::vector<std::pair<Example, double> > & { return _support; }
            auto size() const -> std::size_t { return _support.size(); }

            /// Every example in the support shares one instance.
            auto single_instance() const -> bool { return _single_instance; }

            /// Inverse CDF over the support order; u in [0,1).
            auto index_at(double u) const -> std::size_t;
    };

    struct PacParams
    {
        double delta = 0.1;
        double epsilon = 0.1;
        std::size_t n_bits = 0;
        double alpha = 0.0;
        double k_occam = 1.0;
        /// Bound on example size. The Occam bound does not depend on it; kept so
        /// that experiment descriptions can record it.
        std::optional<std::size_t> example_size;

        /// Throws Error unless delta and epsilon lie in (0,1) and 0 <= alpha < 1.
        auto validate() const -> void;
    };

    /// ceil(((n_bits^k_occam * ln 2 + ln(2/delta)) / epsilon)^(1/(1-alpha)))
    auto sample_size(const PacParams & params) -> std::size_t;

    /// Support positions of count independent draws, reproducible from the seed.
    auto draw_indices(const Distribution & distribution, std::size_t count, std::uint64_t seed) -> std::vector<std::size_t>;

    auto draw_sample(const Distribution & distribution, std::size_t count, std::uint64_t seed) -> std::vector<Example>;

    /// Total weight of the support examples on which the two queries disagree. Throws ArityMismatch.
    auto exact_error(const Query & hypothesis, const Query & target, const Distribution & distribution) -> double;

    /// Disagreement rate over count fresh draws. Throws ArityMismatch.
    auto estimate_error(const Query & hypothesis, const Query & target, const Distribution & distribution,
            std::size_t count, std::uint64_t seed) -> double;

    struct TrialReport
    {
        std::uint64_t seed = 0;
        std::size_t sample_size_used = 0;
        /// Empty when the sample held no positive example; the trial then
        /// predicts negative everywhere.
        std::optional<Query> hypothesis;
        double empirical_error = 0.0;
        std::size_t oracle_calls = 0;
        double wall_time = 0.0;
    };

    enum class LearnerKind
    {
        cq,
        ucq
    };

    struct ExperimentOptions
    {
        LearnerKind learner = LearnerKind::cq;
        /// Zero means one per hardware thread.
        std::size_t threads = 0;
    };

    /**
     * Each trial draws sample_size(params) examples with a seed derived from
     * (seed, trial index), labels them by the target, learns from the distinct
     * ones with a membership oracle for the target, and records the exact error.
     * Results do not depend on the thread count.
     */
    auto run_pac_experiment(const Query & target, const Distribution & distribution, const PacParams & params,
            std::size_t trials, std::uint64_t seed, const ExperimentOptions & options = {}) -> std::vector<TrialReport>;

    /// Fraction of trials whose error is at most epsilon.
    auto success_rate(const std::vector<TrialReport> & reports, double epsilon) -> double;

    using Learner = std::function<LearnerOutput (const LabeledExampleSet &, MembershipOracle &)>;
    using OracleFactory = std::function<std::unique_ptr<MembershipOracle> ()>;

    struct FittingViaPacOptions
    {
        /// Defaults: delta 0.25, epsilon 1/(2|E|), n_bits 8 times the serialized length of E.
        std::optional<double> delta, epsilon;
        std::optional<std::size_t> n_bits;
        std::uint64_t seed = 0;
    };

    /**
     * Decides fitting with one-sided error: draws a sample from the uniform
     * distribution on the labeled examples, learns from it and reports whether
     * the hypothesis fits every example. A true answer is always correct.
     *
     * Throws NoPositiveExamples if the set has no positive example.
     */
    auto fitting_via_pac(const LabeledExampleSet & examples, const Learner & learner,
            const OracleFactory & oracle_factory, const FittingViaPacOptions & options = {}) -> bool;
}

#endif
