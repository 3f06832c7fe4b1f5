/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/fitting.hh>
#include <cqlearn/generators.hh>
#include <cqlearn/hom.hh>
#include <cqlearn/pac.hh>
#include <cqlearn/syntax.hh>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <thread>

using std::size_t;
using std::string;
using std::vector;

namespace cqlearn
{
    Distribution::Distribution(vector<std::pair<Example, double> > support) :
        _support(std::move(support))
    {
        if (_support.empty())
            throw Error("a distribution needs a non-empty support");
        double total = 0.0;
        for (auto & [e, w] : _support) {
            if (! (w >= 0.0) || ! std::isfinite(w))
                throw Error("distribution weights must be finite and non-negative");
            total += w;
        }
        if (! (total > 0.0))
            throw Error("distribution weights sum to zero");

        double running = 0.0;
        for (auto & [e, w] : _support) {
            w /= total;
            running += w;
            _cumulative.push_back(running);
            if (! (e.instance == _support.front().first.instance))
                _single_instance = false;
        }
    }

    auto Distribution::uniform(vector<Example> examples) -> Distribution
    {
        vector<std::pair<Example, double> > support;
        for (auto & e : examples)
            support.emplace_back(std::move(e), 1.0);
        return Distribution{std::move(support)};
    }

    auto Distribution::index_at(double u) const -> size_t
    {
        auto i = size_t(std::upper_bound(_cumulative.begin(), _cumulative.end(), u) - _cumulative.begin());
        // rounding can leave the last cumulative weight just below 1; skip zero-weight tails
        if (i >= _support.size())
            i = _support.size() - 1;
        while (i > 0 && _support[i].second == 0.0)
            --i;
        return i;
    }

    auto PacParams::validate() const -> void
    {
        if (! (delta > 0.0 && delta < 1.0))
            throw Error("delta must lie strictly between 0 and 1");
        if (! (epsilon > 0.0 && epsilon < 1.0))
            throw Error("epsilon must lie strictly between 0 and 1");
        if (! (alpha >= 0.0 && alpha < 1.0))
            throw Error("the Occam exponent alpha must satisfy 0 <= alpha < 1");
        if (! (k_occam > 0.0))
            throw Error("the Occam degree must be positive");
    }

    auto sample_size(const PacParams & params) -> size_t
    {
        params.validate();
        double base = (std::pow(double(params.n_bits), params.k_occam) * std::log(2.0) + std::log(2.0 / params.delta))
            / params.epsilon;
        double size = std::ceil(std::pow(base, 1.0 / (1.0 - params.alpha)));
        if (! (size < 1e18))
            throw Error("sample size overflows");
        return size_t(size);
    }

    auto draw_indices(const Distribution & distribution, size_t count, std::uint64_t seed) -> vector<size_t>
    {
        Rng rng{seed};
        vector<size_t> result;
        result.reserve(count);
        for (size_t i = 0 ; i < count ; ++i)
            result.push_back(distribution.index_at(rng.uniform()));
        return result;
    }

    auto draw_sample(const Distribution & distribution, size_t count, std::uint64_t seed) -> vector<Example>
    {
        vector<Example> result;
        result.reserve(count);
        for (auto i : draw_indices(distribution, count, seed))
            result.push_back(distribution.support()[i].first);
        return result;
    }

    namespace
    {
        auto check_arities(const Query & hypothesis, const Query & target, const Distribution & distribution) -> void
        {
            if (arity(hypothesis) != arity(target))
                throw ArityMismatch("hypothesis of arity " + std::to_string(arity(hypothesis)) + " against target of arity "
                        + std::to_string(arity(target)));
            for (auto & [e, w] : distribution.support())
                if (e.arity() != arity(target))
                    throw ArityMismatch("distribution holds an example of arity " + std::to_string(e.arity()));
        }

        auto labels(const Query & query, const Distribution & distribution) -> vector<Label>
        {
            vector<Label> result;
            for (auto & [e, w] : distribution.support())
                result.push_back(evaluate(query, e));
            return result;
        }

        auto error_against(const std::optional<Query> & hypothesis, const vector<Label> & target_labels,
                const Distribution & distribution) -> double
        {
            double error = 0.0;
            for (size_t i = 0 ; i < distribution.size() ; ++i) {
                auto & [e, w] = distribution.support()[i];
                auto predicted = hypothesis ? evaluate(*hypothesis, e) : Label::negative;
                if (predicted != target_labels[i])
                    error += w;
            }
            return error;
        }
    }

    auto exact_error(const Query & hypothesis, const Query & target, const Distribution & distribution) -> double
    {
        check_arities(hypothesis, target, distribution);
        return error_against(hypothesis, labels(target, distribution), distribution);
    }

    auto estimate_error(const Query & hypothesis, const Query & target, const Distribution & distribution,
            size_t count, std::uint64_t seed) -> double
    {
        check_arities(hypothesis, target, distribution);
        if (count == 0)
            throw Error("error estimation needs at least one draw");
        vector<std::optional<bool> > disagrees(distribution.size());
        size_t wrong = 0;
        for (auto i : draw_indices(distribution, count, seed)) {
            if (! disagrees[i]) {
                auto & e = distribution.support()[i].first;
                disagrees[i] = evaluate(hypothesis, e) != evaluate(target, e);
            }
            wrong += *disagrees[i];
        }
        return double(wrong) / double(count);
    }

    namespace
    {
        auto run_trial(const Query & target, const Distribution & distribution, const vector<Label> & target_labels,
                size_t sample, std::uint64_t seed, LearnerKind kind) -> TrialReport
        {
            auto start = std::chrono::steady_clock::now();
            TrialReport report;
            report.seed = seed;
            report.sample_size_used = sample;

            auto drawn = draw_indices(distribution, sample, seed);
            std::set<size_t> distinct{drawn.begin(), drawn.end()};
            LabeledExampleSet training{arity(target)};
            bool any_positive = false;
            for (auto i : distinct) {
                training.add(distribution.support()[i].first, target_labels[i]);
                any_positive = any_positive || target_labels[i] == Label::positive;
            }

            if (any_positive) {
                TargetOracle oracle{target};
                auto output = kind == LearnerKind::cq ? learn_cq(training, oracle) : learn_ucq(training, oracle);
                report.hypothesis = std::move(output.hypothesis);
                report.oracle_calls = output.oracle_calls;
            }
            report.empirical_error = error_against(report.hypothesis, target_labels, distribution);
            report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return report;
        }
    }

    auto run_pac_experiment(const Query & target, const Distribution & distribution, const PacParams & params,
            size_t trials, std::uint64_t seed, const ExperimentOptions & options) -> vector<TrialReport>
    {
        auto sample = sample_size(params);
        for (auto & [e, w] : distribution.support())
            if (e.arity() != arity(target))
                throw ArityMismatch("distribution holds an example of arity " + std::to_string(e.arity()));
        auto target_labels = labels(target, distribution);

        vector<TrialReport> reports(trials);
        vector<std::exception_ptr> failures(trials);
        std::atomic<size_t> next{0};
        auto work = [&] () {
            for (size_t t ; (t = next++) < trials ; ) {
                try {
                    reports[t] = run_trial(target, distribution, target_labels, sample, Rng::derive(seed, t), options.learner);
                }
                catch (...) {
                    failures[t] = std::current_exception();
                }
            }
        };

        size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = std::min(threads, std::max<size_t>(trials, 1));
        vector<std::thread> pool;
        for (size_t i = 1 ; i < threads ; ++i)
            pool.emplace_back(work);
        work();
        for (auto & t : pool)
            t.join();

        for (auto & f : failures)
            if (f)
                std::rethrow_exception(f);
        return reports;
    }

    auto success_rate(const vector<TrialReport> & reports, double epsilon) -> double
    {
        if (reports.empty())
            return 0.0;
        auto good = std::count_if(reports.begin(), reports.end(),
                [&] (const TrialReport & r) { return r.empirical_error <= epsilon; });
        return double(good) / double(reports.size());
    }

    auto fitting_via_pac(const LabeledExampleSet & examples, const Learner & learner,
            const OracleFactory & oracle_factory, const FittingViaPacOptions & options) -> bool
    {
        if (examples.positives().empty())
            throw NoPositiveExamples("fitting via PAC needs at least one positive example");

        PacParams params;
        params.delta = options.delta.value_or(0.25);
        params.epsilon = options.epsilon.value_or(1.0 / (2.0 * double(examples.size())));
        params.n_bits = options.n_bits.value_or(8 * to_text(examples).size());

        vector<Example> items;
        for (auto & [e, label] : examples.items())
            items.push_back(e);
        auto distribution = Distribution::uniform(std::move(items));
        auto drawn = draw_indices(distribution, sample_size(params), options.seed);
        std::set<size_t> distinct{drawn.begin(), drawn.end()};

        LabeledExampleSet training{*examples.arity()};
        bool any_positive = false;
        for (auto i : distinct) {
            auto & [e, label] = examples.items()[i];
            training.add(e, label);
            any_positive = any_positive || label == Label::positive;
        }
        if (! any_positive)
            return false;

        auto oracle = oracle_factory();
        auto output = learner(training, *oracle);
        return verify_fit(output.hypothesis, examples);
    }
}
