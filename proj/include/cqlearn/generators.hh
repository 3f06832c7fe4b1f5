/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_GENERATORS_HH
#define CQLEARN_GUARD_GENERATORS_HH 1

#include <cqlearn/model.hh>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

namespace cqlearn
{
    /// Clauses hold signed variable indices: +i for X_i, -i for its negation.
    struct CnfFormula
    {
        std::size_t num_vars = 0;
        std::vector<std::vector<int> > clauses;

        /// Throws Error unless every clause has 1 to 3 literals over variables 1..num_vars.
        auto validate() const -> void;

        /// Repeats the last literal of short clauses until each has three.
        auto padded() const -> CnfFormula;
    };

    /// 2i for X_i and 2i-1 for its negation.
    auto literal_index(int literal) -> std::size_t;

    struct CnfReduction
    {
        Instance instance;
        LabeledExampleSet examples;
    };

    /**
     * For each variable i a root a_i with two R-chains p_i_1..p_i_2m and
     * n_i_1..n_i_2m, where P marks every position except literal_index(-i) on
     * the p-chain and except literal_index(i) on the n-chain. A root b has one
     * chain b_i_1..b_i_2m per clause, with P at the positions of the literals
     * not in that clause. The examples are (a_i, +) for every i and (b, -).
     */
    auto gen_cnf_reduction(const CnfFormula & formula) -> CnfReduction;

    /// assignment[i-1] is the value of X_i. The path x0 -> ... -> x2m with
    /// P(x_j) for the index of every true literal.
    auto assignment_to_path_cq(const std::vector<bool> & assignment) -> CQ;

    /// Reads "p cnf m k" followed by zero-terminated clauses; 'c' lines are comments.
    auto parse_dimacs(std::string_view text) -> CnfFormula;

    /// q(x0) :- R(x0,x1), ..., R(x_{length-1},x_length), P(x_length).
    auto terminal_path_cq(std::size_t length) -> CQ;

    /// The n-th prime, counting from 2 at n = 1.
    auto nth_prime(std::size_t n) -> std::size_t;

    struct LassoFamily
    {
        Instance instance;
        LabeledExampleSet examples;
        CQ fitting_query;
    };

    /**
     * Disjoint lassos for the first n primes p: a_p_0 -> ... -> a_p_{2p-1} with
     * a back edge to a_p_p and P(a_p_p), plus a loop R(b,b). Positives are the
     * lasso starts, b is negative, and the fitting query is the terminal path of
     * length p_1 * ... * p_n.
     *
     * Throws Error when that length exceeds max_length.
     */
    auto gen_lasso_family(std::size_t n, std::size_t max_length = 1'000'000) -> LassoFamily;

    struct VcFamily
    {
        std::size_t n = 0;
        /// Example i-1 is the path a_1 -> ... -> a_n marked by P everywhere except a_i.
        std::vector<Example> examples;

        /// The path query with P at each position not in the subset (1-based); it
        /// labels example i positive iff i is in the subset.
        auto query_for_subset(const std::vector<std::size_t> & subset) const -> CQ;
    };

    /// Throws Error for n < 2: a one-value path has no facts once its P is removed.
    auto gen_vc_family(std::size_t n) -> VcFamily;

    /// Deterministic on every platform: all sampling is done here rather than
    /// through the standard distributions.
    class Rng
    {
        private:
            std::mt19937_64 _engine;

        public:
            explicit Rng(std::uint64_t seed);

            /// An independent stream for the given index.
            static auto derive(std::uint64_t seed, std::uint64_t index) -> std::uint64_t;

            auto next() -> std::uint64_t { return _engine(); }

            /// Uniform in [0, bound). bound must be positive.
            auto below(std::uint64_t bound) -> std::uint64_t;

            /// Uniform in [low, high].
            auto between(std::size_t low, std::size_t high) -> std::size_t;

            /// Uniform in [0, 1) with 53 random bits.
            auto uniform() -> double;

            auto chance(double p) -> bool { return uniform() < p; }
    };

    struct RandomProfile
    {
        enum class Kind
        {
            instance,
            tree_instance,
            cq,
            tree_cq,
            labeled_set
        };

        Kind kind = Kind::instance;
        Schema schema{{"R", 2}, {"P", 1}};
        /// Upper bounds; actual sizes are drawn from 1 up to these.
        std::size_t values = 6;
        std::size_t facts = 10;
        std::size_t atoms = 4;
        std::size_t arity = 1;
        std::size_t examples = 8;
        /// Planted targets with more than one disjunct are UCQs.
        std::size_t disjuncts = 1;
        /// Labeled sets over tree-shaped instances with a tree-shaped target.
        bool tree = false;

        /// Throws Error when no output can satisfy the bounds.
        auto validate() const -> void;
    };

    auto random_instance(Rng & rng, const RandomProfile & profile) -> Instance;

    /// A directed forest over the profile's single binary relation, decorated by its unary ones.
    auto random_tree_instance(Rng & rng, const RandomProfile & profile) -> Instance;

    auto random_cq(Rng & rng, const RandomProfile & profile) -> CQ;

    /// A CQ whose canonical instance is a directed forest.
    auto random_tree_cq(Rng & rng, const RandomProfile & profile) -> CQ;

    /// A random well-formed example with the distinguished tuple drawn from its active domain.
    auto random_example(Rng & rng, const RandomProfile & profile) -> Example;

    /// The image of the query under a random map into a few values, plus noise
    /// facts; the query holds on it by construction.
    auto random_positive(Rng & rng, const CQ & query, const RandomProfile & profile) -> Example;

    struct PlantedSet
    {
        Query target;
        LabeledExampleSet examples;
    };

    /// Examples labeled by a random target; the first example is positive and no
    /// example occurs twice.
    auto random_planted_set(Rng & rng, const RandomProfile & profile) -> PlantedSet;

    using Generated = std::variant<Instance, CQ, LabeledExampleSet>;

    auto gen_random(std::uint64_t seed, const RandomProfile & profile) -> Generated;
}

#endif
