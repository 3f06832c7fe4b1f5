/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_HOM_HH
#define CQLEARN_GUARD_HOM_HH 1

#include <cqlearn/model.hh>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

namespace cqlearn
{
    struct Homomorphism
    {
        std::map<Value, Value> mapping;

        auto operator() (const Value & v) const -> const Value &;
    };

    /**
     * Backtracking search for a homomorphism between examples that sends the
     * source's distinguished tuple to the target's. Domains are kept generalised
     * arc consistent over the source facts; branching picks the variable with the
     * smallest domain, ties broken by (incident facts descending, name ascending).
     * Connected components of the source are solved independently.
     *
     * Throws ArityMismatch or SchemaError.
     */
    auto find_homomorphism(const Example & source, const Example & target) -> std::optional<Homomorphism>;

    /// A bijective homomorphism whose inverse is also one, or nothing.
    auto find_isomorphism(const Example & source, const Example & target) -> std::optional<Homomorphism>;

    /// Fact-by-fact check, independent of the search.
    auto is_homomorphism(const Homomorphism & h, const Example & source, const Example & target) -> bool;

    /// Applies first, then second.
    auto compose(const Homomorphism & first, const Homomorphism & second) -> Homomorphism;

    /// An instance indexed once so that many tuples can be tested against it.
    class IndexedInstance
    {
        public:
            struct Data;

        private:
            std::shared_ptr<const Data> _data;

        public:
            explicit IndexedInstance(const Instance & instance, const Tuple & extra_values = {});

            /// A homomorphism from source mapping source_tuple to tuple, if any.
            auto find(const Example & source, const Tuple & tuple) const -> std::optional<Homomorphism>;
            auto active_domain() const -> const std::vector<Value> &;
    };

    auto evaluate(const CQ & query, const Example & example) -> Label;
    auto evaluate(const UCQ & query, const Example & example) -> Label;
    auto evaluate(const Query & query, const Example & example) -> Label;

    /// Bottom-up evaluation of a tree-shaped CQ over a schema of one binary and any unary
    /// relations, linear in |q|·|e|. Throws NotTreeShaped or SchemaError.
    auto evaluate_tree(const CQ & query, const Example & example) -> Label;

    /// Every tuple over the active domain that the query returns.
    auto all_answers(const CQ & query, const Instance & instance) -> std::set<Tuple>;

    struct CQFragment
    {
        std::vector<Atom> atoms;
        std::vector<Variable> head_variables;
    };

    /// Body atoms partitioned by shared variables, in order of their least atom.
    auto connected_components(const CQ & query) -> std::vector<CQFragment>;
}

#endif
