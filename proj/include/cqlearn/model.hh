/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_MODEL_HH
#define CQLEARN_GUARD_MODEL_HH 1

#include <cqlearn/error.hh>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cqlearn
{
    /// Values and variables are opaque strings, compared lexicographically.
    using Value = std::string;
    using Variable = std::string;
    using Tuple = std::vector<Value>;

    class Schema
    {
        private:
            std::map<std::string, std::size_t> _relations;

        public:
            Schema() = default;
            Schema(std::initializer_list<std::pair<const std::string, std::size_t>> relations);

            /// Throws SchemaError on a zero arity or on a name already declared with another arity.
            auto add(const std::string & name, std::size_t arity) -> void;

            auto arity(const std::string & name) const -> std::optional<std::size_t>;
            auto relations() const -> const std::map<std::string, std::size_t> & { return _relations; }
            auto empty() const -> bool { return _relations.empty(); }

            /// True iff no relation name is declared with two different arities.
            auto compatible_with(const Schema & other) const -> bool;
            auto merged_with(const Schema & other) const -> Schema;

            auto operator== (const Schema &) const -> bool = default;
    };

    struct Fact
    {
        std::string relation;
        std::vector<Value> args;

        auto operator<=> (const Fact &) const = default;
    };

    /// A finite set of facts. Facts are kept sorted and duplicate-free.
    class Instance
    {
        private:
            Schema _schema;
            std::vector<Fact> _facts;

        public:
            Instance() = default;

            /// Schema inferred from the facts.
            explicit Instance(std::vector<Fact> facts);

            /// Every fact must conform to the schema.
            Instance(Schema schema, std::vector<Fact> facts);

            auto schema() const -> const Schema & { return _schema; }
            auto facts() const -> const std::vector<Fact> & { return _facts; }
            auto fact_count() const -> std::size_t { return _facts.size(); }
            auto empty() const -> bool { return _facts.empty(); }

            auto contains(const Fact & fact) const -> bool;
            auto active_domain() const -> std::vector<Value>;
            auto in_active_domain(const Value & value) const -> bool;

            /// Total number of value occurrences across all facts.
            auto size() const -> std::size_t;

            /// The instance with the fact at the given position (in sorted order) removed.
            auto without_fact(std::size_t index) const -> Instance;

            auto operator== (const Instance &) const -> bool = default;
    };

    struct Example
    {
        Instance instance;
        Tuple distinguished;

        auto arity() const -> std::size_t { return distinguished.size(); }

        /// Every distinguished value occurs in some fact.
        auto well_formed() const -> bool;

        /// Value occurrences in the instance plus the arity.
        auto size() const -> std::size_t { return instance.size() + arity(); }

        auto operator== (const Example &) const -> bool = default;
    };

    enum class Label
    {
        positive,
        negative
    };

    auto to_string(Label label) -> std::string_view;

    using LabeledExample = std::pair<Example, Label>;

    class LabeledExampleSet
    {
        private:
            std::optional<std::size_t> _arity;
            std::vector<LabeledExample> _items;

        public:
            LabeledExampleSet() = default;
            explicit LabeledExampleSet(std::size_t arity);

            /// Throws IllFormedExample, ArityMismatch or SchemaError if the example does not belong.
            auto add(Example example, Label label) -> void;

            auto items() const -> const std::vector<LabeledExample> & { return _items; }
            auto size() const -> std::size_t { return _items.size(); }
            auto empty() const -> bool { return _items.empty(); }
            auto arity() const -> std::optional<std::size_t> { return _arity; }

            auto positives() const -> std::vector<Example>;
            auto negatives() const -> std::vector<Example>;
            auto schema() const -> Schema;

            /// Sum of the example sizes.
            auto total_size() const -> std::size_t;
    };

    struct Atom
    {
        std::string relation;
        std::vector<Variable> args;

        auto operator<=> (const Atom &) const = default;
    };

    /// A conjunctive query q(head) :- body. The body is a set: sorted and duplicate-free.
    class CQ
    {
        private:
            std::vector<Variable> _head;
            std::vector<Atom> _body;

        public:
            /// Throws InvalidQuery if a head variable occurs in no atom, or SchemaError on
            /// inconsistent arities.
            CQ(std::vector<Variable> head, std::vector<Atom> body);

            auto head() const -> const std::vector<Variable> & { return _head; }
            auto body() const -> const std::vector<Atom> & { return _body; }
            auto arity() const -> std::size_t { return _head.size(); }
            auto atom_count() const -> std::size_t { return _body.size(); }
            auto variables() const -> std::vector<Variable>;
            auto schema() const -> Schema;

            auto operator== (const CQ &) const -> bool = default;
    };

    /// A non-empty disjunction of CQs of equal arity.
    class UCQ
    {
        private:
            std::vector<CQ> _disjuncts;

        public:
            explicit UCQ(std::vector<CQ> disjuncts);

            auto disjuncts() const -> const std::vector<CQ> & { return _disjuncts; }
            auto arity() const -> std::size_t { return _disjuncts.front().arity(); }
            auto atom_count() const -> std::size_t;

            auto operator== (const UCQ &) const -> bool = default;
    };

    using Query = std::variant<CQ, UCQ>;

    auto arity(const Query & query) -> std::size_t;
    auto atom_count(const Query & query) -> std::size_t;

    /// The example whose facts are the atoms of q and whose distinguished tuple is its head.
    auto canonical_instance(const CQ & query) -> Example;

    /// One variable x_a per value a, one atom per fact. Throws IllFormedExample.
    auto canonical_cq(const Example & example) -> CQ;

    /// A unary query R(x1,x2),...,R(xn-1,xn) with unary atoms of a single relation on the chain.
    auto is_path_cq(const CQ & query) -> bool;

    /// Renames values through the map; values absent from the map are kept.
    auto rename_values(const Example & example, const std::map<Value, Value> & renaming) -> Example;

    /// Renames the active domain to prefix0, prefix1, ... in sorted value order.
    auto compact_values(const Example & example, std::string_view prefix = "v") -> Example;
}

#endif
