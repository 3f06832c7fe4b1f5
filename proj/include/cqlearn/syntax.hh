/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_SYNTAX_HH
#define CQLEARN_GUARD_SYNTAX_HH 1

#include <cqlearn/model.hh>

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cqlearn
{
    /*
     * Text formats. Identifiers are runs of [A-Za-z0-9_] plus bracketed groups
     * "<...>" inside which commas are allowed, so product values such as
     * "<a,<b,c>>" are single identifiers. '#' starts a comment.
     *
     *   instance:     rel R/2            (optional declarations)
     *                 R(a,b). P(b).
     *   query:        q(x) :- R(x,y), P(y).     q() :- R(x,x).
     *                 several rules with the same head name and arity form a UCQ
     *   example set:  instance I1 { R(a,b). P(b). }
     *                 + I1 (a)
     *                 - I1 (b)
     *   example:      ? (a)              (membership-oracle request; facts follow,
     *                 R(a,b).             one per line, ended by a blank line)
     */

    auto to_text(const Instance & instance) -> std::string;
    auto to_text(const CQ & query, std::string_view name = "q") -> std::string;
    auto to_text(const UCQ & query, std::string_view name = "q") -> std::string;
    auto to_text(const Query & query, std::string_view name = "q") -> std::string;
    auto to_text(const LabeledExampleSet & examples) -> std::string;
    auto to_text(const Example & example) -> std::string;
    auto to_text(const Tuple & tuple) -> std::string;

    auto parse_instance(std::string_view text) -> Instance;
    auto parse_query(std::string_view text) -> Query;
    auto parse_cq(std::string_view text) -> CQ;
    auto parse_example(std::string_view text) -> Example;
    auto parse_tuple(std::string_view text) -> Tuple;

    struct LabeledReference
    {
        std::string instance;
        Tuple tuple;
        Label label;
    };

    /// Named instances plus labeled tuples referring to them.
    struct Workspace
    {
        std::map<std::string, Instance> instances;
        std::vector<LabeledReference> labeled;

        auto example_set() const -> LabeledExampleSet;
    };

    auto parse_workspace(std::string_view text) -> Workspace;
    auto parse_example_set(std::string_view text) -> LabeledExampleSet;

    /// Length in bits of the canonical serialization.
    auto bit_size(const CQ & query) -> std::size_t;
    auto bit_size(const Query & query) -> std::size_t;
}

#endif
