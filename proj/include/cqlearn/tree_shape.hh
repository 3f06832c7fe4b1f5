/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_TREE_SHAPE_HH
#define CQLEARN_GUARD_TREE_SHAPE_HH 1

#include <cqlearn/model.hh>

#include <map>
#include <optional>
#include <variant>

namespace cqlearn
{
    /// level(b) = level(a) + 1 for every binary fact R(a,b); each component's root sits at 0.
    struct LevelAssignment
    {
        std::map<Value, std::size_t> levels;
    };

    /**
     * Recognises tree-shaped instances over one binary relation plus unary
     * relations: a consistent leveling exists and no value has two distinct
     * predecessors. Levels are assigned per connected component.
     *
     * Throws SchemaError for relations of arity above 2 or more than one binary relation.
     */
    auto check_tree_shaped(const Instance & instance) -> std::optional<LevelAssignment>;

    auto is_tree_shaped(const CQ & query) -> bool;

    struct TreeCQ
    {
        CQ query;
        LevelAssignment levels;
    };

    struct UnsatisfiableOnTrees
    {
    };

    using TreeReduction = std::variant<TreeCQ, UnsatisfiableOnTrees>;

    /**
     * Identifies u and u' whenever R(u,v), R(u',v') are atoms with v and v'
     * already identified, up to a fixpoint, and replaces each class by its
     * lexicographically least variable. A directed cycle in the result means
     * the query has no answers on any tree-shaped instance; otherwise the
     * result is tree-shaped and agrees with the input on all tree-shaped
     * instances.
     */
    auto quotient_to_tree(const CQ & query) -> TreeReduction;
}

#endif
