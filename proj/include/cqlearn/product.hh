/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_PRODUCT_HH
#define CQLEARN_GUARD_PRODUCT_HH 1

#include <cqlearn/hom.hh>
#include <cqlearn/model.hh>

#include <optional>

namespace cqlearn
{
    /// The value ⟨left,right⟩ of a direct product, spelled "<left,right>".
    auto product_value(const Value & left, const Value & right) -> Value;

    /// R(<a1,b1>,...,<an,bn>) for every pair of facts R(a) in left and R(b) in right.
    /// Throws SchemaError if the schemas disagree on an arity.
    auto product_instances(const Instance & left, const Instance & right) -> Instance;

    /// The product with the pairwise distinguished tuple, or nothing when that tuple
    /// leaves the product's active domain. Throws ArityMismatch or SchemaError.
    auto product_examples(const Example & left, const Example & right) -> std::optional<Example>;

    struct ProductWithProjections
    {
        Example product;
        Homomorphism to_left;
        Homomorphism to_right;
    };

    auto product_with_projections(const Example & left, const Example & right) -> std::optional<ProductWithProjections>;
}

#endif
