/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_FITTING_HH
#define CQLEARN_GUARD_FITTING_HH 1

#include <cqlearn/hom.hh>
#include <cqlearn/model.hh>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cqlearn
{
    /// True iff the query labels every example of the set as the set does. Throws ArityMismatch.
    auto verify_fit(const Query & query, const LabeledExampleSet & examples) -> bool;
    auto verify_fit(const CQ & query, const LabeledExampleSet & examples) -> bool;

    struct FittingCertificate
    {
        /// Position of the negative example within the set's items.
        std::size_t negative_index;
        Homomorphism homomorphism;
    };

    struct FittingReport
    {
        bool exists = false;
        /// The iterated product of the positives, when well-formed.
        std::optional<Example> product;
        std::optional<CQ> witness;
        std::optional<FittingCertificate> certificate;
    };

    struct FittingOptions
    {
        /// Abort (throwing Error) once the iterated product grows past this many facts.
        std::size_t max_product_facts = 2'000'000;
    };

    /**
     * Decides whether some CQ fits the examples via the product of all positive
     * examples: a fitting CQ exists iff that product is well-formed and maps to
     * no negative example. Exponential in the number of positives.
     *
     * Throws NoPositiveExamples.
     */
    auto fitting_exists(const LabeledExampleSet & examples, const FittingOptions & options = {}) -> FittingReport;

    /// A complete isomorphism invariant for queries of at most 7 atoms; larger queries
    /// get a cheaper invariant that may separate isomorphic queries.
    auto canonical_form(const CQ & query) -> std::string;

    /// All CQs with exactly the given number of atoms over the schema, one per
    /// isomorphism class, sorted by canonical form. Variables are named x0, x1, ...
    auto enumerate_cqs(const Schema & schema, std::size_t arity, std::size_t atoms) -> std::vector<CQ>;

    /// The first fitting CQ in (atom count, canonical form) order, up to max_atoms atoms.
    auto smallest_fitting_enumeration(const LabeledExampleSet & examples, std::size_t max_atoms) -> std::optional<CQ>;
}

#endif
