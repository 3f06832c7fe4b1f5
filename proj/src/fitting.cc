/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/fitting.hh>
#include <cqlearn/product.hh>

#include <algorithm>
#include <functional>
#include <map>

using std::map;
using std::optional;
using std::size_t;
using std::string;
using std::vector;

namespace cqlearn
{
    namespace
    {
        class IndexedExamples
        {
            private:
                vector<IndexedInstance> _indexes;
                vector<const LabeledExample *> _items;

            public:
                explicit IndexedExamples(const LabeledExampleSet & examples)
                {
                    for (auto & item : examples.items()) {
                        _indexes.emplace_back(item.first.instance, item.first.distinguished);
                        _items.push_back(&item);
                    }
                }

                auto fits(const CQ & query) const -> bool
                {
                    auto source = canonical_instance(query);
                    for (size_t i = 0 ; i < _items.size() ; ++i) {
                        auto & [e, label] = *_items[i];
                        bool positive = _indexes[i].find(source, e.distinguished).has_value();
                        if (positive != (label == Label::positive))
                            return false;
                    }
                    return true;
                }
        };

        auto check_arity(size_t query_arity, const LabeledExampleSet & examples) -> void
        {
            if (examples.arity() && *examples.arity() != query_arity)
                throw ArityMismatch("query of arity " + std::to_string(query_arity) + " checked against examples of arity "
                        + std::to_string(*examples.arity()));
        }
    }

    auto verify_fit(const Query & query, const LabeledExampleSet & examples) -> bool
    {
        check_arity(arity(query), examples);
        return std::all_of(examples.items().begin(), examples.items().end(),
                [&] (const LabeledExample & item) { return evaluate(query, item.first) == item.second; });
    }

    auto verify_fit(const CQ & query, const LabeledExampleSet & examples) -> bool
    {
        return verify_fit(Query{query}, examples);
    }

    auto fitting_exists(const LabeledExampleSet & examples, const FittingOptions & options) -> FittingReport
    {
        auto positives = examples.positives();
        if (positives.empty())
            throw NoPositiveExamples("deciding fitting needs at least one positive example");

        FittingReport report;
        optional<Example> product = positives.front();
        for (size_t i = 1 ; product && i < positives.size() ; ++i) {
            if (product->instance.fact_count() * positives[i].instance.fact_count() > options.max_product_facts)
                throw Error("iterated product would exceed " + std::to_string(options.max_product_facts) + " facts");
            product = product_examples(*product, positives[i]);
            if (product)
                product = compact_values(*product, "p");
        }
        if (! product)
            return report;

        for (size_t i = 0 ; i < examples.size() ; ++i) {
            auto & [e, label] = examples.items()[i];
            if (label != Label::negative)
                continue;
            if (auto h = find_homomorphism(*product, e)) {
                report.certificate = FittingCertificate{i, std::move(*h)};
                report.product = std::move(product);
                return report;
            }
        }

        report.exists = true;
        report.witness = canonical_cq(*product);
        report.product = std::move(product);
        return report;
    }

    namespace
    {
        auto relabelled(const CQ & query, const vector<const Atom *> & order) -> string
        {
            map<Variable, size_t> ids;
            auto id = [&] (const Variable & x) {
                return std::to_string(ids.try_emplace(x, ids.size()).first->second);
            };

            string head = "(";
            for (auto & x : query.head())
                head += id(x) + ",";
            vector<string> atoms;
            for (auto * a : order) {
                string s = a->relation + "(";
                for (auto & x : a->args)
                    s += id(x) + ",";
                atoms.push_back(s + ")");
            }
            std::sort(atoms.begin(), atoms.end());
            string result = head + ")";
            for (auto & s : atoms)
                result += " " + s;
            return result;
        }
    }

    auto canonical_form(const CQ & query) -> string
    {
        // isomorphisms preserve relation names, so permuting within each relation's block suffices
        vector<const Atom *> order;
        vector<std::pair<size_t, size_t> > blocks;
        size_t permutations = 1;
        for (auto & a : query.body()) {
            if (blocks.empty() || order[blocks.back().first]->relation != a.relation)
                blocks.emplace_back(order.size(), order.size());
            order.push_back(&a);
            ++blocks.back().second;
            permutations *= blocks.back().second - blocks.back().first;
            permutations = std::min<size_t>(permutations, 1'000'000);
        }

        if (query.atom_count() > 7 || permutations > 5040)
            return relabelled(query, order);

        auto less_atom = [] (const Atom * a, const Atom * b) { return *a < *b; };
        string best = relabelled(query, order);
        std::function<void (size_t)> visit = [&] (size_t block) {
            if (block == blocks.size()) {
                best = std::min(best, relabelled(query, order));
                return;
            }
            auto first = order.begin() + blocks[block].first, last = order.begin() + blocks[block].second;
            std::sort(first, last, less_atom);
            do
                visit(block + 1);
            while (std::next_permutation(first, last, less_atom));
        };
        visit(0);
        return best;
    }

    auto enumerate_cqs(const Schema & schema, size_t arity, size_t atoms) -> vector<CQ>
    {
        vector<std::pair<string, size_t> > relations{schema.relations().begin(), schema.relations().end()};
        map<string, CQ> found;
        if (relations.empty() && atoms > 0)
            return {};

        vector<size_t> chosen;
        vector<size_t> slots;

        auto emit = [&] () {
            vector<Variable> head;
            for (size_t i = 0 ; i < arity ; ++i)
                head.push_back("x" + std::to_string(slots[i]));
            vector<Atom> body;
            size_t at = arity;
            for (auto r : chosen) {
                Atom a{relations[r].first, {}};
                for (size_t j = 0 ; j < relations[r].second ; ++j)
                    a.args.push_back("x" + std::to_string(slots[at++]));
                body.push_back(std::move(a));
            }
            for (auto & x : head) {
                bool used = std::any_of(body.begin(), body.end(), [&] (const Atom & a) {
                        return std::find(a.args.begin(), a.args.end(), x) != a.args.end(); });
                if (! used)
                    return;
            }
            CQ q{std::move(head), std::move(body)};
            if (q.atom_count() != atoms)
                return;
            auto form = canonical_form(q);
            found.try_emplace(std::move(form), std::move(q));
        };

        // restricted growth strings over all argument slots, head first
        std::function<void (size_t, size_t, size_t)> assign = [&] (size_t slot, size_t total, size_t next_id) {
            if (slot == total) {
                emit();
                return;
            }
            for (size_t v = 0 ; v <= next_id ; ++v) {
                slots[slot] = v;
                assign(slot + 1, total, std::max(next_id, v + 1));
            }
        };

        std::function<void (size_t)> choose = [&] (size_t from) {
            if (chosen.size() == atoms) {
                size_t total = arity;
                for (auto r : chosen)
                    total += relations[r].second;
                slots.assign(total, 0);
                assign(0, total, 0);
                return;
            }
            for (size_t r = from ; r < relations.size() ; ++r) {
                chosen.push_back(r);
                choose(r);
                chosen.pop_back();
            }
        };
        choose(0);

        vector<CQ> result;
        result.reserve(found.size());
        for (auto & [_, q] : found)
            result.push_back(std::move(q));
        return result;
    }

    auto smallest_fitting_enumeration(const LabeledExampleSet & examples, size_t max_atoms) -> optional<CQ>
    {
        size_t arity = examples.arity().value_or(0);
        auto schema = examples.schema();
        IndexedExamples indexed{examples};

        for (size_t atoms = arity == 0 ? 0 : 1 ; atoms <= max_atoms ; ++atoms)
            for (auto & q : enumerate_cqs(schema, arity, atoms))
                if (indexed.fits(q))
                    return q;
        return std::nullopt;
    }
}
