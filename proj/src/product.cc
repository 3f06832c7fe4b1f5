/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/product.hh>

#include <map>
#include <set>

using std::map;
using std::nullopt;
using std::optional;
using std::pair;
using std::size_t;
using std::string;
using std::vector;

namespace cqlearn
{
    auto product_value(const Value & left, const Value & right) -> Value
    {
        return "<" + left + "," + right + ">";
    }

    namespace
    {
        struct Paired
        {
            Instance instance;
            map<pair<Value, Value>, Value> names;
        };

        auto pair_up(const Instance & left, const Instance & right) -> Paired
        {
            if (! left.schema().compatible_with(right.schema()))
                throw SchemaError("cannot multiply instances whose schemas disagree on an arity");

            map<string, vector<const Fact *> > right_by_relation;
            for (auto & f : right.facts())
                right_by_relation[f.relation].push_back(&f);

            Paired result;
            auto name = [&] (const Value & a, const Value & b) -> const Value & {
                auto [it, inserted] = result.names.try_emplace({a, b});
                if (inserted)
                    it->second = product_value(a, b);
                return it->second;
            };

            vector<Fact> facts;
            for (auto & f : left.facts()) {
                auto it = right_by_relation.find(f.relation);
                if (it == right_by_relation.end())
                    continue;
                for (auto * g : it->second) {
                    Fact p{f.relation, {}};
                    p.args.reserve(f.args.size());
                    for (size_t i = 0 ; i < f.args.size() ; ++i)
                        p.args.push_back(name(f.args[i], g->args[i]));
                    facts.push_back(std::move(p));
                }
            }

            // names with unbalanced brackets could collide; refuse rather than merge values
            std::set<Value> distinct;
            for (auto & [_, n] : result.names)
                distinct.insert(n);
            if (distinct.size() != result.names.size())
                throw Error("product value names collide; values must not contain unbalanced '<' or '>'");

            result.instance = Instance{left.schema().merged_with(right.schema()), std::move(facts)};
            return result;
        }
    }

    auto product_instances(const Instance & left, const Instance & right) -> Instance
    {
        return pair_up(left, right).instance;
    }

    auto product_with_projections(const Example & left, const Example & right) -> optional<ProductWithProjections>
    {
        if (left.arity() != right.arity())
            throw ArityMismatch("cannot multiply examples of arities " + std::to_string(left.arity()) + " and "
                    + std::to_string(right.arity()));

        auto paired = pair_up(left.instance, right.instance);
        Tuple distinguished;
        for (size_t i = 0 ; i < left.arity() ; ++i) {
            auto it = paired.names.find({left.distinguished[i], right.distinguished[i]});
            if (it == paired.names.end())
                return nullopt;
            distinguished.push_back(it->second);
        }

        ProductWithProjections result{Example{std::move(paired.instance), std::move(distinguished)}, {}, {}};
        for (auto & [components, n] : paired.names) {
            result.to_left.mapping.emplace(n, components.first);
            result.to_right.mapping.emplace(n, components.second);
        }
        return result;
    }

    auto product_examples(const Example & left, const Example & right) -> optional<Example>
    {
        auto result = product_with_projections(left, right);
        if (! result)
            return nullopt;
        return std::move(result->product);
    }
}
