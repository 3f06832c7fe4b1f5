/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/tree_shape.hh>

#include <algorithm>
#include <set>

using std::map;
using std::nullopt;
using std::optional;
using std::set;
using std::size_t;
using std::string;
using std::vector;

namespace cqlearn
{
    namespace
    {
        auto binary_relation_of(const Schema & schema) -> optional<string>
        {
            optional<string> binary;
            for (auto & [name, arity] : schema.relations()) {
                if (arity > 2)
                    throw SchemaError("relation " + name + " has arity " + std::to_string(arity)
                            + "; only one binary relation and unary relations are supported");
                if (arity == 2) {
                    if (binary)
                        throw SchemaError("relations " + *binary + " and " + name
                                + " are both binary; only one binary relation is supported");
                    binary = name;
                }
            }
            return binary;
        }
    }

    auto check_tree_shaped(const Instance & instance) -> optional<LevelAssignment>
    {
        binary_relation_of(instance.schema());

        map<Value, vector<std::pair<Value, long> > > adjacent;
        map<Value, Value> predecessor;
        for (auto & f : instance.facts()) {
            for (auto & v : f.args)
                adjacent[v];
            if (f.args.size() != 2)
                continue;
            auto & a = f.args[0], & b = f.args[1];
            auto [it, inserted] = predecessor.emplace(b, a);
            if (! inserted && it->second != a)
                return nullopt;
            adjacent[a].emplace_back(b, 1);
            adjacent[b].emplace_back(a, -1);
        }

        map<Value, long> raw;
        LevelAssignment result;
        for (auto & [start, _] : adjacent) {
            if (raw.contains(start))
                continue;
            vector<Value> component{start};
            raw.emplace(start, 0);
            long lowest = 0;
            for (size_t i = 0 ; i < component.size() ; ++i) {
                auto v = component[i];
                long level = raw.at(v);
                for (auto & [w, delta] : adjacent.at(v)) {
                    auto [it, inserted] = raw.emplace(w, level + delta);
                    if (inserted) {
                        component.push_back(w);
                        lowest = std::min(lowest, level + delta);
                    }
                    else if (it->second != level + delta)
                        return nullopt;
                }
            }
            for (auto & v : component)
                result.levels.emplace(v, size_t(raw.at(v) - lowest));
        }
        return result;
    }

    auto is_tree_shaped(const CQ & query) -> bool
    {
        return check_tree_shaped(canonical_instance(query).instance).has_value();
    }

    namespace
    {
        class UnionFind
        {
            private:
                map<Variable, Variable> _parent;

            public:
                explicit UnionFind(const vector<Variable> & vars)
                {
                    for (auto & v : vars)
                        _parent.emplace(v, v);
                }

                auto find(const Variable & v) -> Variable
                {
                    auto root = v;
                    while (_parent.at(root) != root)
                        root = _parent.at(root);
                    for (auto x = v ; x != root ; ) {
                        auto next = _parent.at(x);
                        _parent[x] = root;
                        x = next;
                    }
                    return root;
                }

                /// The lexicographically smaller root survives, so roots are class minima.
                auto unite(const Variable & a, const Variable & b) -> bool
                {
                    auto ra = find(a), rb = find(b);
                    if (ra == rb)
                        return false;
                    if (rb < ra)
                        std::swap(ra, rb);
                    _parent[rb] = ra;
                    return true;
                }
        };

        auto has_directed_cycle(const vector<Atom> & body) -> bool
        {
            map<Variable, vector<Variable> > successors;
            for (auto & a : body)
                if (a.args.size() == 2)
                    successors[a.args[0]].push_back(a.args[1]);

            // 0 unvisited, 1 on the stack, 2 done
            map<Variable, int> state;
            for (auto & [start, _] : successors) {
                if (state[start] != 0)
                    continue;
                vector<std::pair<Variable, size_t> > stack{{start, 0}};
                state[start] = 1;
                while (! stack.empty()) {
                    auto & [v, next] = stack.back();
                    auto it = successors.find(v);
                    if (it == successors.end() || next == it->second.size()) {
                        state[v] = 2;
                        stack.pop_back();
                        continue;
                    }
                    auto w = it->second[next++];
                    if (state[w] == 1)
                        return true;
                    if (state[w] == 0) {
                        state[w] = 1;
                        stack.emplace_back(w, 0);
                    }
                }
            }
            return false;
        }
    }

    auto quotient_to_tree(const CQ & query) -> TreeReduction
    {
        binary_relation_of(query.schema());

        UnionFind classes{query.variables()};
        vector<const Atom *> binary;
        for (auto & a : query.body())
            if (a.args.size() == 2)
                binary.push_back(&a);

        bool changed = true;
        while (changed) {
            changed = false;
            map<Variable, Variable> source_of_target_class;
            for (auto * a : binary) {
                auto [it, inserted] = source_of_target_class.emplace(classes.find(a->args[1]), a->args[0]);
                if (! inserted && classes.unite(it->second, a->args[0]))
                    changed = true;
            }
        }

        vector<Atom> body;
        for (auto & a : query.body()) {
            Atom b{a.relation, {}};
            for (auto & x : a.args)
                b.args.push_back(classes.find(x));
            body.push_back(std::move(b));
        }
        vector<Variable> head;
        for (auto & x : query.head())
            head.push_back(classes.find(x));

        if (has_directed_cycle(body))
            return UnsatisfiableOnTrees{};

        CQ reduced{std::move(head), std::move(body)};
        auto levels = check_tree_shaped(canonical_instance(reduced).instance);
        if (! levels)
            throw Error("quotient without a directed cycle is not tree-shaped");
        return TreeCQ{std::move(reduced), std::move(*levels)};
    }
}
