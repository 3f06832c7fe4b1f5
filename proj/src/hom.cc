/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/hom.hh>
#include <cqlearn/tree_shape.hh>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <unordered_map>

using std::map;
using std::nullopt;
using std::optional;
using std::pair;
using std::set;
using std::size_t;
using std::string;
using std::uint8_t;
using std::vector;

namespace cqlearn
{
    auto Homomorphism::operator() (const Value & v) const -> const Value &
    {
        auto it = mapping.find(v);
        if (it == mapping.end())
            throw Error("homomorphism is undefined on " + v);
        return it->second;
    }

    namespace
    {
        struct Table
        {
            size_t arity = 0;
            vector<int> tuples;

            auto count() const -> size_t { return arity == 0 ? 0 : tuples.size() / arity; }
        };

        struct Constraint
        {
            const Table * table;
            vector<int> vars;
            vector<pair<size_t, size_t> > equal_positions;
        };

        class Solver
        {
            private:
                int _n, _m;
                bool _injective;
                vector<uint8_t> _dom;
                vector<int> _size;
                vector<pair<int, int> > _trail;
                vector<Constraint> _cons;
                vector<vector<int> > _incident;
                vector<uint8_t> _support;
                std::deque<int> _queue;
                vector<uint8_t> _queued;

                auto in(int var, int value) const -> bool
                {
                    return _dom[size_t(var) * _m + value];
                }

                auto remove(int var, int value) -> void
                {
                    _dom[size_t(var) * _m + value] = 0;
                    --_size[var];
                    _trail.emplace_back(var, value);
                }

                auto enqueue_incident(int var, int except = -1) -> void
                {
                    for (int c : _incident[var])
                        if (c != except && ! _queued[c]) {
                            _queued[c] = 1;
                            _queue.push_back(c);
                        }
                }

                auto clear_queue() -> void
                {
                    for (int c : _queue)
                        _queued[c] = 0;
                    _queue.clear();
                }

                auto undo(size_t mark) -> void
                {
                    while (_trail.size() > mark) {
                        auto [var, value] = _trail.back();
                        _trail.pop_back();
                        _dom[size_t(var) * _m + value] = 1;
                        ++_size[var];
                    }
                }

                // generalised arc consistency for one source fact
                auto revise(int c) -> bool
                {
                    auto & con = _cons[c];
                    size_t arity = con.vars.size();
                    auto & tuples = con.table->tuples;
                    std::fill(_support.begin(), _support.begin() + arity * _m, 0);

                    for (size_t t = 0 ; t < tuples.size() ; t += arity) {
                        bool ok = true;
                        for (size_t i = 0 ; ok && i < arity ; ++i)
                            ok = in(con.vars[i], tuples[t + i]);
                        for (size_t e = 0 ; ok && e < con.equal_positions.size() ; ++e)
                            ok = tuples[t + con.equal_positions[e].first] == tuples[t + con.equal_positions[e].second];
                        if (ok)
                            for (size_t i = 0 ; i < arity ; ++i)
                                _support[i * _m + tuples[t + i]] = 1;
                    }

                    for (size_t i = 0 ; i < arity ; ++i) {
                        int var = con.vars[i];
                        bool changed = false;
                        for (int a = 0 ; a < _m ; ++a)
                            if (in(var, a) && ! _support[i * _m + a]) {
                                remove(var, a);
                                changed = true;
                            }
                        if (_size[var] == 0)
                            return false;
                        if (changed)
                            enqueue_incident(var, c);
                    }
                    return true;
                }

                auto enforce_distinct() -> bool
                {
                    bool changed = true;
                    while (changed) {
                        changed = false;
                        for (int v = 0 ; v < _n ; ++v) {
                            if (_size[v] != 1)
                                continue;
                            int a = value_of(v);
                            for (int u = 0 ; u < _n ; ++u)
                                if (u != v && in(u, a)) {
                                    remove(u, a);
                                    if (_size[u] == 0)
                                        return false;
                                    enqueue_incident(u);
                                    changed = true;
                                }
                        }
                        if (! _queue.empty() && ! drain())
                            return false;
                    }
                    return true;
                }

                auto drain() -> bool
                {
                    while (! _queue.empty()) {
                        int c = _queue.front();
                        _queue.pop_front();
                        _queued[c] = 0;
                        if (! revise(c)) {
                            clear_queue();
                            return false;
                        }
                    }
                    return true;
                }

                auto propagate() -> bool
                {
                    if (! drain())
                        return false;
                    if (_injective && ! enforce_distinct()) {
                        clear_queue();
                        return false;
                    }
                    return true;
                }

                auto value_of(int var) const -> int
                {
                    for (int a = 0 ; a < _m ; ++a)
                        if (in(var, a))
                            return a;
                    return -1;
                }

                auto search(const vector<int> & vars) -> bool
                {
                    int best = -1;
                    for (int v : vars) {
                        if (_size[v] <= 1)
                            continue;
                        if (best == -1 || _size[v] < _size[best]
                                || (_size[v] == _size[best] && _incident[v].size() > _incident[best].size()))
                            best = v;
                    }
                    if (best == -1)
                        return true;

                    vector<int> candidates;
                    for (int a = 0 ; a < _m ; ++a)
                        if (in(best, a))
                            candidates.push_back(a);

                    for (int a : candidates) {
                        size_t mark = _trail.size();
                        for (int b : candidates)
                            if (b != a)
                                remove(best, b);
                        enqueue_incident(best);
                        if (propagate() && search(vars))
                            return true;
                        undo(mark);
                    }
                    return false;
                }

            public:
                Solver(int n, int m, vector<Constraint> cons, bool injective) :
                    _n(n),
                    _m(m),
                    _injective(injective),
                    _dom(size_t(n) * m, 1),
                    _size(n, m),
                    _cons(std::move(cons)),
                    _incident(n),
                    _queued(_cons.size(), 0)
                {
                    size_t max_arity = 0;
                    for (size_t c = 0 ; c < _cons.size() ; ++c) {
                        auto & vars = _cons[c].vars;
                        max_arity = std::max(max_arity, vars.size());
                        for (size_t i = 0 ; i < vars.size() ; ++i) {
                            if (std::find(vars.begin(), vars.begin() + i, vars[i]) == vars.begin() + i)
                                _incident[vars[i]].push_back(int(c));
                            for (size_t j = 0 ; j < i ; ++j)
                                if (vars[i] == vars[j])
                                    _cons[c].equal_positions.emplace_back(j, i);
                        }
                    }
                    _support.assign(max_arity * m, 0);
                }

                auto fix(int var, int value) -> bool
                {
                    if (! in(var, value))
                        return false;
                    for (int a = 0 ; a < _m ; ++a)
                        if (a != value && in(var, a))
                            remove(var, a);
                    return true;
                }

                auto solve() -> optional<vector<int> >
                {
                    if (_n > 0 && _m == 0)
                        return nullopt;

                    for (size_t c = 0 ; c < _cons.size() ; ++c) {
                        _queued[c] = 1;
                        _queue.push_back(int(c));
                    }
                    if (! propagate())
                        return nullopt;

                    vector<vector<int> > components;
                    if (_injective) {
                        components.emplace_back(_n);
                        std::iota(components.back().begin(), components.back().end(), 0);
                    }
                    else {
                        vector<int> parent(_n);
                        std::iota(parent.begin(), parent.end(), 0);
                        auto find = [&] (int x) {
                            while (parent[x] != x)
                                x = parent[x] = parent[parent[x]];
                            return x;
                        };
                        for (auto & con : _cons)
                            for (int v : con.vars)
                                parent[find(v)] = find(con.vars.front());
                        map<int, vector<int> > by_root;
                        for (int v = 0 ; v < _n ; ++v)
                            by_root[find(v)].push_back(v);
                        for (auto & [_, vars] : by_root)
                            components.push_back(std::move(vars));
                    }

                    for (auto & vars : components)
                        if (! search(vars))
                            return nullopt;

                    vector<int> result(_n);
                    for (int v = 0 ; v < _n ; ++v)
                        result[v] = value_of(v);
                    return result;
                }
        };

        auto check_compatible(const Schema & a, const Schema & b) -> void
        {
            if (! a.compatible_with(b))
                throw SchemaError("source and target use a relation with different arities");
        }
    }

    struct IndexedInstance::Data
    {
        vector<Value> values;
        std::unordered_map<Value, int> ids;
        map<string, Table> tables;
        Schema schema;
    };

    namespace
    {
        auto build_index(const Instance & instance, const Tuple & extra_values) -> std::shared_ptr<IndexedInstance::Data>
        {
            auto data = std::make_shared<IndexedInstance::Data>();
            set<Value> values;
            for (auto & f : instance.facts())
                values.insert(f.args.begin(), f.args.end());
            values.insert(extra_values.begin(), extra_values.end());
            data->values.assign(values.begin(), values.end());
            for (size_t i = 0 ; i < data->values.size() ; ++i)
                data->ids.emplace(data->values[i], int(i));
            for (auto & f : instance.facts()) {
                auto & table = data->tables[f.relation];
                table.arity = f.args.size();
                for (auto & v : f.args)
                    table.tuples.push_back(data->ids.at(v));
            }
            data->schema = instance.schema();
            return data;
        }
    }

    IndexedInstance::IndexedInstance(const Instance & instance, const Tuple & extra_values) :
        _data(build_index(instance, extra_values))
    {
    }

    auto IndexedInstance::active_domain() const -> const vector<Value> &
    {
        return _data->values;
    }

    namespace
    {
        auto search_homomorphism(const IndexedInstance::Data & target, const Example & source,
                const Tuple & tuple, bool injective) -> optional<Homomorphism>;
    }

    auto IndexedInstance::find(const Example & source, const Tuple & tuple) const -> optional<Homomorphism>
    {
        return search_homomorphism(*_data, source, tuple, false);
    }

    namespace
    {
        auto search_homomorphism(const IndexedInstance::Data & target, const Example & source,
                const Tuple & tuple, bool injective) -> optional<Homomorphism>
        {
            if (source.arity() != tuple.size())
                throw ArityMismatch("source has arity " + std::to_string(source.arity())
                        + " but the target tuple has " + std::to_string(tuple.size()) + " values");
            check_compatible(source.instance.schema(), target.schema);

            set<Value> source_values;
            for (auto & f : source.instance.facts())
                source_values.insert(f.args.begin(), f.args.end());
            source_values.insert(source.distinguished.begin(), source.distinguished.end());
            vector<Value> vars{source_values.begin(), source_values.end()};
            auto var_id = [&] (const Value & v) {
                return int(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
            };

            static const Table empty_table;
            vector<Constraint> cons;
            cons.reserve(source.instance.fact_count());
            for (auto & f : source.instance.facts()) {
                auto it = target.tables.find(f.relation);
                if (it == target.tables.end())
                    return nullopt;
                Constraint c{&it->second, {}, {}};
                for (auto & v : f.args)
                    c.vars.push_back(var_id(v));
                cons.push_back(std::move(c));
            }

            Solver solver(int(vars.size()), int(target.values.size()), std::move(cons), injective);
            for (size_t i = 0 ; i < tuple.size() ; ++i) {
                auto it = target.ids.find(tuple[i]);
                if (it == target.ids.end() || ! solver.fix(var_id(source.distinguished[i]), it->second))
                    return nullopt;
            }

            auto assignment = solver.solve();
            if (! assignment)
                return nullopt;

            Homomorphism h;
            for (size_t v = 0 ; v < vars.size() ; ++v)
                h.mapping.emplace(vars[v], target.values[(*assignment)[v]]);
            return h;
        }
    }

    auto find_homomorphism(const Example & source, const Example & target) -> optional<Homomorphism>
    {
        if (source.arity() != target.arity())
            throw ArityMismatch("examples have arities " + std::to_string(source.arity()) + " and "
                    + std::to_string(target.arity()));
        return IndexedInstance{target.instance, target.distinguished}.find(source, target.distinguished);
    }

    auto find_isomorphism(const Example & source, const Example & target) -> optional<Homomorphism>
    {
        if (source.arity() != target.arity())
            throw ArityMismatch("examples have arities " + std::to_string(source.arity()) + " and "
                    + std::to_string(target.arity()));
        if (source.instance.fact_count() != target.instance.fact_count())
            return nullopt;

        auto values = [] (const Example & e) {
            auto d = e.instance.active_domain();
            set<Value> s{d.begin(), d.end()};
            s.insert(e.distinguished.begin(), e.distinguished.end());
            return s.size();
        };
        if (values(source) != values(target))
            return nullopt;

        auto data = build_index(target.instance, target.distinguished);
        return search_homomorphism(*data, source, target.distinguished, true);
    }

    auto is_homomorphism(const Homomorphism & h, const Example & source, const Example & target) -> bool
    {
        if (source.arity() != target.arity())
            return false;
        for (size_t i = 0 ; i < source.arity() ; ++i) {
            auto it = h.mapping.find(source.distinguished[i]);
            if (it == h.mapping.end() || it->second != target.distinguished[i])
                return false;
        }
        for (auto & f : source.instance.facts()) {
            Fact image{f.relation, {}};
            for (auto & v : f.args) {
                auto it = h.mapping.find(v);
                if (it == h.mapping.end())
                    return false;
                image.args.push_back(it->second);
            }
            if (! target.instance.contains(image))
                return false;
        }
        return true;
    }

    auto compose(const Homomorphism & first, const Homomorphism & second) -> Homomorphism
    {
        Homomorphism result;
        for (auto & [from, via] : first.mapping)
            result.mapping.emplace(from, second(via));
        return result;
    }

    auto evaluate(const CQ & query, const Example & example) -> Label
    {
        if (query.arity() != example.arity())
            throw ArityMismatch("query of arity " + std::to_string(query.arity()) + " evaluated on an example of arity "
                    + std::to_string(example.arity()));
        return find_homomorphism(canonical_instance(query), example) ? Label::positive : Label::negative;
    }

    auto evaluate(const UCQ & query, const Example & example) -> Label
    {
        if (query.arity() != example.arity())
            throw ArityMismatch("query of arity " + std::to_string(query.arity()) + " evaluated on an example of arity "
                    + std::to_string(example.arity()));
        IndexedInstance index{example.instance, example.distinguished};
        for (auto & q : query.disjuncts())
            if (index.find(canonical_instance(q), example.distinguished))
                return Label::positive;
        return Label::negative;
    }

    auto evaluate(const Query & query, const Example & example) -> Label
    {
        return std::visit([&] (const auto & q) { return evaluate(q, example); }, query);
    }

    auto evaluate_tree(const CQ & query, const Example & example) -> Label
    {
        if (query.arity() != example.arity())
            throw ArityMismatch("query of arity " + std::to_string(query.arity()) + " evaluated on an example of arity "
                    + std::to_string(example.arity()));
        if (! check_tree_shaped(canonical_instance(query).instance))
            throw NotTreeShaped("query is not tree-shaped");
        check_compatible(query.schema(), example.instance.schema());

        if (query.body().empty())
            return Label::positive;

        set<Value> value_set;
        for (auto & f : example.instance.facts())
            value_set.insert(f.args.begin(), f.args.end());
        value_set.insert(example.distinguished.begin(), example.distinguished.end());
        vector<Value> values{value_set.begin(), value_set.end()};
        size_t m = values.size();
        auto value_id = [&] (const Value & v) { return size_t(std::lower_bound(values.begin(), values.end(), v) - values.begin()); };

        optional<string> binary;
        for (auto & a : query.body())
            if (a.args.size() == 2)
                binary = a.relation;

        vector<pair<size_t, size_t> > edges;
        map<string, vector<uint8_t> > unary;
        for (auto & f : example.instance.facts()) {
            if (binary && f.relation == *binary)
                edges.emplace_back(value_id(f.args[0]), value_id(f.args[1]));
            else if (f.args.size() == 1) {
                auto & flags = unary[f.relation];
                flags.resize(m, 0);
                flags[value_id(f.args[0])] = 1;
            }
        }

        auto variables = query.variables();
        size_t n = variables.size();
        auto var_id = [&] (const Variable & v) { return size_t(std::lower_bound(variables.begin(), variables.end(), v) - variables.begin()); };

        // (neighbour, forward) where forward means R(this, neighbour)
        vector<vector<pair<size_t, bool> > > adjacent(n);
        vector<vector<uint8_t> > sat(n, vector<uint8_t>(m, 1));
        for (auto & a : query.body()) {
            if (a.args.size() == 2) {
                auto u = var_id(a.args[0]), v = var_id(a.args[1]);
                adjacent[u].emplace_back(v, true);
                adjacent[v].emplace_back(u, false);
            }
            else {
                auto it = unary.find(a.relation);
                auto & s = sat[var_id(a.args[0])];
                for (size_t i = 0 ; i < m ; ++i)
                    s[i] = s[i] && it != unary.end() && it->second[i];
            }
        }

        vector<optional<size_t> > pinned(n);
        for (size_t i = 0 ; i < query.arity() ; ++i) {
            auto x = var_id(query.head()[i]);
            auto a = value_id(example.distinguished[i]);
            if (pinned[x] && *pinned[x] != a)
                return Label::negative;
            pinned[x] = a;
        }
        for (size_t x = 0 ; x < n ; ++x)
            if (pinned[x])
                for (size_t i = 0 ; i < m ; ++i)
                    sat[x][i] = sat[x][i] && i == *pinned[x];

        vector<uint8_t> visited(n, 0);
        vector<size_t> roots;
        for (auto & x : query.head())
            roots.push_back(var_id(x));
        for (size_t x = 0 ; x < n ; ++x)
            roots.push_back(x);

        vector<uint8_t> mark(m);
        for (auto root : roots) {
            if (visited[root])
                continue;

            // breadth-first order over the undirected tree, then fold children into parents
            vector<size_t> order{root};
            vector<pair<size_t, bool> > parent(n);
            visited[root] = 1;
            for (size_t i = 0 ; i < order.size() ; ++i)
                for (auto [w, forward] : adjacent[order[i]])
                    if (! visited[w]) {
                        visited[w] = 1;
                        parent[w] = {order[i], forward};
                        order.push_back(w);
                    }

            for (size_t i = order.size() ; i-- > 1 ; ) {
                auto child = order[i];
                auto [p, forward] = parent[child];
                std::fill(mark.begin(), mark.end(), 0);
                for (auto [a, b] : edges) {
                    if (forward && sat[child][b])
                        mark[a] = 1;
                    else if (! forward && sat[child][a])
                        mark[b] = 1;
                }
                for (size_t v = 0 ; v < m ; ++v)
                    sat[p][v] = sat[p][v] && mark[v];
            }

            if (std::none_of(sat[root].begin(), sat[root].end(), [] (uint8_t b) { return b; }))
                return Label::negative;
        }
        return Label::positive;
    }

    auto all_answers(const CQ & query, const Instance & instance) -> set<Tuple>
    {
        set<Tuple> result;
        IndexedInstance index{instance};
        auto source = canonical_instance(query);
        auto & domain = index.active_domain();
        size_t k = query.arity();

        if (k == 0) {
            if (index.find(source, {}))
                result.insert(Tuple{});
            return result;
        }
        if (domain.empty())
            return result;

        vector<size_t> counter(k, 0);
        while (true) {
            Tuple t;
            for (auto c : counter)
                t.push_back(domain[c]);
            if (index.find(source, t))
                result.insert(std::move(t));

            size_t i = 0;
            while (i < k && ++counter[i] == domain.size())
                counter[i++] = 0;
            if (i == k)
                break;
        }
        return result;
    }

    auto connected_components(const CQ & query) -> vector<CQFragment>
    {
        auto & body = query.body();
        vector<size_t> parent(body.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&] (size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };

        map<Variable, size_t> first_atom;
        for (size_t i = 0 ; i < body.size() ; ++i)
            for (auto & x : body[i].args) {
                auto [it, inserted] = first_atom.emplace(x, i);
                if (! inserted)
                    parent[find(i)] = find(it->second);
            }

        map<size_t, size_t> fragment_of_root;
        vector<CQFragment> result;
        for (size_t i = 0 ; i < body.size() ; ++i) {
            auto [it, inserted] = fragment_of_root.emplace(find(i), result.size());
            if (inserted)
                result.emplace_back();
            result[it->second].atoms.push_back(body[i]);
        }
        for (auto & x : query.head()) {
            auto & fragment = result[fragment_of_root.at(find(first_atom.at(x)))];
            if (std::find(fragment.head_variables.begin(), fragment.head_variables.end(), x) == fragment.head_variables.end())
                fragment.head_variables.push_back(x);
        }
        return result;
    }
}
