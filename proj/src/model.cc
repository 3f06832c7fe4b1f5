/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/model.hh>

#include <algorithm>
#include <set>

using std::map;
using std::optional;
using std::set;
using std::size_t;
using std::string;
using std::string_view;
using std::vector;

namespace cqlearn
{
    Schema::Schema(std::initializer_list<std::pair<const string, size_t>> relations)
    {
        for (auto & [name, arity] : relations)
            add(name, arity);
    }

    auto Schema::add(const string & name, size_t arity) -> void
    {
        if (arity == 0)
            throw SchemaError("relation " + name + " has arity 0; nullary relations are unsupported");
        auto [it, inserted] = _relations.emplace(name, arity);
        if (! inserted && it->second != arity)
            throw SchemaError("relation " + name + " used with arities " + std::to_string(it->second)
                    + " and " + std::to_string(arity));
    }

    auto Schema::arity(const string & name) const -> optional<size_t>
    {
        auto it = _relations.find(name);
        if (it == _relations.end())
            return std::nullopt;
        return it->second;
    }

    auto Schema::compatible_with(const Schema & other) const -> bool
    {
        for (auto & [name, arity] : other._relations) {
            auto mine = this->arity(name);
            if (mine && *mine != arity)
                return false;
        }
        return true;
    }

    auto Schema::merged_with(const Schema & other) const -> Schema
    {
        Schema result = *this;
        for (auto & [name, arity] : other._relations)
            result.add(name, arity);
        return result;
    }

    namespace
    {
        auto normalise(vector<Fact> & facts) -> void
        {
            std::sort(facts.begin(), facts.end());
            facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
        }
    }

    Instance::Instance(vector<Fact> facts) :
        _facts(std::move(facts))
    {
        for (auto & f : _facts)
            _schema.add(f.relation, f.args.size());
        normalise(_facts);
    }

    Instance::Instance(Schema schema, vector<Fact> facts) :
        _schema(std::move(schema)),
        _facts(std::move(facts))
    {
        for (auto & f : _facts) {
            auto arity = _schema.arity(f.relation);
            if (! arity)
                throw SchemaError("relation " + f.relation + " is not in the schema");
            if (*arity != f.args.size())
                throw SchemaError("fact over " + f.relation + " has " + std::to_string(f.args.size())
                        + " arguments, expected " + std::to_string(*arity));
        }
        normalise(_facts);
    }

    auto Instance::contains(const Fact & fact) const -> bool
    {
        return std::binary_search(_facts.begin(), _facts.end(), fact);
    }

    auto Instance::active_domain() const -> vector<Value>
    {
        set<Value> values;
        for (auto & f : _facts)
            values.insert(f.args.begin(), f.args.end());
        return {values.begin(), values.end()};
    }

    auto Instance::in_active_domain(const Value & value) const -> bool
    {
        for (auto & f : _facts)
            if (std::find(f.args.begin(), f.args.end(), value) != f.args.end())
                return true;
        return false;
    }

    auto Instance::size() const -> size_t
    {
        size_t result = 0;
        for (auto & f : _facts)
            result += f.args.size();
        return result;
    }

    auto Instance::without_fact(size_t index) const -> Instance
    {
        Instance result;
        result._schema = _schema;
        result._facts.reserve(_facts.size() - 1);
        for (size_t i = 0 ; i < _facts.size() ; ++i)
            if (i != index)
                result._facts.push_back(_facts[i]);
        return result;
    }

    auto Example::well_formed() const -> bool
    {
        if (distinguished.empty())
            return true;
        set<Value> values;
        for (auto & f : instance.facts())
            values.insert(f.args.begin(), f.args.end());
        return std::all_of(distinguished.begin(), distinguished.end(),
                [&] (const Value & v) { return values.contains(v); });
    }

    auto to_string(Label label) -> string_view
    {
        return label == Label::positive ? "+" : "-";
    }

    LabeledExampleSet::LabeledExampleSet(size_t arity) :
        _arity(arity)
    {
    }

    auto LabeledExampleSet::add(Example example, Label label) -> void
    {
        if (! example.well_formed())
            throw IllFormedExample("labeled example has a distinguished value outside its active domain");
        if (_arity && *_arity != example.arity())
            throw ArityMismatch("example of arity " + std::to_string(example.arity())
                    + " added to a set of arity " + std::to_string(*_arity));
        for (auto & [other, _] : _items)
            if (! other.instance.schema().compatible_with(example.instance.schema()))
                throw SchemaError("example schema conflicts with the rest of the set");
        _arity = example.arity();
        _items.emplace_back(std::move(example), label);
    }

    auto LabeledExampleSet::positives() const -> vector<Example>
    {
        vector<Example> result;
        for (auto & [e, l] : _items)
            if (l == Label::positive)
                result.push_back(e);
        return result;
    }

    auto LabeledExampleSet::negatives() const -> vector<Example>
    {
        vector<Example> result;
        for (auto & [e, l] : _items)
            if (l == Label::negative)
                result.push_back(e);
        return result;
    }

    auto LabeledExampleSet::schema() const -> Schema
    {
        Schema result;
        for (auto & [e, _] : _items)
            result = result.merged_with(e.instance.schema());
        return result;
    }

    auto LabeledExampleSet::total_size() const -> size_t
    {
        size_t result = 0;
        for (auto & [e, _] : _items)
            result += e.size();
        return result;
    }

    CQ::CQ(vector<Variable> head, vector<Atom> body) :
        _head(std::move(head)),
        _body(std::move(body))
    {
        Schema schema;
        for (auto & a : _body)
            schema.add(a.relation, a.args.size());

        std::sort(_body.begin(), _body.end());
        _body.erase(std::unique(_body.begin(), _body.end()), _body.end());

        for (auto & x : _head) {
            bool found = std::any_of(_body.begin(), _body.end(), [&] (const Atom & a) {
                    return std::find(a.args.begin(), a.args.end(), x) != a.args.end();
                    });
            if (! found)
                throw InvalidQuery("head variable " + x + " occurs in no atom");
        }
    }

    auto CQ::variables() const -> vector<Variable>
    {
        set<Variable> vars;
        for (auto & a : _body)
            vars.insert(a.args.begin(), a.args.end());
        return {vars.begin(), vars.end()};
    }

    auto CQ::schema() const -> Schema
    {
        Schema result;
        for (auto & a : _body)
            result.add(a.relation, a.args.size());
        return result;
    }

    UCQ::UCQ(vector<CQ> disjuncts) :
        _disjuncts(std::move(disjuncts))
    {
        if (_disjuncts.empty())
            throw InvalidQuery("a UCQ needs at least one disjunct");
        for (auto & q : _disjuncts)
            if (q.arity() != _disjuncts.front().arity())
                throw ArityMismatch("UCQ disjuncts have different arities");
    }

    auto UCQ::atom_count() const -> size_t
    {
        size_t result = 0;
        for (auto & q : _disjuncts)
            result += q.atom_count();
        return result;
    }

    auto arity(const Query & query) -> size_t
    {
        return std::visit([] (const auto & q) { return q.arity(); }, query);
    }

    auto atom_count(const Query & query) -> size_t
    {
        return std::visit([] (const auto & q) { return q.atom_count(); }, query);
    }

    auto canonical_instance(const CQ & query) -> Example
    {
        vector<Fact> facts;
        facts.reserve(query.body().size());
        for (auto & a : query.body())
            facts.push_back(Fact{a.relation, a.args});
        return Example{Instance{std::move(facts)}, query.head()};
    }

    auto canonical_cq(const Example & example) -> CQ
    {
        if (! example.well_formed())
            throw IllFormedExample("cannot build the canonical CQ of an ill-formed example");

        auto var = [] (const Value & v) { return "x_" + v; };
        vector<Atom> body;
        body.reserve(example.instance.fact_count());
        for (auto & f : example.instance.facts()) {
            Atom a{f.relation, {}};
            for (auto & v : f.args)
                a.args.push_back(var(v));
            body.push_back(std::move(a));
        }
        vector<Variable> head;
        for (auto & v : example.distinguished)
            head.push_back(var(v));
        return CQ{std::move(head), std::move(body)};
    }

    auto is_path_cq(const CQ & query) -> bool
    {
        if (query.arity() != 1)
            return false;

        optional<string> binary, unary;
        map<Variable, Variable> successor;
        set<Variable> has_predecessor;
        vector<const Atom *> decorations;
        for (auto & a : query.body()) {
            auto & name = a.args.size() == 2 ? binary : unary;
            if (a.args.size() > 2 || (name && *name != a.relation))
                return false;
            name = a.relation;
            if (a.args.size() == 1) {
                decorations.push_back(&a);
                continue;
            }
            if (successor.contains(a.args[0]) || ! has_predecessor.insert(a.args[1]).second)
                return false;
            successor.emplace(a.args[0], a.args[1]);
        }

        // walk the chain from the head; every binary atom must be visited exactly once
        set<Variable> chain{query.head()[0]};
        if (has_predecessor.contains(query.head()[0]))
            return false;
        for (auto it = successor.find(query.head()[0]) ; it != successor.end() ; it = successor.find(it->second))
            if (! chain.insert(it->second).second)
                return false;
        if (chain.size() != successor.size() + 1)
            return false;

        return std::all_of(decorations.begin(), decorations.end(),
                [&] (const Atom * a) { return chain.contains(a->args[0]); });
    }

    auto rename_values(const Example & example, const map<Value, Value> & renaming) -> Example
    {
        auto rename = [&] (const Value & v) -> const Value & {
            auto it = renaming.find(v);
            return it == renaming.end() ? v : it->second;
        };

        vector<Fact> facts;
        facts.reserve(example.instance.fact_count());
        for (auto & f : example.instance.facts()) {
            Fact g{f.relation, {}};
            g.args.reserve(f.args.size());
            for (auto & v : f.args)
                g.args.push_back(rename(v));
            facts.push_back(std::move(g));
        }
        Tuple distinguished;
        for (auto & v : example.distinguished)
            distinguished.push_back(rename(v));
        return Example{Instance{example.instance.schema(), std::move(facts)}, std::move(distinguished)};
    }

    auto compact_values(const Example & example, string_view prefix) -> Example
    {
        auto domain = example.instance.active_domain();
        set<Value> values{domain.begin(), domain.end()};
        values.insert(example.distinguished.begin(), example.distinguished.end());

        map<Value, Value> renaming;
        size_t next = 0;
        for (auto & v : values)
            renaming.emplace(v, string(prefix) + std::to_string(next++));
        return rename_values(example, renaming);
    }
}
