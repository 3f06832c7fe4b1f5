/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/generators.hh>
#include <cqlearn/hom.hh>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

using std::size_t;
using std::string;
using std::vector;

namespace cqlearn
{
    auto CnfFormula::validate() const -> void
    {
        if (num_vars == 0)
            throw Error("a formula needs at least one variable");
        for (auto & clause : clauses) {
            if (clause.empty() || clause.size() > 3)
                throw Error("clauses must have between one and three literals");
            for (int l : clause)
                if (l == 0 || size_t(std::abs(l)) > num_vars)
                    throw Error("literal " + std::to_string(l) + " is outside variables 1.." + std::to_string(num_vars));
        }
    }

    auto CnfFormula::padded() const -> CnfFormula
    {
        auto result = *this;
        for (auto & clause : result.clauses)
            while (! clause.empty() && clause.size() < 3)
                clause.push_back(clause.back());
        return result;
    }

    auto literal_index(int literal) -> size_t
    {
        if (literal == 0)
            throw Error("0 is not a literal");
        size_t i = std::abs(literal);
        return literal > 0 ? 2 * i : 2 * i - 1;
    }

    namespace
    {
        auto name(const string & stem, size_t i) -> string
        {
            return stem + "_" + std::to_string(i);
        }

        auto name(const string & stem, size_t i, size_t j) -> string
        {
            return stem + "_" + std::to_string(i) + "_" + std::to_string(j);
        }

        auto reduction_schema() -> Schema
        {
            return Schema{{"R", 2}, {"P", 1}};
        }

        auto add_chain(vector<Fact> & facts, const Value & root, const string & stem, size_t i, size_t length) -> void
        {
            facts.push_back(Fact{"R", {root, name(stem, i, 1)}});
            for (size_t j = 1 ; j < length ; ++j)
                facts.push_back(Fact{"R", {name(stem, i, j), name(stem, i, j + 1)}});
        }
    }

    auto gen_cnf_reduction(const CnfFormula & formula) -> CnfReduction
    {
        formula.validate();
        if (formula.clauses.empty())
            throw Error("the reduction needs at least one clause, otherwise b has no facts");

        size_t m = formula.num_vars, length = 2 * m;
        vector<Fact> facts;
        for (size_t i = 1 ; i <= m ; ++i) {
            add_chain(facts, name("a", i), "p", i, length);
            add_chain(facts, name("a", i), "n", i, length);
            for (size_t j = 1 ; j <= length ; ++j) {
                if (j != literal_index(-int(i)))
                    facts.push_back(Fact{"P", {name("p", i, j)}});
                if (j != literal_index(int(i)))
                    facts.push_back(Fact{"P", {name("n", i, j)}});
            }
        }

        for (size_t c = 1 ; c <= formula.clauses.size() ; ++c) {
            add_chain(facts, "b", "b", c, length);
            std::set<size_t> occurring;
            for (int l : formula.clauses[c - 1])
                occurring.insert(literal_index(l));
            for (size_t j = 1 ; j <= length ; ++j)
                if (! occurring.contains(j))
                    facts.push_back(Fact{"P", {name("b", c, j)}});
        }

        CnfReduction result{Instance{reduction_schema(), std::move(facts)}, LabeledExampleSet{1}};
        for (size_t i = 1 ; i <= m ; ++i)
            result.examples.add(Example{result.instance, {name("a", i)}}, Label::positive);
        result.examples.add(Example{result.instance, {"b"}}, Label::negative);
        return result;
    }

    auto assignment_to_path_cq(const vector<bool> & assignment) -> CQ
    {
        size_t m = assignment.size();
        if (m == 0)
            throw Error("an assignment needs at least one variable");
        vector<Atom> body;
        for (size_t j = 0 ; j < 2 * m ; ++j)
            body.push_back(Atom{"R", {"x" + std::to_string(j), "x" + std::to_string(j + 1)}});
        for (size_t i = 1 ; i <= m ; ++i) {
            int literal = assignment[i - 1] ? int(i) : -int(i);
            body.push_back(Atom{"P", {"x" + std::to_string(literal_index(literal))}});
        }
        return CQ{{"x0"}, std::move(body)};
    }

    auto parse_dimacs(std::string_view text) -> CnfFormula
    {
        CnfFormula formula;
        std::optional<size_t> declared_clauses;
        vector<int> clause;
        std::istringstream lines{string{text}};
        string line;
        size_t line_number = 0;

        while (std::getline(lines, line)) {
            ++line_number;
            std::istringstream words{line};
            string first;
            if (! (words >> first) || first == "c")
                continue;
            if (first == "%")
                break;
            if (first == "p") {
                string format;
                size_t vars = 0, count = 0;
                if (declared_clauses || ! (words >> format >> vars >> count) || format != "cnf")
                    throw ParseError("expected a single header 'p cnf VARS CLAUSES'", line_number, 1);
                formula.num_vars = vars;
                declared_clauses = count;
                continue;
            }
            if (! declared_clauses)
                throw ParseError("clause before the 'p cnf' header", line_number, 1);

            std::istringstream literals{line};
            string word;
            while (literals >> word) {
                int l = 0;
                try {
                    size_t used = 0;
                    l = std::stoi(word, &used);
                    if (used != word.size())
                        throw std::invalid_argument(word);
                }
                catch (const std::exception &) {
                    throw ParseError("expected an integer literal, found '" + word + "'", line_number, 1);
                }
                if (l == 0) {
                    formula.clauses.push_back(std::move(clause));
                    clause.clear();
                }
                else
                    clause.push_back(l);
            }
        }

        if (! declared_clauses)
            throw ParseError("missing 'p cnf' header", line_number, 1);
        if (! clause.empty())
            formula.clauses.push_back(std::move(clause));
        if (formula.clauses.size() != *declared_clauses)
            throw ParseError("header declares " + std::to_string(*declared_clauses) + " clauses, found "
                    + std::to_string(formula.clauses.size()), line_number, 1);
        formula.validate();
        return formula;
    }

    auto terminal_path_cq(size_t length) -> CQ
    {
        vector<Atom> body;
        for (size_t j = 0 ; j < length ; ++j)
            body.push_back(Atom{"R", {"x" + std::to_string(j), "x" + std::to_string(j + 1)}});
        body.push_back(Atom{"P", {"x" + std::to_string(length)}});
        return CQ{{"x0"}, std::move(body)};
    }

    auto nth_prime(size_t n) -> size_t
    {
        if (n == 0)
            throw Error("primes are counted from 1");
        size_t candidate = 1;
        while (n > 0) {
            ++candidate;
            bool prime = true;
            for (size_t d = 2 ; d * d <= candidate && prime ; ++d)
                prime = candidate % d != 0;
            if (prime)
                --n;
        }
        return candidate;
    }

    auto gen_lasso_family(size_t n, size_t max_length) -> LassoFamily
    {
        if (n == 0)
            throw Error("the lasso family starts at n = 1");
        size_t length = 1;
        vector<size_t> primes;
        for (size_t i = 1 ; i <= n ; ++i) {
            primes.push_back(nth_prime(i));
            if (length > max_length / primes.back())
                throw Error("the fitting query for n = " + std::to_string(n) + " would exceed "
                        + std::to_string(max_length) + " atoms");
            length *= primes.back();
        }

        vector<Fact> facts;
        for (auto p : primes) {
            for (size_t j = 0 ; j + 1 < 2 * p ; ++j)
                facts.push_back(Fact{"R", {name("a", p, j), name("a", p, j + 1)}});
            facts.push_back(Fact{"R", {name("a", p, 2 * p - 1), name("a", p, p)}});
            facts.push_back(Fact{"P", {name("a", p, p)}});
        }
        facts.push_back(Fact{"R", {"b", "b"}});

        LassoFamily result{Instance{reduction_schema(), std::move(facts)}, LabeledExampleSet{1}, terminal_path_cq(length)};
        for (auto p : primes)
            result.examples.add(Example{result.instance, {name("a", p, 0)}}, Label::positive);
        result.examples.add(Example{result.instance, {"b"}}, Label::negative);
        return result;
    }

    auto VcFamily::query_for_subset(const vector<size_t> & subset) const -> CQ
    {
        std::set<size_t> chosen{subset.begin(), subset.end()};
        for (auto i : chosen)
            if (i < 1 || i > n)
                throw Error("subset element " + std::to_string(i) + " is outside 1.." + std::to_string(n));
        vector<Atom> body;
        for (size_t j = 1 ; j < n ; ++j)
            body.push_back(Atom{"R", {"x" + std::to_string(j), "x" + std::to_string(j + 1)}});
        for (size_t j = 1 ; j <= n ; ++j)
            if (! chosen.contains(j))
                body.push_back(Atom{"P", {"x" + std::to_string(j)}});
        return CQ{{"x1"}, std::move(body)};
    }

    auto gen_vc_family(size_t n) -> VcFamily
    {
        if (n < 2)
            throw Error("the shattered family needs n >= 2");
        VcFamily result;
        result.n = n;
        for (size_t i = 1 ; i <= n ; ++i) {
            vector<Fact> facts;
            for (size_t j = 1 ; j < n ; ++j)
                facts.push_back(Fact{"R", {name("a", j), name("a", j + 1)}});
            for (size_t j = 1 ; j <= n ; ++j)
                if (j != i)
                    facts.push_back(Fact{"P", {name("a", j)}});
            result.examples.push_back(Example{Instance{reduction_schema(), std::move(facts)}, {"a_1"}});
        }
        return result;
    }

    Rng::Rng(std::uint64_t seed) :
        _engine(seed)
    {
    }

    auto Rng::derive(std::uint64_t seed, std::uint64_t index) -> std::uint64_t
    {
        // splitmix64 finaliser
        std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    auto Rng::below(std::uint64_t bound) -> std::uint64_t
    {
        if (bound == 0)
            throw Error("empty range");
        std::uint64_t threshold = (0 - bound) % bound;
        while (true) {
            auto x = next();
            if (x >= threshold)
                return x % bound;
        }
    }

    auto Rng::between(size_t low, size_t high) -> size_t
    {
        if (high < low)
            throw Error("empty range");
        return low + below(high - low + 1);
    }

    auto Rng::uniform() -> double
    {
        return double(next() >> 11) * 0x1.0p-53;
    }

    namespace
    {
        struct TreeSchema
        {
            string binary;
            vector<string> unary;
        };

        auto tree_schema(const Schema & schema) -> TreeSchema
        {
            TreeSchema result;
            for (auto & [r, arity] : schema.relations()) {
                if (arity == 1)
                    result.unary.push_back(r);
                else if (arity == 2 && result.binary.empty())
                    result.binary = r;
                else
                    throw Error("tree-shaped generation needs one binary relation and unary ones, not " + r);
            }
            if (result.binary.empty())
                throw Error("tree-shaped generation needs a binary relation");
            return result;
        }

        auto value(size_t i) -> Value
        {
            return "v" + std::to_string(i);
        }

        auto variable(size_t i) -> Variable
        {
            return "x" + std::to_string(i);
        }

        template <typename T_>
        auto drop_to(Rng & rng, vector<T_> & items, size_t limit) -> void
        {
            while (items.size() > limit) {
                auto i = rng.below(items.size());
                items.erase(items.begin() + i);
            }
        }

        // a forest over n nodes: edges parent -> child, plus unary decorations
        auto random_forest(Rng & rng, const TreeSchema & shape, size_t nodes, size_t limit,
                double edge_chance, double decoration_chance) -> vector<std::pair<string, vector<size_t> > >
        {
            vector<std::pair<string, vector<size_t> > > items;
            for (size_t i = 1 ; i < nodes ; ++i)
                if (rng.chance(edge_chance))
                    items.push_back({shape.binary, {size_t(rng.below(i)), i}});
            for (auto & u : shape.unary)
                for (size_t i = 0 ; i < nodes ; ++i)
                    if (rng.chance(decoration_chance))
                        items.push_back({u, {i}});
            drop_to(rng, items, limit);
            if (items.empty()) {
                if (! shape.unary.empty())
                    items.push_back({shape.unary[rng.below(shape.unary.size())], {0}});
                else
                    items.push_back({shape.binary, {0, 1}});
            }
            return items;
        }

        auto pick_head(Rng & rng, const vector<Variable> & used, size_t arity) -> vector<Variable>
        {
            vector<Variable> head;
            for (size_t i = 0 ; i < arity ; ++i)
                head.push_back(used[rng.below(used.size())]);
            return head;
        }

        auto used_variables(const vector<Atom> & body) -> vector<Variable>
        {
            std::set<Variable> used;
            for (auto & a : body)
                used.insert(a.args.begin(), a.args.end());
            return {used.begin(), used.end()};
        }

        auto pick_tuple(Rng & rng, const Instance & instance, size_t arity) -> Tuple
        {
            auto adom = instance.active_domain();
            Tuple tuple;
            for (size_t i = 0 ; i < arity ; ++i)
                tuple.push_back(adom[rng.below(adom.size())]);
            return tuple;
        }
    }

    auto RandomProfile::validate() const -> void
    {
        if (schema.empty())
            throw Error("the profile's schema is empty");
        if (values == 0 || facts == 0 || atoms == 0)
            throw Error("the profile allows no values, facts or atoms");
        if (kind == Kind::labeled_set && examples == 0)
            throw Error("the profile allows no examples");
        if (disjuncts == 0)
            throw Error("a planted target needs at least one disjunct");
        if (kind == Kind::labeled_set && atoms > facts)
            throw Error("positive examples must be able to hold a target of " + std::to_string(atoms) + " atoms");
        if (kind == Kind::tree_instance || kind == Kind::tree_cq || (kind == Kind::labeled_set && tree))
            tree_schema(schema);
    }

    auto random_instance(Rng & rng, const RandomProfile & profile) -> Instance
    {
        vector<std::pair<string, size_t> > relations{profile.schema.relations().begin(), profile.schema.relations().end()};
        size_t n = rng.between(1, profile.values), count = rng.between(1, profile.facts);
        vector<Fact> facts;
        for (size_t f = 0 ; f < count ; ++f) {
            auto & [r, arity] = relations[rng.below(relations.size())];
            Fact fact{r, {}};
            for (size_t j = 0 ; j < arity ; ++j)
                fact.args.push_back(value(rng.below(n)));
            facts.push_back(std::move(fact));
        }
        return Instance{profile.schema, std::move(facts)};
    }

    auto random_tree_instance(Rng & rng, const RandomProfile & profile) -> Instance
    {
        auto shape = tree_schema(profile.schema);
        size_t n = rng.between(shape.unary.empty() ? 2 : 1, std::max<size_t>(2, profile.values));
        vector<Fact> facts;
        for (auto & [r, nodes] : random_forest(rng, shape, n, profile.facts, 0.8, 0.4)) {
            Fact fact{r, {}};
            for (auto i : nodes)
                fact.args.push_back(value(i));
            facts.push_back(std::move(fact));
        }
        return Instance{profile.schema, std::move(facts)};
    }

    auto random_cq(Rng & rng, const RandomProfile & profile) -> CQ
    {
        vector<std::pair<string, size_t> > relations{profile.schema.relations().begin(), profile.schema.relations().end()};
        size_t n = rng.between(1, profile.values), count = rng.between(1, profile.atoms);
        vector<Atom> body;
        for (size_t a = 0 ; a < count ; ++a) {
            auto & [r, arity] = relations[rng.below(relations.size())];
            Atom atom{r, {}};
            for (size_t j = 0 ; j < arity ; ++j)
                atom.args.push_back(variable(rng.below(n)));
            body.push_back(std::move(atom));
        }
        auto head = pick_head(rng, used_variables(body), profile.arity);
        return CQ{std::move(head), std::move(body)};
    }

    auto random_tree_cq(Rng & rng, const RandomProfile & profile) -> CQ
    {
        auto shape = tree_schema(profile.schema);
        size_t n = rng.between(shape.unary.empty() ? 2 : 1, profile.atoms + 1);
        vector<Atom> body;
        for (auto & [r, nodes] : random_forest(rng, shape, n, profile.atoms, 0.85, 0.3)) {
            Atom atom{r, {}};
            for (auto i : nodes)
                atom.args.push_back(variable(i));
            body.push_back(std::move(atom));
        }
        auto head = pick_head(rng, used_variables(body), profile.arity);
        return CQ{std::move(head), std::move(body)};
    }

    auto random_example(Rng & rng, const RandomProfile & profile) -> Example
    {
        auto instance = profile.tree || profile.kind == RandomProfile::Kind::tree_instance
            ? random_tree_instance(rng, profile) : random_instance(rng, profile);
        auto tuple = pick_tuple(rng, instance, profile.arity);
        return Example{std::move(instance), std::move(tuple)};
    }

    auto random_positive(Rng & rng, const CQ & query, const RandomProfile & profile) -> Example
    {
        auto variables = query.variables();
        std::map<Variable, Value> image;
        vector<Fact> facts;
        size_t budget = profile.facts > query.atom_count() ? profile.facts - query.atom_count() : 0;

        if (profile.tree) {
            // keep the forest shape: rename injectively, then grow new leaves
            auto shape = tree_schema(profile.schema);
            for (size_t i = 0 ; i < variables.size() ; ++i)
                image.emplace(variables[i], value(i));
            for (auto & a : query.body()) {
                Fact fact{a.relation, {}};
                for (auto & x : a.args)
                    fact.args.push_back(image.at(x));
                facts.push_back(std::move(fact));
            }
            size_t nodes = variables.size(), noise = rng.between(0, budget);
            for (size_t f = 0 ; f < noise ; ++f) {
                if (shape.unary.empty() || rng.chance(0.5)) {
                    facts.push_back(Fact{shape.binary, {value(rng.below(nodes)), value(nodes)}});
                    ++nodes;
                }
                else
                    facts.push_back(Fact{shape.unary[rng.below(shape.unary.size())], {value(rng.below(nodes))}});
            }
        }
        else {
            size_t pool = rng.between((variables.size() + 1) / 2, variables.size());
            for (auto & x : variables)
                image.emplace(x, value(rng.below(pool)));
            for (auto & a : query.body()) {
                Fact fact{a.relation, {}};
                for (auto & x : a.args)
                    fact.args.push_back(image.at(x));
                facts.push_back(std::move(fact));
            }
            vector<std::pair<string, size_t> > relations{profile.schema.relations().begin(), profile.schema.relations().end()};
            size_t extra = pool + rng.between(0, profile.values), noise = rng.between(0, budget);
            for (size_t f = 0 ; f < noise ; ++f) {
                auto & [r, arity] = relations[rng.below(relations.size())];
                Fact fact{r, {}};
                for (size_t j = 0 ; j < arity ; ++j)
                    fact.args.push_back(value(rng.below(extra)));
                facts.push_back(std::move(fact));
            }
        }

        Tuple tuple;
        for (auto & x : query.head())
            tuple.push_back(image.at(x));
        return Example{Instance{profile.schema.merged_with(query.schema()), std::move(facts)}, std::move(tuple)};
    }

    auto random_planted_set(Rng & rng, const RandomProfile & profile) -> PlantedSet
    {
        profile.validate();
        vector<CQ> disjuncts;
        for (size_t d = 0 ; d < profile.disjuncts ; ++d)
            disjuncts.push_back(profile.tree ? random_tree_cq(rng, profile) : random_cq(rng, profile));
        Query target = disjuncts.size() == 1 ? Query{disjuncts.front()} : Query{UCQ{disjuncts}};

        PlantedSet result{target, LabeledExampleSet{profile.arity}};
        vector<Example> seen;
        size_t wanted = rng.between(1, profile.examples);
        for (size_t attempt = 0 ; result.examples.size() < wanted && attempt < 20 * wanted ; ++attempt) {
            bool plant = result.examples.empty() || rng.chance(0.5);
            auto e = plant ? random_positive(rng, disjuncts[rng.below(disjuncts.size())], profile) : random_example(rng, profile);
            if (std::find(seen.begin(), seen.end(), e) != seen.end())
                continue;
            seen.push_back(e);
            auto label = evaluate(target, e);
            result.examples.add(std::move(e), label);
        }
        return result;
    }

    auto gen_random(std::uint64_t seed, const RandomProfile & profile) -> Generated
    {
        profile.validate();
        Rng rng{seed};
        switch (profile.kind) {
            case RandomProfile::Kind::instance:      return random_instance(rng, profile);
            case RandomProfile::Kind::tree_instance: return random_tree_instance(rng, profile);
            case RandomProfile::Kind::cq:            return random_cq(rng, profile);
            case RandomProfile::Kind::tree_cq:       return random_tree_cq(rng, profile);
            case RandomProfile::Kind::labeled_set:   return random_planted_set(rng, profile).examples;
        }
        throw Error("unknown generation kind");
    }
}
