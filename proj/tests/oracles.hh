/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef CQLEARN_GUARD_TESTS_ORACLES_HH
#define CQLEARN_GUARD_TESTS_ORACLES_HH 1

// Deliberately naive reference implementations used to check the library.
// None of them calls into the homomorphism engine.

#include <cqlearn/generators.hh>
#include <cqlearn/model.hh>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle
{
    using namespace cqlearn;

    inline auto values_of(const Example & e) -> std::vector<Value>
    {
        std::set<Value> values;
        for (auto & f : e.instance.facts())
            values.insert(f.args.begin(), f.args.end());
        values.insert(e.distinguished.begin(), e.distinguished.end());
        return {values.begin(), values.end()};
    }

    /// Plain depth-first search over all maps, checking each fact once its arguments are assigned.
    inline auto homomorphism_exists(const Example & source, const Example & target) -> bool
    {
        if (source.arity() != target.arity())
            return false;
        auto from = values_of(source), to = values_of(target);
        std::set<Fact> facts{target.instance.facts().begin(), target.instance.facts().end()};
        std::map<Value, Value> h;
        for (std::size_t i = 0 ; i < source.arity() ; ++i) {
            auto [it, inserted] = h.emplace(source.distinguished[i], target.distinguished[i]);
            if (! inserted && it->second != target.distinguished[i])
                return false;
        }

        auto consistent = [&] () {
            for (auto & f : source.instance.facts()) {
                Fact image{f.relation, {}};
                bool complete = true;
                for (auto & a : f.args) {
                    auto it = h.find(a);
                    if (it == h.end()) {
                        complete = false;
                        break;
                    }
                    image.args.push_back(it->second);
                }
                if (complete && ! facts.contains(image))
                    return false;
            }
            return true;
        };

        std::function<bool (std::size_t)> extend = [&] (std::size_t i) -> bool {
            if (i == from.size())
                return true;
            if (h.contains(from[i]))
                return extend(i + 1);
            for (auto & v : to) {
                h[from[i]] = v;
                if (consistent() && extend(i + 1))
                    return true;
            }
            h.erase(from[i]);
            return false;
        };
        return consistent() && extend(0);
    }

    inline auto canonical(const CQ & q) -> Example
    {
        std::vector<Fact> facts;
        for (auto & a : q.body())
            facts.push_back(Fact{a.relation, a.args});
        return Example{Instance{facts}, q.head()};
    }

    inline auto evaluate(const CQ & q, const Example & e) -> Label
    {
        return homomorphism_exists(canonical(q), e) ? Label::positive : Label::negative;
    }

    inline auto evaluate(const Query & q, const Example & e) -> Label
    {
        if (auto c = std::get_if<CQ>(&q))
            return evaluate(*c, e);
        for (auto & d : std::get<UCQ>(q).disjuncts())
            if (evaluate(d, e) == Label::positive)
                return Label::positive;
        return Label::negative;
    }

    inline auto answers(const CQ & q, const Instance & instance) -> std::set<Tuple>
    {
        std::set<Value> adom;
        for (auto & f : instance.facts())
            adom.insert(f.args.begin(), f.args.end());
        std::set<Tuple> result;
        Tuple t;
        std::function<void ()> fill = [&] () {
            if (t.size() == q.arity()) {
                if (evaluate(q, Example{instance, t}) == Label::positive)
                    result.insert(t);
                return;
            }
            for (auto & v : adom) {
                t.push_back(v);
                fill();
                t.pop_back();
            }
        };
        fill();
        return result;
    }

    inline auto satisfiable(const CnfFormula & formula) -> bool
    {
        for (unsigned long bits = 0 ; bits < (1ul << formula.num_vars) ; ++bits) {
            bool all = true;
            for (auto & clause : formula.clauses) {
                bool any = false;
                for (int l : clause) {
                    bool value = (bits >> (std::abs(l) - 1)) & 1;
                    any = any || (l > 0 ? value : ! value);
                }
                all = all && any;
            }
            if (all)
                return true;
        }
        return false;
    }

    /// The reduction instance written out rule by rule, as sets of strings.
    inline auto reduction_facts(const CnfFormula & formula) -> std::set<std::string>
    {
        auto m = int(formula.num_vars), k = int(formula.clauses.size());
        auto s = [] (int x) { return std::to_string(x); };
        auto j_of = [] (int l) { return l > 0 ? 2 * l : -2 * l - 1; };
        std::vector<int> lits;
        for (int i = 1 ; i <= m ; ++i) {
            lits.push_back(i);
            lits.push_back(-i);
        }

        std::set<std::string> out;
        for (int i = 1 ; i <= m ; ++i) {
            out.insert("R(a_" + s(i) + ",p_" + s(i) + "_1)");
            out.insert("R(a_" + s(i) + ",n_" + s(i) + "_1)");
            for (int j = 1 ; j < 2 * m ; ++j) {
                out.insert("R(p_" + s(i) + "_" + s(j) + ",p_" + s(i) + "_" + s(j + 1) + ")");
                out.insert("R(n_" + s(i) + "_" + s(j) + ",n_" + s(i) + "_" + s(j + 1) + ")");
            }
            for (int l : lits) {
                if (l != -i)
                    out.insert("P(p_" + s(i) + "_" + s(j_of(l)) + ")");
                if (l != i)
                    out.insert("P(n_" + s(i) + "_" + s(j_of(l)) + ")");
            }
        }
        for (int i = 1 ; i <= k ; ++i) {
            out.insert("R(b,b_" + s(i) + "_1)");
            for (int j = 1 ; j < 2 * m ; ++j)
                out.insert("R(b_" + s(i) + "_" + s(j) + ",b_" + s(i) + "_" + s(j + 1) + ")");
            auto & clause = formula.clauses[i - 1];
            for (int l : lits)
                if (std::find(clause.begin(), clause.end(), l) == clause.end())
                    out.insert("P(b_" + s(i) + "_" + s(j_of(l)) + ")");
        }
        return out;
    }

    inline auto fact_strings(const Instance & instance) -> std::set<std::string>
    {
        std::set<std::string> out;
        for (auto & f : instance.facts()) {
            std::string text = f.relation + "(";
            for (std::size_t i = 0 ; i < f.args.size() ; ++i)
                text += (i ? "," : "") + f.args[i];
            out.insert(text + ")");
        }
        return out;
    }

    inline auto pair(const Value & a, const Value & b) -> Value
    {
        return "<" + a + "," + b + ">";
    }

    inline auto product(const Instance & left, const Instance & right) -> std::set<Fact>
    {
        std::set<Fact> out;
        for (auto & f : left.facts())
            for (auto & g : right.facts())
                if (f.relation == g.relation && f.args.size() == g.args.size()) {
                    Fact h{f.relation, {}};
                    for (std::size_t i = 0 ; i < f.args.size() ; ++i)
                        h.args.push_back(pair(f.args[i], g.args[i]));
                    out.insert(h);
                }
        return out;
    }

    /// Every single-fact deletion is ill-formed or negative for the target.
    inline auto critical(const Example & e, const Query & target) -> bool
    {
        if (evaluate(target, e) != Label::positive)
            return false;
        for (std::size_t i = 0 ; i < e.instance.fact_count() ; ++i) {
            Example smaller{e.instance.without_fact(i), e.distinguished};
            if (smaller.well_formed() && evaluate(target, smaller) == Label::positive)
                return false;
        }
        return true;
    }
}

#endif
