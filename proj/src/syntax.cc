/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/syntax.hh>

#include <cctype>
#include <set>
#include <sstream>

using std::size_t;
using std::string;
using std::string_view;
using std::vector;

namespace cqlearn
{
    namespace
    {
        auto join_args(const vector<string> & args) -> string
        {
            string result = "(";
            for (size_t i = 0 ; i < args.size() ; ++i) {
                if (i > 0)
                    result += ",";
                result += args[i];
            }
            return result + ")";
        }

        enum class Token
        {
            identifier,
            open_paren,
            close_paren,
            comma,
            dot,
            turnstile,
            slash,
            open_brace,
            close_brace,
            plus,
            minus,
            question,
            end
        };

        auto describe(Token t) -> string
        {
            switch (t) {
                case Token::identifier: return "identifier";
                case Token::open_paren: return "'('";
                case Token::close_paren: return "')'";
                case Token::comma: return "','";
                case Token::dot: return "'.'";
                case Token::turnstile: return "':-'";
                case Token::slash: return "'/'";
                case Token::open_brace: return "'{'";
                case Token::close_brace: return "'}'";
                case Token::plus: return "'+'";
                case Token::minus: return "'-'";
                case Token::question: return "'?'";
                case Token::end: return "end of input";
            }
            return "token";
        }

        auto is_word_char(char c) -> bool
        {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        }

        class Parser
        {
            private:
                string_view _text;
                size_t _pos = 0, _line = 1, _column = 1;

                Token _token = Token::end;
                string _lexeme;
                size_t _token_line = 1, _token_column = 1;

                auto advance_char() -> char
                {
                    char c = _text[_pos++];
                    if (c == '\n') {
                        ++_line;
                        _column = 1;
                    }
                    else
                        ++_column;
                    return c;
                }

                auto skip_blank() -> void
                {
                    while (_pos < _text.size()) {
                        char c = _text[_pos];
                        if (c == '#')
                            while (_pos < _text.size() && _text[_pos] != '\n')
                                advance_char();
                        else if (std::isspace(static_cast<unsigned char>(c)))
                            advance_char();
                        else
                            break;
                    }
                }

                auto lex() -> void
                {
                    skip_blank();
                    _token_line = _line;
                    _token_column = _column;
                    _lexeme.clear();
                    if (_pos == _text.size()) {
                        _token = Token::end;
                        return;
                    }

                    char c = _text[_pos];
                    if (is_word_char(c) || c == '<') {
                        int depth = 0;
                        while (_pos < _text.size()) {
                            char d = _text[_pos];
                            if (d == '<')
                                ++depth;
                            else if (d == '>') {
                                if (depth == 0)
                                    fail("unbalanced '>' in identifier");
                                --depth;
                            }
                            else if (! is_word_char(d) && ! (d == ',' && depth > 0))
                                break;
                            _lexeme += advance_char();
                        }
                        if (depth != 0)
                            fail("unterminated '<' in identifier");
                        _token = Token::identifier;
                        return;
                    }

                    advance_char();
                    switch (c) {
                        case '(': _token = Token::open_paren; return;
                        case ')': _token = Token::close_paren; return;
                        case ',': _token = Token::comma; return;
                        case '.': _token = Token::dot; return;
                        case '/': _token = Token::slash; return;
                        case '{': _token = Token::open_brace; return;
                        case '}': _token = Token::close_brace; return;
                        case '+': _token = Token::plus; return;
                        case '-': _token = Token::minus; return;
                        case '?': _token = Token::question; return;
                        case ':':
                            if (_pos < _text.size() && _text[_pos] == '-') {
                                advance_char();
                                _token = Token::turnstile;
                                return;
                            }
                            break;
                    }
                    _token_column = _column - 1;
                    fail(string("unexpected character '") + c + "'");
                }

            public:
                explicit Parser(string_view text) :
                    _text(text)
                {
                    lex();
                }

                [[noreturn]] auto fail(const string & message) const -> void
                {
                    throw ParseError(message, _token_line, _token_column);
                }

                auto peek() const -> Token { return _token; }
                auto lexeme() const -> const string & { return _lexeme; }
                auto line() const -> size_t { return _token_line; }
                auto column() const -> size_t { return _token_column; }

                auto accept(Token t) -> bool
                {
                    if (_token != t)
                        return false;
                    lex();
                    return true;
                }

                auto expect(Token t) -> void
                {
                    if (_token != t)
                        fail("expected " + describe(t) + ", found "
                                + (_token == Token::identifier ? "'" + _lexeme + "'" : describe(_token)));
                    lex();
                }

                auto identifier() -> string
                {
                    if (_token != Token::identifier)
                        expect(Token::identifier);
                    string result = _lexeme;
                    lex();
                    return result;
                }

                /// "(a,b,...)", possibly empty.
                auto argument_list() -> vector<string>
                {
                    vector<string> result;
                    expect(Token::open_paren);
                    if (accept(Token::close_paren))
                        return result;
                    result.push_back(identifier());
                    while (accept(Token::comma))
                        result.push_back(identifier());
                    expect(Token::close_paren);
                    return result;
                }

                /// Declarations and facts up to (not including) the given terminator.
                auto instance_body(Token terminator) -> Instance
                {
                    Schema schema;
                    vector<Fact> facts;
                    while (peek() != terminator) {
                        auto at_line = line(), at_column = column();
                        auto name = identifier();
                        if (name == "rel" && peek() == Token::identifier) {
                            auto rel = identifier();
                            expect(Token::slash);
                            auto arity_line = line(), arity_column = column();
                            auto digits = identifier();
                            size_t arity = 0;
                            for (char c : digits) {
                                if (! std::isdigit(static_cast<unsigned char>(c)))
                                    throw ParseError("arity must be a number", arity_line, arity_column);
                                arity = arity * 10 + size_t(c - '0');
                            }
                            add_relation(schema, rel, arity, at_line, at_column);
                            continue;
                        }
                        auto args = argument_list();
                        expect(Token::dot);
                        add_relation(schema, name, args.size(), at_line, at_column);
                        facts.push_back(Fact{std::move(name), std::move(args)});
                    }
                    return Instance{std::move(schema), std::move(facts)};
                }

                static auto add_relation(Schema & schema, const string & name, size_t arity, size_t l, size_t c) -> void
                {
                    try {
                        schema.add(name, arity);
                    }
                    catch (const SchemaError & e) {
                        throw ParseError(e.what(), l, c);
                    }
                }
        };

        struct Rule
        {
            string name;
            CQ query;
        };

        auto parse_rules(string_view text) -> vector<Rule>
        {
            Parser p{text};
            vector<Rule> rules;
            while (p.peek() != Token::end) {
                auto at_line = p.line(), at_column = p.column();
                auto name = p.identifier();
                auto head = p.argument_list();
                vector<Atom> body;
                if (p.accept(Token::turnstile)) {
                    do {
                        auto relation = p.identifier();
                        auto args = p.argument_list();
                        if (args.empty())
                            p.fail("atoms need at least one argument");
                        body.push_back(Atom{std::move(relation), std::move(args)});
                    } while (p.accept(Token::comma));
                }
                p.expect(Token::dot);
                try {
                    rules.push_back(Rule{name, CQ{std::move(head), std::move(body)}});
                }
                catch (const Error & e) {
                    throw ParseError(e.what(), at_line, at_column);
                }
                if (rules.back().name != rules.front().name || rules.back().query.arity() != rules.front().query.arity())
                    throw ParseError("all rules must share the head name and arity", at_line, at_column);
            }
            if (rules.empty())
                p.fail("expected at least one rule");
            return rules;
        }
    }

    auto to_text(const Instance & instance) -> string
    {
        string result;
        std::set<string> used;
        for (auto & f : instance.facts())
            used.insert(f.relation);
        for (auto & [name, arity] : instance.schema().relations())
            if (! used.contains(name))
                result += "rel " + name + "/" + std::to_string(arity) + "\n";
        for (auto & f : instance.facts())
            result += f.relation + join_args(f.args) + ".\n";
        return result;
    }

    auto to_text(const CQ & query, string_view name) -> string
    {
        string result = string(name) + join_args(query.head());
        for (size_t i = 0 ; i < query.body().size() ; ++i) {
            result += i == 0 ? " :- " : ", ";
            result += query.body()[i].relation + join_args(query.body()[i].args);
        }
        return result + ".";
    }

    auto to_text(const UCQ & query, string_view name) -> string
    {
        string result;
        for (auto & q : query.disjuncts()) {
            if (! result.empty())
                result += "\n";
            result += to_text(q, name);
        }
        return result;
    }

    auto to_text(const Query & query, string_view name) -> string
    {
        return std::visit([&] (const auto & q) { return to_text(q, name); }, query);
    }

    auto to_text(const Tuple & tuple) -> string
    {
        return join_args(tuple);
    }

    auto to_text(const LabeledExampleSet & examples) -> string
    {
        vector<const Instance *> instances;
        vector<size_t> instance_of;
        for (auto & [e, _] : examples.items()) {
            size_t i = 0;
            while (i < instances.size() && ! (*instances[i] == e.instance))
                ++i;
            if (i == instances.size())
                instances.push_back(&e.instance);
            instance_of.push_back(i);
        }

        string result;
        for (size_t i = 0 ; i < instances.size() ; ++i) {
            result += "instance I" + std::to_string(i + 1) + " {\n";
            std::istringstream lines{to_text(*instances[i])};
            for (string line ; std::getline(lines, line) ; )
                result += "  " + line + "\n";
            result += "}\n";
        }
        for (size_t j = 0 ; j < examples.size() ; ++j) {
            auto & [e, label] = examples.items()[j];
            result += string(to_string(label)) + " I" + std::to_string(instance_of[j] + 1) + " " + to_text(e.distinguished) + "\n";
        }
        return result;
    }

    auto to_text(const Example & example) -> string
    {
        return "? " + to_text(example.distinguished) + "\n" + to_text(example.instance);
    }

    auto parse_instance(string_view text) -> Instance
    {
        Parser p{text};
        return p.instance_body(Token::end);
    }

    auto parse_query(string_view text) -> Query
    {
        auto rules = parse_rules(text);
        if (rules.size() == 1)
            return std::move(rules.front().query);
        vector<CQ> disjuncts;
        for (auto & r : rules)
            disjuncts.push_back(std::move(r.query));
        return UCQ{std::move(disjuncts)};
    }

    auto parse_cq(string_view text) -> CQ
    {
        auto rules = parse_rules(text);
        if (rules.size() != 1)
            throw ParseError("expected a single rule, found " + std::to_string(rules.size()), 1, 1);
        return std::move(rules.front().query);
    }

    auto parse_tuple(string_view text) -> Tuple
    {
        Parser p{text};
        Tuple result;
        if (p.peek() == Token::open_paren)
            result = p.argument_list();
        else if (p.peek() != Token::end) {
            result.push_back(p.identifier());
            while (p.accept(Token::comma))
                result.push_back(p.identifier());
        }
        p.expect(Token::end);
        return result;
    }

    auto parse_example(string_view text) -> Example
    {
        Parser p{text};
        p.expect(Token::question);
        auto tuple = p.argument_list();
        auto instance = p.instance_body(Token::end);
        return Example{std::move(instance), std::move(tuple)};
    }

    auto Workspace::example_set() const -> LabeledExampleSet
    {
        LabeledExampleSet result;
        for (auto & ref : labeled)
            result.add(Example{instances.at(ref.instance), ref.tuple}, ref.label);
        return result;
    }

    auto parse_workspace(string_view text) -> Workspace
    {
        Parser p{text};
        Workspace result;
        struct Pending
        {
            size_t line, column;
        };
        vector<Pending> positions;

        while (p.peek() != Token::end) {
            if (p.peek() == Token::plus || p.peek() == Token::minus) {
                positions.push_back({p.line(), p.column()});
                auto label = p.peek() == Token::plus ? Label::positive : Label::negative;
                p.accept(p.peek());
                auto name = p.identifier();
                auto tuple = p.argument_list();
                result.labeled.push_back(LabeledReference{std::move(name), std::move(tuple), label});
                continue;
            }

            auto at_line = p.line(), at_column = p.column();
            auto keyword = p.identifier();
            if (keyword != "instance")
                throw ParseError("expected 'instance', '+' or '-', found '" + keyword + "'", at_line, at_column);
            auto name = p.identifier();
            p.expect(Token::open_brace);
            auto instance = p.instance_body(Token::close_brace);
            p.expect(Token::close_brace);
            if (! result.instances.emplace(name, std::move(instance)).second)
                throw ParseError("instance " + name + " declared twice", at_line, at_column);
        }

        for (size_t i = 0 ; i < result.labeled.size() ; ++i) {
            auto & ref = result.labeled[i];
            auto it = result.instances.find(ref.instance);
            if (it == result.instances.end())
                throw ParseError("unknown instance " + ref.instance, positions[i].line, positions[i].column);
            try {
                if (! Example{it->second, ref.tuple}.well_formed())
                    throw IllFormedExample("tuple " + to_text(ref.tuple) + " is not in the active domain of " + ref.instance);
                if (i > 0 && ref.tuple.size() != result.labeled.front().tuple.size())
                    throw ArityMismatch("labeled tuples have different arities");
            }
            catch (const Error & e) {
                throw ParseError(e.what(), positions[i].line, positions[i].column);
            }
        }
        return result;
    }

    auto parse_example_set(string_view text) -> LabeledExampleSet
    {
        return parse_workspace(text).example_set();
    }

    auto bit_size(const CQ & query) -> size_t
    {
        return 8 * to_text(query).size();
    }

    auto bit_size(const Query & query) -> size_t
    {
        return 8 * to_text(query).size();
    }
}
