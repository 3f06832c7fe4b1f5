/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <cqlearn/fitting.hh>
#include <cqlearn/generators.hh>
#include <cqlearn/hom.hh>
#include <cqlearn/learner.hh>
#include <cqlearn/oracle.hh>
#include <cqlearn/pac.hh>
#include <cqlearn/syntax.hh>
#include <cqlearn/tree_shape.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace cqlearn;

using std::cerr;
using std::cout;
using std::optional;
using std::size_t;
using std::string;
using std::vector;

namespace
{
    constexpr int exit_success = 0, exit_negative = 1, exit_usage = 2;

    // input errors that should exit with the usage code rather than a crash
    struct InputError : Error
    {
        using Error::Error;
    };

    auto read_file(const string & path) -> string
    {
        if (path == "-") {
            std::ostringstream text;
            text << std::cin.rdbuf();
            return text.str();
        }
        std::ifstream in{path};
        if (! in)
            throw InputError("cannot read '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return text.str();
    }

    template <typename T_, typename F_>
    auto parse_file(const string & path, F_ parse) -> T_
    {
        auto text = read_file(path);
        try {
            return parse(text);
        }
        catch (const ParseError & e) {
            throw InputError(path + ":" + e.what());
        }
    }

    auto print_labels(const Query & query, const LabeledExampleSet & examples, bool tree) -> void
    {
        for (auto & [e, expected] : examples.items()) {
            Label label;
            if (tree)
                label = evaluate_tree(std::get<CQ>(query), e);
            else
                label = evaluate(query, e);
            cout << to_string(label) << " " << to_text(e.distinguished) << "\n";
        }
    }

    struct EvalArgs
    {
        string query, instance, examples, tuple;
        bool tree = false;
    };

    auto run_eval(const EvalArgs & args) -> int
    {
        auto query = parse_file<Query>(args.query, parse_query);
        if (args.tree && ! std::holds_alternative<CQ>(query))
            throw InputError("--tree evaluates a single CQ");

        if (! args.examples.empty()) {
            auto examples = parse_file<LabeledExampleSet>(args.examples, parse_example_set);
            if (examples.arity() && *examples.arity() != arity(query))
                throw ArityMismatch("query of arity " + std::to_string(arity(query)) + " against examples of arity "
                        + std::to_string(*examples.arity()));
            print_labels(query, examples, args.tree);
            return exit_success;
        }

        auto instance = parse_file<Instance>(args.instance, parse_instance);
        if (args.tuple.empty()) {
            if (! std::holds_alternative<CQ>(query))
                throw InputError("listing all answers needs a single CQ; give --tuple for a UCQ");
            for (auto & t : all_answers(std::get<CQ>(query), instance))
                cout << to_text(t) << "\n";
            return exit_success;
        }

        Example example{instance, parse_tuple(args.tuple)};
        auto label = args.tree ? evaluate_tree(std::get<CQ>(query), example) : evaluate(query, example);
        cout << to_string(label) << "\n";
        return label == Label::positive ? exit_success : exit_negative;
    }

    struct LearnArgs
    {
        string examples, target, oracle_cmd;
        bool verbose = false;
    };

    auto run_learn(const LearnArgs & args, bool ucq) -> int
    {
        auto examples = parse_file<LabeledExampleSet>(args.examples, parse_example_set);
        std::unique_ptr<MembershipOracle> oracle;
        if (! args.target.empty())
            oracle = std::make_unique<TargetOracle>(parse_file<Query>(args.target, parse_query));
        else
            oracle = std::make_unique<ProcessOracle>(args.oracle_cmd);

        auto output = ucq ? learn_ucq(examples, *oracle) : learn_cq(examples, *oracle);
        cout << to_text(output.hypothesis) << "\n";
        if (args.verbose) {
            cerr << "oracle calls: " << output.oracle_calls << "\n"
                << "facts processed: " << output.facts_processed << "\n"
                << "atoms: " << atom_count(output.hypothesis) << "\n";
            if (output.skipped_positives)
                cerr << "positives rejected by the oracle: " << output.skipped_positives << "\n";
        }
        if (! output.fits_input)
            cerr << "the hypothesis does not fit the examples; the oracle disagrees with their labels\n";
        return output.fits_input ? exit_success : exit_negative;
    }

    struct FitArgs
    {
        string examples;
        size_t max_product_facts = FittingOptions{}.max_product_facts;
        size_t max_atoms = 3;
    };

    auto run_fit(const FitArgs & args) -> int
    {
        auto examples = parse_file<LabeledExampleSet>(args.examples, parse_example_set);
        auto report = fitting_exists(examples, FittingOptions{args.max_product_facts});
        if (report.exists) {
            cout << to_text(*report.witness) << "\n";
            return exit_success;
        }
        if (report.certificate)
            cout << "no fitting CQ: the product of the positives maps to negative example "
                << report.certificate->negative_index + 1 << "\n";
        else
            cout << "no fitting CQ: the product of the positives is not well-formed\n";
        return exit_negative;
    }

    auto run_fit_enum(const FitArgs & args) -> int
    {
        auto examples = parse_file<LabeledExampleSet>(args.examples, parse_example_set);
        if (auto q = smallest_fitting_enumeration(examples, args.max_atoms)) {
            cout << to_text(*q) << "\n";
            return exit_success;
        }
        cout << "no fitting CQ with at most " << args.max_atoms << " atoms\n";
        return exit_negative;
    }

    auto run_quotient(const string & path) -> int
    {
        auto query = parse_file<CQ>(path, parse_cq);
        auto reduced = quotient_to_tree(query);
        if (auto t = std::get_if<TreeCQ>(&reduced)) {
            cout << to_text(t->query) << "\n";
            return exit_success;
        }
        cout << "unsatisfiable on tree-shaped instances\n";
        return exit_negative;
    }

    struct GenArgs
    {
        string dimacs;
        bool pad = false;
        size_t n = 1;
        vector<size_t> subset;
        optional<std::uint64_t> seed;
        string kind = "labeled-set";
        RandomProfile profile;
    };

    auto run_gen_cnf(const GenArgs & args) -> int
    {
        auto formula = parse_file<CnfFormula>(args.dimacs, parse_dimacs);
        if (args.pad)
            formula = formula.padded();
        cout << to_text(gen_cnf_reduction(formula).examples);
        return exit_success;
    }

    auto run_gen_lasso(const GenArgs & args) -> int
    {
        auto family = gen_lasso_family(args.n);
        cout << to_text(family.examples) << "# fitting query: " << to_text(family.fitting_query) << "\n";
        return exit_success;
    }

    auto run_gen_vc(const GenArgs & args) -> int
    {
        auto family = gen_vc_family(args.n);
        auto query = family.query_for_subset(args.subset);
        LabeledExampleSet examples{1};
        for (auto & e : family.examples)
            examples.add(e, evaluate(query, e));
        cout << to_text(examples) << "# labeled by: " << to_text(query) << "\n";
        return exit_success;
    }

    auto run_gen_random(const GenArgs & args) -> int
    {
        auto generated = gen_random(*args.seed, args.profile);
        std::visit([] (auto & g) {
                auto text = to_text(g);
                cout << text;
                if (text.empty() || text.back() != '\n')
                    cout << "\n";
                }, generated);
        return exit_success;
    }

    auto support_from_config(const nlohmann::json & config, const std::filesystem::path & base, size_t k) -> Distribution
    {
        optional<Instance> shared;
        if (config.contains("instance"))
            shared = parse_instance(config.at("instance").get<string>());
        else if (config.contains("instance_file"))
            shared = parse_file<Instance>((base / config.at("instance_file").get<string>()).string(), parse_instance);

        auto instance_for = [&] (const nlohmann::json & entry) -> Instance {
            if (entry.is_object() && entry.contains("instance"))
                return parse_instance(entry.at("instance").get<string>());
            if (! shared)
                throw InputError("the configuration needs an \"instance\" for support entries without one");
            return *shared;
        };

        vector<std::pair<Example, double> > support;
        if (config.contains("support")) {
            for (auto & entry : config.at("support")) {
                auto tuple = (entry.is_object() ? entry.at("tuple") : entry).get<Tuple>();
                double weight = entry.is_object() ? entry.value("weight", 1.0) : 1.0;
                support.emplace_back(Example{instance_for(entry), tuple}, weight);
            }
        }
        else {
            if (! shared)
                throw InputError("the configuration needs an \"instance\" or a \"support\" list");
            if (k != 1)
                throw InputError("a default support exists only for unary targets; list the \"support\" tuples");
            for (auto & v : shared->active_domain())
                support.emplace_back(Example{*shared, {v}}, 1.0);
        }

        if (config.contains("weights")) {
            auto weights = config.at("weights").get<vector<double> >();
            if (weights.size() != support.size())
                throw InputError("\"weights\" must have one entry per support example");
            for (size_t i = 0 ; i < weights.size() ; ++i)
                support[i].second = weights[i];
        }
        for (auto & [e, w] : support)
            if (e.arity() != k || ! e.well_formed())
                throw InputError("support example " + to_text(e.distinguished) + " is ill-formed or has the wrong arity");
        return Distribution{std::move(support)};
    }

    struct PacArgs
    {
        string config;
        optional<std::uint64_t> seed;
        size_t threads = 0;
        bool timing = false;
    };

    auto run_pac(const PacArgs & args) -> int
    {
        nlohmann::json config;
        try {
            config = nlohmann::json::parse(read_file(args.config));
        }
        catch (const nlohmann::json::exception & e) {
            throw InputError(args.config + ": " + e.what());
        }

        try {
            auto target = config.contains("target_file")
                ? parse_file<Query>((std::filesystem::path(args.config).parent_path() / config.at("target_file").get<string>()).string(), parse_query)
                : parse_query(config.at("target").get<string>());
            auto distribution = support_from_config(config, std::filesystem::path(args.config).parent_path(), arity(target));

            PacParams params;
            params.delta = config.value("delta", params.delta);
            params.epsilon = config.value("epsilon", params.epsilon);
            params.alpha = config.value("alpha", params.alpha);
            params.k_occam = config.value("k_occam", params.k_occam);
            params.n_bits = config.contains("n_bits") ? config.at("n_bits").get<size_t>() : bit_size(target);

            ExperimentOptions options;
            auto learner = config.value("learner", string{"cq"});
            if (learner != "cq" && learner != "ucq")
                throw InputError("\"learner\" must be \"cq\" or \"ucq\"");
            options.learner = learner == "cq" ? LearnerKind::cq : LearnerKind::ucq;
            options.threads = args.threads;

            auto trials = config.value("trials", size_t{10});
            auto reports = run_pac_experiment(target, distribution, params, trials, *args.seed, options);
            for (auto & r : reports) {
                nlohmann::ordered_json line;
                line["seed"] = r.seed;
                line["sample_size_used"] = r.sample_size_used;
                line["hypothesis"] = r.hypothesis ? nlohmann::ordered_json(to_text(*r.hypothesis)) : nlohmann::ordered_json(nullptr);
                line["empirical_error"] = r.empirical_error;
                line["oracle_calls"] = r.oracle_calls;
                if (args.timing)
                    line["wall_time"] = r.wall_time;
                cout << line.dump() << "\n";
            }
            cerr << "trials with error <= " << params.epsilon << ": " << success_rate(reports, params.epsilon) * 100.0 << "%\n";
            return exit_success;
        }
        catch (const nlohmann::json::exception & e) {
            throw InputError(args.config + ": " + e.what());
        }
    }

    auto run_oracle(const string & target) -> int
    {
        TargetOracle oracle{parse_file<Query>(target, parse_query)};
        serve_oracle(std::cin, cout, oracle);
        return exit_success;
    }

    auto kind_from_name(const string & name) -> RandomProfile::Kind
    {
        if (name == "instance") return RandomProfile::Kind::instance;
        if (name == "tree-instance") return RandomProfile::Kind::tree_instance;
        if (name == "cq") return RandomProfile::Kind::cq;
        if (name == "tree-cq") return RandomProfile::Kind::tree_cq;
        return RandomProfile::Kind::labeled_set;
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{"Conjunctive query fitting and learning from examples"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto eval = app.add_subcommand("eval", "Evaluate a query on an instance or on every example of a set");
    eval->add_option("query", eval_args.query, "Query file")->required();
    auto eval_instance = eval->add_option("-i,--instance", eval_args.instance, "Instance file");
    auto eval_examples = eval->add_option("-e,--examples", eval_args.examples, "Example-set file");
    eval->add_option("-t,--tuple", eval_args.tuple, "Distinguished tuple such as (a,b); all answers are listed when absent")
        ->needs(eval_instance);
    eval_instance->excludes(eval_examples);
    eval->add_flag("--tree", eval_args.tree, "Use the tree-shaped evaluator");

    LearnArgs learn_args;
    auto learn = app.add_subcommand("learn", "Learn from labeled examples with a membership oracle");
    learn->require_subcommand(1);
    vector<CLI::App *> learners;
    for (auto name : {"cq", "ucq"}) {
        auto sub = learn->add_subcommand(name, string{"Learn a "} + (name == string{"cq"} ? "CQ" : "UCQ"));
        sub->add_option("examples", learn_args.examples, "Example-set file")->required();
        auto target = sub->add_option("--target", learn_args.target, "Query file answering membership queries");
        auto command = sub->add_option("--oracle-cmd", learn_args.oracle_cmd, "Shell command speaking the oracle protocol");
        target->excludes(command);
        sub->add_flag("-v,--verbose", learn_args.verbose, "Report oracle calls on standard error");
        learners.push_back(sub);
    }

    FitArgs fit_args;
    auto fit = app.add_subcommand("fit", "Decide whether some CQ fits the examples");
    fit->add_option("examples", fit_args.examples, "Example-set file")->required();
    fit->add_option("--max-product-facts", fit_args.max_product_facts, "Give up beyond this product size");
    auto fit_enum = app.add_subcommand("fit-enum", "Find a smallest fitting CQ by enumeration");
    fit_enum->add_option("examples", fit_args.examples, "Example-set file")->required();
    fit_enum->add_option("--max-atoms", fit_args.max_atoms, "Largest query size to try")->capture_default_str();

    GenArgs gen_args;
    auto gen = app.add_subcommand("gen", "Generate example families");
    gen->require_subcommand(1);
    auto gen_cnf = gen->add_subcommand("cnf", "Examples from a DIMACS CNF formula");
    gen_cnf->add_option("dimacs", gen_args.dimacs, "DIMACS file")->required();
    gen_cnf->add_flag("--pad", gen_args.pad, "Pad clauses to three literals");
    auto gen_lasso = gen->add_subcommand("lasso", "Lasso examples whose fitting queries are long");
    gen_lasso->add_option("n", gen_args.n, "Number of primes")->required()->check(CLI::PositiveNumber);
    auto gen_vc = gen->add_subcommand("vc", "Path examples shattered by path queries");
    gen_vc->add_option("n", gen_args.n, "Path length")->required();
    gen_vc->add_option("--subset", gen_args.subset, "Positions labeled positive")->delimiter(',');
    auto gen_rand = gen->add_subcommand("random", "Random instances, queries or planted example sets");
    gen_rand->add_option("--seed", gen_args.seed, "Random seed")->required();
    gen_rand->add_option("--kind", gen_args.kind, "What to generate")
        ->check(CLI::IsMember({"instance", "tree-instance", "cq", "tree-cq", "labeled-set"}))->capture_default_str();
    gen_rand->add_option("--values", gen_args.profile.values, "Most values or variables")->capture_default_str();
    gen_rand->add_option("--facts", gen_args.profile.facts, "Most facts per instance")->capture_default_str();
    gen_rand->add_option("--atoms", gen_args.profile.atoms, "Most atoms per query")->capture_default_str();
    gen_rand->add_option("--arity", gen_args.profile.arity, "Query arity")->capture_default_str();
    gen_rand->add_option("--examples", gen_args.profile.examples, "Most examples per set")->capture_default_str();
    gen_rand->add_option("--disjuncts", gen_args.profile.disjuncts, "Disjuncts of the planted target")->capture_default_str();
    gen_rand->add_flag("--tree", gen_args.profile.tree, "Tree-shaped examples and target");

    string quotient_path;
    auto quotient = app.add_subcommand("quotient", "Reduce a CQ to an equivalent tree-shaped CQ on tree-shaped instances");
    quotient->add_option("query", quotient_path, "Query file")->required();

    PacArgs pac_args;
    auto pac = app.add_subcommand("pac-run", "Run PAC trials described by a JSON configuration");
    pac->add_option("config", pac_args.config, "Configuration file")->required();
    pac->add_option("--seed", pac_args.seed, "Master seed")->required();
    pac->add_option("--threads", pac_args.threads, "Worker threads, 0 for one per core");
    pac->add_flag("--timing", pac_args.timing, "Add wall_time to each record");

    string oracle_target;
    auto oracle = app.add_subcommand("oracle", "Answer membership queries on standard streams");
    oracle->add_option("--target", oracle_target, "Query file")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? exit_success : exit_usage;
    }

    try {
        if (eval->parsed()) {
            if (eval_args.instance.empty() == eval_args.examples.empty())
                throw InputError("eval needs exactly one of --instance and --examples");
            return run_eval(eval_args);
        }
        if (learn->parsed()) {
            if (learn_args.target.empty() == learn_args.oracle_cmd.empty())
                throw InputError("learn needs exactly one of --target and --oracle-cmd");
            return run_learn(learn_args, learners[1]->parsed());
        }
        if (fit->parsed())
            return run_fit(fit_args);
        if (fit_enum->parsed())
            return run_fit_enum(fit_args);
        if (gen_cnf->parsed())
            return run_gen_cnf(gen_args);
        if (gen_lasso->parsed())
            return run_gen_lasso(gen_args);
        if (gen_vc->parsed())
            return run_gen_vc(gen_args);
        if (gen_rand->parsed()) {
            gen_args.profile.kind = kind_from_name(gen_args.kind);
            return run_gen_random(gen_args);
        }
        if (quotient->parsed())
            return run_quotient(quotient_path);
        if (pac->parsed())
            return run_pac(pac_args);
        if (oracle->parsed())
            return run_oracle(oracle_target);
    }
    catch (const std::exception & e) {
        cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
