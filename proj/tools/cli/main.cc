#include "report_json.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/workspace.hh>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

using namespace posmt;
using posmt::io::Json;
using std::string;
using std::vector;

namespace
{
    enum Exit
    {
        exit_yes = 0,
        exit_no = 1,
        exit_parse = 2,
        exit_semantic = 3,
        exit_unknown = 4
    };

    auto exit_for(VerdictValue v) -> int
    {
        switch (v) {
        case VerdictValue::Yes: return exit_yes;
        case VerdictValue::No: return exit_no;
        default: return exit_unknown;
        }
    }

    struct Options
    {
        vector<string> files;
        bool json = false;
        Budget budget;
        std::uint64_t seed = 1;
        bool strict = false;
        bool apex_bound_given = false;
    };

    struct Context
    {
        Options options;
        Workspace workspace;

        auto emit(const Json & j) const -> void { std::cout << j.dump(2) << '\n'; }
    };

    auto read_file(const string & path) -> string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw SemanticError("cannot read '" + path + "'");
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    auto load_sources(const vector<string> & files) -> vector<SourceText>
    {
        vector<SourceText> sources;
        for (auto & f : files)
            sources.push_back(SourceText{f, read_file(f)});
        return sources;
    }

    auto budget_line(const Budget & b) -> string
    {
        return "budget: n=" + std::to_string(b.n) + " N=" + std::to_string(b.N) + " k=" + std::to_string(b.k)
            + " node_cap=" + std::to_string(b.node_cap);
    }

    auto format_map(const FiniteStructure & from, const FiniteStructure & to, const vector<Element> & map) -> string
    {
        string out = "{";
        for (Element a = 0; a < from.size(); ++a)
            out += (a ? ", " : "") + from.element_name(a) + "->" + to.element_name(map.at(a));
        return out + "}";
    }

    auto print_verdict(const Verdict & v) -> void
    {
        std::cout << to_string(v.value) << '\n';
        if (! v.summary.empty())
            std::cout << v.summary << '\n';
        std::cout << budget_line(v.budget) << '\n';
        auto & c = v.certificate;
        for (auto & [label, s] : c.structures)
            std::cout << format_structure(s, label);
        for (auto & m : c.maps) {
            auto * from = c.structure(m.from);
            auto * to = c.structure(m.to);
            std::cout << "map " << m.name << ": " << m.from << " -> " << m.to << " ";
            if (from && to)
                std::cout << format_map(*from, *to, m.map) << '\n';
            else {
                for (auto e : m.map)
                    std::cout << e << ' ';
                std::cout << '\n';
            }
        }
        for (auto & [label, s] : c.sentences)
            std::cout << label << ": " << to_string(s) << '\n';
        for (auto & [label, d] : c.details)
            std::cout << label << ": " << d << '\n';
        for (auto & n : v.notes)
            std::cout << "note: " << n << '\n';
    }

    auto verdict_output(const Context & ctx, const string & command, const Verdict & v, Json extra = Json::object())
        -> int
    {
        if (ctx.options.json) {
            auto j = io::report(command);
            for (auto & [key, value] : extra.items())
                j[key] = value;
            j["verdict"] = io::to_json(v);
            ctx.emit(j);
        }
        else
            print_verdict(v);
        return exit_for(v.value);
    }

    /// A theory name, or <diagram kind>:<structure> such as Tu*:loop.
    auto theory_arg(const Context & ctx, const string & spec) -> Theory
    {
        auto colon = spec.find(':');
        if (colon == string::npos)
            return ctx.workspace.theory(spec);
        auto kind = parse_diagram_kind(spec.substr(0, colon));
        auto & s = ctx.workspace.structure(spec.substr(colon + 1));
        return to_theory(diagram(s, kind, ctx.options.budget), spec);
    }

    auto kind_arg(const string & text) -> MorphismKind
    {
        return parse_kind(text);
    }

    auto cmd_check(Context & ctx, const vector<string> & files) -> int
    {
        auto all = ctx.options.files;
        all.insert(all.end(), files.begin(), files.end());
        auto sources = load_sources(all);
        auto w = Workspace::prelude();
        auto report = w.load(sources);
        if (ctx.options.json) {
            auto j = io::report("check");
            j["load"] = io::to_json(report);
            ctx.emit(j);
        }
        else
            for (auto & o : report.objects) {
                if (o.ok())
                    std::cout << "OK    " << o.kind << ' ' << o.name << '\n';
                else
                    std::cout << "ERROR " << o.kind << ' ' << o.name << " (" << o.source << "): " << o.error << '\n';
            }
        return report.ok() ? exit_yes : exit_semantic;
    }

    auto cmd_models(Context & ctx, const string & theory) -> int
    {
        auto & t = ctx.workspace.theory(theory);
        auto ms = models(t, ctx.options.budget);
        if (ctx.options.json) {
            auto j = io::report("models");
            j["theory"] = io::to_json(t);
            j["budget"] = io::to_json(ctx.options.budget);
            j["models"] = Json::array();
            for (auto & m : ms)
                j["models"].push_back(io::to_json(m));
            ctx.emit(j);
        }
        else {
            std::cout << ms.size() << " models of " << t.name << " up to isomorphism\n"
                      << budget_line(ctx.options.budget) << '\n';
            for (std::size_t i = 0; i < ms.size(); ++i)
                std::cout << format_structure(ms[i], "M" + std::to_string(i + 1));
        }
        return exit_yes;
    }

    auto cmd_homs(Context & ctx, const string & from, const string & to, const string & kind_text) -> int
    {
        auto & a = ctx.workspace.structure(from);
        auto & b = ctx.workspace.structure(to);
        auto kind = kind_arg(kind_text);
        auto & budget = ctx.options.budget;
        auto homs = enumerate_homs(a, b, {}, kind, budget.k, budget.node_cap);
        for (auto & h : homs)
            h.certificate = classify_morphism(h.morphism, budget.k);
        if (ctx.options.json) {
            auto j = io::report("homs");
            j["source"] = io::to_json(a);
            j["target"] = io::to_json(b);
            j["kind"] = to_string(kind);
            j["k"] = budget.k;
            j["homomorphisms"] = Json::array();
            for (auto & h : homs) {
                auto names = Json::array();
                for (auto e : h.morphism.map)
                    names.push_back(b.element_name(e));
                j["homomorphisms"].push_back({{"map", names}, {"kind", to_string(h.certificate.kind)}});
            }
            ctx.emit(j);
        }
        else {
            std::cout << homs.size() << " morphisms " << from << " -> " << to << " of kind at least "
                      << to_string(kind) << '\n';
            for (auto & h : homs)
                std::cout << format_map(a, b, h.morphism.map) << ' ' << to_string(h.certificate.kind) << '\n';
        }
        return exit_yes;
    }

    auto cmd_classify(Context & ctx, const string & name) -> int
    {
        auto & nm = ctx.workspace.morphism(name);
        auto & m = nm.morphism;
        auto cert = classify_morphism(m, 0);
        if (ctx.options.json) {
            auto j = io::report("classify");
            j["morphism"] = {{"name", name}, {"source", io::to_json(m.source)}, {"target", io::to_json(m.target)},
                {"map", Json::array()}};
            for (auto e : m.map)
                j["morphism"]["map"].push_back(m.target.element_name(e));
            j["certificate"] = io::to_json(cert, m);
            ctx.emit(j);
        }
        else {
            std::cout << to_string(cert.kind) << '\n'
                      << name << ": " << nm.from << " -> " << nm.to << ' ' << format_map(m.source, m.target, m.map)
                      << '\n';
            if (cert.retraction)
                std::cout << "retraction: " << format_map(m.target, m.source, *cert.retraction) << '\n';
            if (cert.refutation)
                std::cout << "refutation: " << to_string(*cert.refutation) << '\n';
        }
        return exit_yes;
    }

    auto cmd_amalgamate(Context & ctx, const string & problem, const string & base, const string & left,
            const string & right, const string & kinds, const string & theory, bool strong) -> int
    {
        AmalgamationProblem p;
        if (! problem.empty())
            p = ctx.workspace.resolve(ctx.workspace.problem(problem), ctx.options.budget);
        else {
            if (left.empty() || right.empty())
                throw PreconditionError("amalgamate needs --problem, or --left and --right morphisms");
            ProblemSpec spec;
            spec.left = left;
            spec.right = right;
            spec.base = base.empty() ? ctx.workspace.morphism(left).from : base;
            spec.kinds = parse_kind_tuple(kinds);
            spec.theory = theory;
            spec.strong = strong;
            p = ctx.workspace.resolve(spec, ctx.options.budget);
        }
        if (ctx.options.strict)
            p.strict = true;
        auto result = solve_amalgamation(p);
        if (ctx.options.json) {
            auto j = io::report("amalgamate");
            j["problem"] = io::to_json(p);
            j["result"] = io::to_json(result, p);
            ctx.emit(j);
        }
        else {
            std::cout << to_string(result.value) << '\n'
                      << result.summary << '\n'
                      << "kinds " << to_string(p.kinds) << " in " << p.cls.name() << (p.strong ? ", strong" : "")
                      << '\n'
                      << budget_line(p.budget) << '\n';
            if (auto & s = result.solution) {
                std::cout << format_structure(s->apex, "D");
                std::cout << "g': " << format_map(p.left, s->apex, s->left_out) << ' ' << to_string(s->left_kind.kind)
                          << '\n';
                std::cout << "f': " << format_map(p.right, s->apex, s->right_out) << ' '
                          << to_string(s->right_kind.kind) << '\n';
                std::cout << "method: " << s->method << '\n';
            }
            for (auto & n : result.notes)
                std::cout << "note: " << n << '\n';
        }
        return exit_for(result.value);
    }

    auto cmd_basis(Context & ctx, const string & structure, const string & kinds, const string & theory, bool strong)
        -> int
    {
        auto & a = ctx.workspace.structure(structure);
        auto cls = theory.empty() ? StructureClass::all(a.signature_ref())
                                  : StructureClass::of(ctx.workspace.theory(theory));
        auto report = check_basis(a, parse_kind_tuple(kinds), cls, strong, ctx.options.budget, ctx.options.strict);
        if (ctx.options.json) {
            auto j = io::report("basis");
            j["basis"] = io::to_json(report);
            ctx.emit(j);
        }
        else {
            std::size_t solved = 0;
            for (auto & inst : report.instances)
                solved += inst.result.value == VerdictValue::Yes;
            std::cout << to_string(report.verdict) << '\n'
                      << structure << " as a " << to_string(report.kinds) << (strong ? "-strong" : "")
                      << " amalgamation basis of " << report.class_name << '\n'
                      << solved << "/" << report.instances.size() << " instances amalgamated\n"
                      << budget_line(report.budget) << '\n';
            for (std::size_t i = 0; i < report.instances.size(); ++i) {
                auto & inst = report.instances[i];
                if (inst.result.value == VerdictValue::Yes)
                    continue;
                std::cout << "instance " << i << ": " << to_string(inst.result.value) << ", "
                          << inst.result.summary << '\n';
                std::cout << format_structure(report.wings[inst.left_wing], "B")
                          << format_structure(report.wings[inst.right_wing], "C");
            }
        }
        return exit_for(report.verdict);
    }

    auto cmd_verify(Context & ctx, const string & id, int instances) -> int
    {
        TheoremOptions o;
        o.seed = ctx.options.seed;
        o.instances = instances;
        o.N = ctx.options.apex_bound_given ? ctx.options.budget.N : 0;
        o.strict = ctx.options.strict;
        auto report = verify_theorem(id, o, ctx.options.budget);
        auto total = report.instances.size();
        auto witnessed = report.witnessed();
        if (ctx.options.json) {
            auto j = io::report("verify");
            j["theorem"] = io::to_json(report);
            ctx.emit(j);
        }
        else {
            std::cout << id << ": " << report.statement << '\n'
                      << "kinds " << to_string(report.kinds) << " in " << report.class_name
                      << (report.strong ? ", strong" : "") << '\n'
                      << "seed " << report.seed << ", apex bound "
                      << (o.N > 0 ? std::to_string(o.N) : string("2(|B|+|C|)")) << '\n'
                      << budget_line(report.budget) << '\n'
                      << "witnessed " << witnessed << "/" << total;
            if (total)
                std::cout << " (" << (100.0 * double(witnessed) / double(total)) << "%)";
            std::cout << '\n' << "red flags: " << report.red_flags.size() << '\n';
            for (std::size_t i = 0; i < total; ++i)
                if (report.instances[i].outcome != InstanceOutcome::Witnessed)
                    std::cout << "instance " << i << ": " << to_string(report.instances[i].outcome) << ", "
                              << report.instances[i].note << '\n';
        }
        return witnessed == total ? exit_yes : exit_unknown;
    }

    auto cmd_report(Context & ctx, const string & theory) -> int
    {
        auto & t = ctx.workspace.theory(theory);
        auto r = jc_characterization_report(t, ctx.options.budget);
        if (ctx.options.json) {
            auto j = io::report("report");
            j["theory"] = io::to_json(t);
            j["jc_report"] = io::to_json(r);
            ctx.emit(j);
        }
        else {
            std::cout << "JC characterization for " << t.name << '\n' << budget_line(r.budget) << '\n';
            for (auto & c : r.conditions)
                std::cout << (c.holds ? "holds  " : "fails  ") << c.name << (c.detail.empty() ? "" : ": ")
                          << c.detail << '\n';
            std::cout << "is_jc_bounded: " << to_string(r.jc.value) << '\n'
                      << (r.agree ? "conditions agree with the JC verdict" : "conditions disagree with the JC verdict")
                      << '\n';
        }
        if (r.jc.unknown())
            return exit_unknown;
        return r.agree ? exit_yes : exit_no;
    }

    auto cmd_hull(Context & ctx, const string & theory) -> int
    {
        auto & t = ctx.workspace.theory(theory);
        auto h = kaiser_hull_bounded(t, ctx.options.budget);
        if (ctx.options.json) {
            auto j = io::report("hull");
            j["theory"] = io::to_json(t);
            j["budget"] = io::to_json(ctx.options.budget);
            j["hull"] = io::to_json(h.hull);
            j["universal"] = io::to_json(h.universal);
            ctx.emit(j);
        }
        else {
            std::cout << "hull of " << t.name << ": " << h.hull.sentences.size() << " sentences over "
                      << h.hull.sources.size() << " bounded-pc models\n"
                      << budget_line(ctx.options.budget) << '\n';
            for (auto & s : h.hull.sentences)
                std::cout << "  " << to_string(s) << '\n';
            std::cout << "h-universal part: " << h.universal.sentences.size() << " sentences\n";
            for (auto & s : h.universal.sentences)
                std::cout << "  " << to_string(s) << '\n';
        }
        return exit_yes;
    }

    auto cmd_diagram(Context & ctx, const string & structure, const string & kind, const vector<string> & subset)
        -> int
    {
        auto & s = ctx.workspace.structure(structure);
        vector<Element> elements;
        for (auto & name : subset) {
            auto e = s.element_index(name);
            if (! e)
                throw SemanticError("structure " + structure + " has no element '" + name + "'");
            elements.push_back(*e);
        }
        auto d = diagram(s, parse_diagram_kind(kind), ctx.options.budget, elements);
        if (ctx.options.json) {
            auto j = io::report("diagram");
            j["structure"] = io::to_json(s);
            j["diagram"] = io::to_json(d);
            ctx.emit(j);
        }
        else {
            std::cout << to_string(d.kind) << " of " << structure << ": " << d.sentences.size() << " sentences\n";
            for (auto & sentence : d.sentences)
                std::cout << "  " << to_string(sentence) << '\n';
        }
        return exit_yes;
    }

    auto cmd_consistent(Context & ctx, const vector<string> & parts) -> int
    {
        vector<ConsistencyPart> list;
        for (auto & spec : parts) {
            auto colon = spec.find(':');
            if (colon == string::npos)
                list.emplace_back(ctx.workspace.theory(spec));
            else
                list.emplace_back(diagram(ctx.workspace.structure(spec.substr(colon + 1)),
                        parse_diagram_kind(spec.substr(0, colon)), ctx.options.budget));
        }
        return verdict_output(ctx, "consistent", joint_consistency_bounded(list, ctx.options.budget),
                {{"parts", parts}});
    }

    auto cmd_recheck(Context & ctx, const string & path) -> int
    {
        Json j;
        try {
            j = Json::parse(read_file(path));
        }
        catch (const nlohmann::json::parse_error & e) {
            throw posmt::ParseError(ParseError(e.what(), {}), path);
        }
        auto r = io::recheck(j);
        if (ctx.options.json) {
            auto out = io::report("recheck");
            out["checked"] = r.checked;
            out["failures"] = r.failures;
            ctx.emit(out);
        }
        else {
            std::cout << (r.failures.empty() ? "ok" : "failed") << ": " << r.checked << " certificates checked, "
                      << r.failures.size() << " failures\n";
            for (auto & f : r.failures)
                std::cout << "  " << f << '\n';
        }
        return r.failures.empty() ? exit_yes : exit_no;
    }

    auto default_node_cap_from_env() -> std::size_t
    {
        if (auto * text = std::getenv("POSMT_NODE_CAP")) {
            char * end = nullptr;
            auto value = std::strtoull(text, &end, 10);
            if (end && *end == '\0' && value > 0)
                return std::size_t(value);
            throw PreconditionError(string("POSMT_NODE_CAP must be a positive integer, got '") + text + "'");
        }
        return default_node_cap;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"posmt: positive model theory over finite structures"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    long long node_cap = 0;
    auto positive = CLI::Range(1ll, std::numeric_limits<long long>::max(), "POSITIVE");
    app.add_option("-f,--file", o.files, "Workspace files loaded on top of the prelude");
    app.add_flag("--json", o.json, "Machine-readable report");
    app.add_option("--jobs", o.budget.jobs, "Worker threads")->check(positive);
    app.add_option("--n", o.budget.n, "Size bound for models and wings")->check(positive);
    auto * apex = app.add_option("--N", o.budget.N, "Size bound for continuations and apexes")
                      ->check(positive);
    app.add_option("--k", o.budget.k, "Variable bound for conjunctive queries")->check(positive);
    app.add_option("--node-cap", node_cap, "Search node cap (default from POSMT_NODE_CAP)")
        ->check(positive);
    app.add_option("--seed", o.seed, "Seed for generated instances");
    app.add_flag("--strict-strong", o.strict, "Strong condition with a common preimage");

    string structure, theory, t1, t2, from, to, kind = "h", morphism, problem, base, left, right, kinds = "[h]",
        theorem, diagram_kind = "Diag", path;
    vector<string> files, subset, parts;
    bool strong = false;
    int instances = 50;

    auto * check = app.add_subcommand("check", "Parse and validate workspace files");
    check->add_option("files", files, "Files to check");
    auto * models_cmd = app.add_subcommand("models", "Models of a theory up to size n");
    models_cmd->add_option("--theory", theory)->required();
    auto * homs = app.add_subcommand("homs", "Homomorphisms between two structures");
    homs->add_option("--from", from)->required();
    homs->add_option("--to", to)->required();
    homs->add_option("--kind", kind, "h, e, i or s");
    auto * classify = app.add_subcommand("classify", "Strongest kind of a named morphism");
    classify->add_option("--morphism", morphism)->required();
    auto * pc = app.add_subcommand("pc", "Bounded positive closedness of a structure");
    pc->add_option("--structure", structure)->required();
    pc->add_option("--theory", theory)->required();
    auto * jc = app.add_subcommand("jc", "Bounded joint continuation property");
    jc->add_option("--theory", theory)->required();
    auto * tcomplete = app.add_subcommand("tcomplete", "Bounded T-completeness of a pair of theories");
    tcomplete->add_option("--t1", t1)->required();
    tcomplete->add_option("--t2", t2)->required();
    tcomplete->add_option("--theory", theory)->required();
    auto * companion = app.add_subcommand("companion", "Bounded companionship of two theories");
    companion->add_option("--t1", t1, "Theory name or kind:structure, e.g. Tu*:loop")->required();
    companion->add_option("--t2", t2, "Theory name or kind:structure")->required();
    auto * hull = app.add_subcommand("hull", "Bounded Kaiser hull");
    hull->add_option("--theory", theory)->required();
    auto * amalgamate = app.add_subcommand("amalgamate", "Solve one amalgamation problem");
    amalgamate->add_option("--problem", problem, "Named amalgamation block");
    amalgamate->add_option("--base", base);
    amalgamate->add_option("--left", left, "Morphism f: A -> B");
    amalgamate->add_option("--right", right, "Morphism g: A -> C");
    amalgamate->add_option("--kinds", kinds, "Kind tuple such as [i,i,h,h]");
    amalgamate->add_option("--theory", theory, "Class theory; all structures when omitted");
    amalgamate->add_flag("--strong", strong);
    auto * basis = app.add_subcommand("basis", "Check a structure as an amalgamation basis up to n");
    basis->add_option("--structure", structure)->required();
    basis->add_option("--kinds", kinds);
    basis->add_option("--theory", theory);
    basis->add_flag("--strong", strong);
    auto * verify = app.add_subcommand("verify", "Run the instance harness for a theorem");
    verify->add_option("--theorem", theorem)->required()->check(CLI::IsMember(theorem_ids()));
    verify->add_option("--instances", instances)->check(CLI::NonNegativeNumber);
    auto * report = app.add_subcommand("report", "The five JC conditions against the JC verdict");
    report->add_option("--theory", theory)->required();
    auto * extremality = app.add_subcommand("extremality", "Tu/Ti extremality of a theory");
    extremality->add_option("--theory", theory)->required();
    auto * diagram_cmd = app.add_subcommand("diagram", "Diagram sentences of a structure");
    diagram_cmd->add_option("--structure", structure)->required();
    diagram_cmd->add_option("--kind", diagram_kind);
    diagram_cmd->add_option("--subset", subset)->delimiter(',');
    auto * consistent = app.add_subcommand("consistent", "Bounded joint consistency of theories and diagrams");
    consistent->add_option("parts", parts, "Theory names or kind:structure")->required();
    auto * recheck = app.add_subcommand("recheck", "Re-verify the certificates of a JSON report");
    recheck->add_option("report", path)->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? exit_yes : exit_parse;
    }
    o.apex_bound_given = apex->count() > 0;

    try {
        o.budget.node_cap = node_cap > 0 ? std::size_t(node_cap) : default_node_cap_from_env();
        Context ctx{o, {}};
        if (check->parsed())
            return cmd_check(ctx, files);

        ctx.workspace = Workspace::prelude();
        if (! o.files.empty()) {
            auto sources = load_sources(o.files);
            auto loaded = ctx.workspace.load(sources);
            for (auto & obj : loaded.objects)
                if (! obj.ok())
                    throw SemanticError(obj.source + ": " + obj.kind + " " + obj.name + ": " + obj.error);
        }
        auto & b = ctx.options.budget;

        if (models_cmd->parsed())
            return cmd_models(ctx, theory);
        if (homs->parsed())
            return cmd_homs(ctx, from, to, kind);
        if (classify->parsed())
            return cmd_classify(ctx, morphism);
        if (pc->parsed()) {
            auto & t = ctx.workspace.theory(theory);
            auto & m = ctx.workspace.structure(structure);
            return verdict_output(ctx, "pc", is_pc_within(m, t, b),
                    {{"structure", io::to_json(m)}, {"theory", io::to_json(t)}});
        }
        if (jc->parsed()) {
            auto & t = ctx.workspace.theory(theory);
            return verdict_output(ctx, "jc", is_jc_bounded(t, b), {{"theory", io::to_json(t)}});
        }
        if (tcomplete->parsed()) {
            auto a = theory_arg(ctx, t1), c = theory_arg(ctx, t2);
            auto & t = ctx.workspace.theory(theory);
            return verdict_output(ctx, "tcomplete", is_T_complete_pair(a, c, t, b),
                    {{"t1", io::to_json(a)}, {"t2", io::to_json(c)}, {"theory", io::to_json(t)}});
        }
        if (companion->parsed()) {
            auto a = theory_arg(ctx, t1), c = theory_arg(ctx, t2);
            return verdict_output(ctx, "companion", companion_check_bounded(a, c, b),
                    {{"t1", io::to_json(a)}, {"t2", io::to_json(c)}});
        }
        if (hull->parsed())
            return cmd_hull(ctx, theory);
        if (amalgamate->parsed())
            return cmd_amalgamate(ctx, problem, base, left, right, kinds, theory, strong);
        if (basis->parsed())
            return cmd_basis(ctx, structure, kinds, theory, strong);
        if (verify->parsed())
            return cmd_verify(ctx, theorem, instances);
        if (report->parsed())
            return cmd_report(ctx, theory);
        if (extremality->parsed()) {
            auto & t = ctx.workspace.theory(theory);
            return verdict_output(ctx, "extremality", tu_ti_extremality_check(t, b), {{"theory", io::to_json(t)}});
        }
        if (diagram_cmd->parsed())
            return cmd_diagram(ctx, structure, diagram_kind, subset);
        if (consistent->parsed())
            return cmd_consistent(ctx, parts);
        if (recheck->parsed())
            return cmd_recheck(ctx, path);
    }
    catch (const posmt::ParseError & e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (const SemanticError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_semantic;
    }
    catch (const BudgetExhausted & e) {
        std::cerr << "unknown: " << e.what() << '\n';
        return exit_unknown;
    }
    return exit_semantic;
}
