#include "report_json.hh"

#include <posmt/eval.hh>

#include <algorithm>

namespace posmt::io
{
    using std::string;
    using std::vector;

    namespace
    {
        auto symbols_json(const vector<Symbol> & symbols) -> Json
        {
            auto out = Json::array();
            for (auto & s : symbols)
                out.push_back({{"name", s.name}, {"arity", s.arity}});
            return out;
        }

        auto symbols_from(const Json & j) -> vector<Symbol>
        {
            vector<Symbol> out;
            for (auto & s : j)
                out.push_back(Symbol{s.at("name").get<string>(), s.at("arity").get<int>()});
            return out;
        }

        auto names_of(const FiniteStructure & s, const vector<Element> & elements) -> Json
        {
            auto out = Json::array();
            for (auto e : elements)
                out.push_back(s.element_name(e));
            return out;
        }

        auto element_of(const FiniteStructure & s, const Json & name) -> Element
        {
            auto text = name.get<string>();
            auto e = s.element_index(text);
            if (! e)
                throw SemanticError("unknown element '" + text + "'");
            return *e;
        }

        auto elements_from(const FiniteStructure & s, const Json & j) -> vector<Element>
        {
            vector<Element> out;
            for (auto & name : j)
                out.push_back(element_of(s, name));
            return out;
        }

        auto sentences_json(const vector<Sentence> & sentences) -> Json
        {
            auto out = Json::array();
            for (auto & s : sentences)
                out.push_back(to_string(s));
            return out;
        }

        auto class_json(const StructureClass & c) -> Json
        {
            Json j{{"name", c.name()}, {"signature", to_json(*c.signature)}};
            j["theory"] = c.theory ? to_json(*c.theory) : Json(nullptr);
            return j;
        }

        auto class_from(const Json & j) -> StructureClass
        {
            if (! j.at("theory").is_null())
                return StructureClass::of(theory_from_json(j.at("theory")));
            return StructureClass::all(signature_from_json(j.at("signature")));
        }

        auto solution_json(const AmalgamationSolution & s, const FiniteStructure & left,
                const FiniteStructure & right) -> Json
        {
            return {{"apex", to_json(s.apex)}, {"left_out", names_of(s.apex, s.left_out)},
                {"right_out", names_of(s.apex, s.right_out)},
                {"left_kind", to_json(s.left_kind, Morphism{left, s.apex, s.left_out})},
                {"right_kind", to_json(s.right_kind, Morphism{right, s.apex, s.right_out})},
                {"commutation", names_of(s.apex, s.commutation)}, {"strong_holds", s.strong_holds},
                {"method", s.method}};
        }

        auto result_json(const AmalgamationResult & r, const FiniteStructure & left, const FiniteStructure & right)
            -> Json
        {
            Json j{{"value", to_string(r.value)}, {"summary", r.summary}, {"notes", r.notes},
                {"apexes_tried", r.apexes_tried}};
            j["solution"] = r.solution ? solution_json(*r.solution, left, right) : Json(nullptr);
            return j;
        }

        auto check_solution(const AmalgamationProblem & p, const Json & solution, const string & label,
                RecheckResult & out) -> void
        {
            if (solution.is_null())
                return;
            ++out.checked;
            try {
                for (auto & f : verify_solution(p, solution_from_json(solution, p)))
                    out.failures.push_back(label + ": " + f);
            }
            catch (const Error & e) {
                out.failures.push_back(label + ": " + e.what());
            }
        }

        auto recheck_pc(const Json & j, RecheckResult & out) -> void
        {
            auto & v = j.at("verdict");
            if (v.at("value") != "no")
                return;
            auto & cert = v.at("certificate");
            if (! cert.at("structures").contains("M") || ! cert.at("structures").contains("B"))
                return;
            ++out.checked;
            auto theory = theory_from_json(j.at("theory"));
            auto m = structure_from_json(cert.at("structures").at("M"));
            auto b = structure_from_json(cert.at("structures").at("B"));
            Json map;
            for (auto & entry : cert.at("maps"))
                if (entry.at("name") == "f")
                    map = entry.at("map");
            if (map.is_null()) {
                out.failures.push_back("pc: certificate has no map f");
                return;
            }
            Morphism f{m, b, elements_from(b, map)};
            validate_morphism(f);
            if (! models_all(b, theory.sentences))
                out.failures.push_back("pc: the target is not a model of " + theory.name);
            else if (! is_homomorphism(f))
                out.failures.push_back("pc: f is not a homomorphism");
            else if (find_retraction(f))
                out.failures.push_back("pc: f is an immersion");
        }

        auto recheck_classify(const Json & j, RecheckResult & out) -> void
        {
            ++out.checked;
            auto & mj = j.at("morphism");
            auto source = structure_from_json(mj.at("source"));
            auto target = structure_from_json(mj.at("target"));
            Morphism m{source, target, elements_from(target, mj.at("map"))};
            validate_morphism(m);
            auto & cert = j.at("certificate");
            auto kind = parse_kind(cert.at("kind").get<string>());
            auto fresh = classify_morphism(m, cert.at("strong_bound").get<int>());
            if (fresh.kind != kind)
                out.failures.push_back("classify: recorded " + to_string(kind) + ", found " + to_string(fresh.kind));
            if (! cert.at("retraction").is_null()) {
                Morphism r{target, source, elements_from(source, cert.at("retraction"))};
                validate_morphism(r);
                bool inverse = is_homomorphism(r);
                for (Element a = 0; a < source.size() && inverse; ++a)
                    inverse = r(m(a)) == a;
                if (! inverse)
                    out.failures.push_back("classify: the retraction is not a left inverse homomorphism");
            }
        }

        auto recheck_homs(const Json & j, RecheckResult & out) -> void
        {
            auto source = structure_from_json(j.at("source"));
            auto target = structure_from_json(j.at("target"));
            auto kind = parse_kind(j.at("kind").get<string>());
            for (auto & entry : j.at("homomorphisms")) {
                ++out.checked;
                Morphism m{source, target, elements_from(target, entry.at("map"))};
                validate_morphism(m);
                if (! is_homomorphism(m) || ! certify_kind(m, kind, j.at("k").get<int>()))
                    out.failures.push_back("homs: a listed map is not " + to_string(kind));
            }
        }

        auto recheck_basis(const Json & j, RecheckResult & out) -> void
        {
            auto & bj = j.at("basis");
            auto base = structure_from_json(bj.at("base"));
            vector<FiniteStructure> wings;
            for (auto & w : bj.at("wings"))
                wings.push_back(structure_from_json(w));
            AmalgamationProblem p{base, {}, {}, {}, {}, parse_kind_tuple(bj.at("kinds").get<string>()),
                class_from(bj.at("class")), bj.at("strong").get<bool>(), bj.at("strict").get<bool>(),
                budget_from_json(bj.at("budget"))};
            std::size_t index = 0;
            for (auto & inst : bj.at("instances")) {
                p.left = wings.at(inst.at("left_wing").get<std::size_t>());
                p.right = wings.at(inst.at("right_wing").get<std::size_t>());
                p.f = elements_from(p.left, inst.at("f"));
                p.g = elements_from(p.right, inst.at("g"));
                check_solution(p, inst.at("result").at("solution"), "instance " + std::to_string(index++), out);
            }
        }

        auto recheck_theorem(const Json & j, RecheckResult & out) -> void
        {
            auto & tj = j.at("theorem");
            auto cls = class_from(tj.at("class"));
            auto kinds = parse_kind_tuple(tj.at("kinds").get<string>());
            auto budget = budget_from_json(tj.at("budget"));
            std::size_t index = 0;
            for (auto & inst : tj.at("instances")) {
                auto base = structure_from_json(inst.at("base"));
                auto left = structure_from_json(inst.at("left"));
                auto right = structure_from_json(inst.at("right"));
                Budget b = budget;
                b.N = inst.at("apex_bound").get<int>();
                AmalgamationProblem p{base, left, right, elements_from(left, inst.at("f")),
                    elements_from(right, inst.at("g")), kinds, cls, tj.at("strong").get<bool>(),
                    tj.at("strict").get<bool>(), b};
                auto label = "instance " + std::to_string(index++);
                if (inst.at("outcome") == "witnessed" && inst.at("solution").is_null())
                    out.failures.push_back(label + ": witnessed without a solution");
                check_solution(p, inst.at("solution"), label, out);
            }
        }
    }

    auto to_json(const Signature & s) -> Json
    {
        return {{"name", s.name()}, {"relations", symbols_json(s.relations())},
            {"functions", symbols_json(s.functions())}, {"constants", s.constants()}};
    }

    auto signature_from_json(const Json & j) -> SignatureRef
    {
        return make_signature(Signature(j.at("name").get<string>(), symbols_from(j.at("relations")),
                symbols_from(j.at("functions")), j.at("constants").get<vector<string>>()));
    }

    auto to_json(const FiniteStructure & s) -> Json
    {
        auto & sig = s.signature();
        Json relations = Json::object(), functions = Json::object(), constants = Json::object();
        for (std::size_t r = 0; r < sig.relations().size(); ++r) {
            auto rows = Json::array();
            int arity = sig.relations()[r].arity;
            auto & table = s.relation_table(int(r));
            for (std::size_t i = 0; i < table.size(); ++i)
                if (table[i])
                    rows.push_back(names_of(s, tuple_at(s.size(), arity, i)));
            relations[sig.relations()[r].name] = rows;
        }
        for (std::size_t f = 0; f < sig.functions().size(); ++f) {
            auto rows = Json::array();
            int arity = sig.functions()[f].arity;
            auto & table = s.function_table(int(f));
            for (std::size_t i = 0; i < table.size(); ++i) {
                auto row = tuple_at(s.size(), arity, i);
                row.push_back(table[i]);
                rows.push_back(names_of(s, row));
            }
            functions[sig.functions()[f].name] = rows;
        }
        for (std::size_t c = 0; c < sig.constants().size(); ++c)
            constants[sig.constants()[c]] = s.element_name(s.constant(int(c)));
        return {{"signature", to_json(sig)}, {"elements", s.element_names()}, {"relations", relations},
            {"functions", functions}, {"constants", constants}};
    }

    auto structure_from_json(const Json & j) -> FiniteStructure
    {
        auto sig = signature_from_json(j.at("signature"));
        auto names = j.at("elements").get<vector<string>>();
        int n = int(names.size());
        auto index = [&](const Json & name) {
            auto it = std::find(names.begin(), names.end(), name.get<string>());
            if (it == names.end())
                throw SemanticError("unknown element '" + name.get<string>() + "'");
            return Element(it - names.begin());
        };
        vector<vector<signed char>> relations;
        for (auto & r : sig->relations()) {
            vector<signed char> table(table_size(n, r.arity), 0);
            for (auto & row : j.at("relations").at(r.name)) {
                vector<Element> args;
                for (auto & a : row)
                    args.push_back(index(a));
                table.at(tuple_index(n, args)) = 1;
            }
            relations.push_back(std::move(table));
        }
        vector<vector<int>> functions;
        for (auto & f : sig->functions()) {
            vector<int> table(table_size(n, f.arity), -1);
            for (auto & row : j.at("functions").at(f.name)) {
                vector<Element> args;
                for (auto & a : row)
                    args.push_back(index(a));
                auto result = args.back();
                args.pop_back();
                table.at(tuple_index(n, args)) = result;
            }
            functions.push_back(std::move(table));
        }
        vector<Element> constants;
        for (auto & c : sig->constants())
            constants.push_back(index(j.at("constants").at(c)));
        return FiniteStructure(sig, names, std::move(relations), std::move(functions), std::move(constants));
    }

    auto to_json(const Budget & b) -> Json
    {
        return {{"n", b.n}, {"N", b.N}, {"k", b.k}, {"node_cap", b.node_cap}};
    }

    auto budget_from_json(const Json & j) -> Budget
    {
        Budget b;
        b.n = j.at("n").get<int>();
        b.N = j.at("N").get<int>();
        b.k = j.at("k").get<int>();
        b.node_cap = j.at("node_cap").get<std::size_t>();
        return b;
    }

    auto to_json(const Theory & t) -> Json
    {
        return {{"name", t.name}, {"signature", to_json(*t.signature)}, {"sentences", sentences_json(t.sentences)}};
    }

    auto theory_from_json(const Json & j) -> Theory
    {
        auto sig = signature_from_json(j.at("signature"));
        Signature renamed("sig", sig->relations(), sig->functions(), sig->constants());
        string text = format_signature(renamed) + "theory T over sig {\n";
        for (auto & s : j.at("sentences"))
            text += "    " + s.get<string>() + ";\n";
        text += "}\n";
        Workspace w;
        SourceText source{"<report>", text};
        auto report = w.load(std::span(&source, 1));
        for (auto & o : report.objects)
            if (! o.ok())
                throw SemanticError("embedded theory: " + o.error);
        auto t = w.theory("T");
        t.name = j.at("name").get<string>();
        t.signature = sig;
        return t;
    }

    auto to_json(const Verdict & v) -> Json
    {
        Json structures = Json::object(), sentences = Json::object(), details = Json::object();
        auto maps = Json::array();
        for (auto & [label, s] : v.certificate.structures)
            structures[label] = to_json(s);
        for (auto & m : v.certificate.maps) {
            auto * target = v.certificate.structure(m.to);
            Json entry{{"name", m.name}, {"from", m.from}, {"to", m.to}};
            if (target)
                entry["map"] = names_of(*target, m.map);
            else
                entry["map"] = m.map;
            maps.push_back(entry);
        }
        for (auto & [label, s] : v.certificate.sentences)
            sentences[label] = to_string(s);
        for (auto & [label, d] : v.certificate.details)
            details[label] = d;
        return {{"value", to_string(v.value)}, {"summary", v.summary}, {"budget", to_json(v.budget)},
            {"certificate", {{"structures", structures}, {"maps", maps}, {"sentences", sentences},
                                {"details", details}}},
            {"notes", v.notes}};
    }

    auto to_json(const KindCertificate & c, const Morphism & m) -> Json
    {
        Json j{{"kind", to_string(c.kind)}, {"letter", string(1, kind_letter(c.kind))},
            {"strong_bound", c.strong_bound}};
        j["retraction"] = c.retraction ? names_of(m.source, *c.retraction) : Json(nullptr);
        j["refutation"] = c.refutation ? Json(to_string(*c.refutation)) : Json(nullptr);
        return j;
    }

    auto to_json(const JCReport & r) -> Json
    {
        auto conditions = Json::array();
        for (auto & c : r.conditions)
            conditions.push_back({{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
        return {{"conditions", conditions}, {"jc", to_json(r.jc)}, {"agree", r.agree}, {"budget", to_json(r.budget)}};
    }

    auto to_json(const DiagramSet & d) -> Json
    {
        return {{"kind", to_string(d.kind)}, {"signature", to_json(*d.signature)}, {"bound", d.bound},
            {"sources", d.sources.size()}, {"constants", d.constant_names},
            {"sentences", sentences_json(d.sentences)}};
    }

    auto to_json(const AmalgamationProblem & p) -> Json
    {
        return {{"base", to_json(p.base)}, {"left", to_json(p.left)}, {"right", to_json(p.right)},
            {"f", names_of(p.left, p.f)}, {"g", names_of(p.right, p.g)}, {"kinds", to_string(p.kinds)},
            {"class", class_json(p.cls)}, {"strong", p.strong}, {"strict", p.strict}, {"budget", to_json(p.budget)}};
    }

    auto problem_from_json(const Json & j) -> AmalgamationProblem
    {
        AmalgamationProblem p;
        p.base = structure_from_json(j.at("base"));
        p.left = structure_from_json(j.at("left"));
        p.right = structure_from_json(j.at("right"));
        p.f = elements_from(p.left, j.at("f"));
        p.g = elements_from(p.right, j.at("g"));
        p.kinds = parse_kind_tuple(j.at("kinds").get<string>());
        p.cls = class_from(j.at("class"));
        p.strong = j.at("strong").get<bool>();
        p.strict = j.at("strict").get<bool>();
        p.budget = budget_from_json(j.at("budget"));
        return p;
    }

    auto to_json(const AmalgamationResult & r, const AmalgamationProblem & p) -> Json
    {
        return result_json(r, p.left, p.right);
    }

    auto solution_from_json(const Json & j, const AmalgamationProblem & p) -> AmalgamationSolution
    {
        AmalgamationSolution s;
        s.apex = structure_from_json(j.at("apex"));
        s.left_out = elements_from(s.apex, j.at("left_out"));
        s.right_out = elements_from(s.apex, j.at("right_out"));
        if (s.left_out.size() != std::size_t(p.left.size()) || s.right_out.size() != std::size_t(p.right.size()))
            throw SemanticError("out-map sizes do not match the problem");
        for (std::size_t a = 0; a < p.f.size(); ++a)
            s.commutation.push_back(s.left_out.at(p.f[a]));
        s.left_kind.kind = parse_kind(j.at("left_kind").at("kind").get<string>());
        s.right_kind.kind = parse_kind(j.at("right_kind").at("kind").get<string>());
        s.strong_holds = j.at("strong_holds").get<bool>();
        s.method = j.at("method").get<string>();
        return s;
    }

    auto to_json(const BasisReport & r) -> Json
    {
        auto wings = Json::array();
        for (auto & w : r.wings)
            wings.push_back(to_json(w));
        auto instances = Json::array();
        for (auto & inst : r.instances) {
            auto & left = r.wings[inst.left_wing];
            auto & right = r.wings[inst.right_wing];
            instances.push_back({{"left_wing", inst.left_wing}, {"right_wing", inst.right_wing},
                {"f", names_of(left, inst.f)}, {"g", names_of(right, inst.g)},
                {"result", result_json(inst.result, left, right)}});
        }
        return {{"base", to_json(r.base)}, {"kinds", to_string(r.kinds)}, {"class", class_json(r.cls)},
            {"strong", r.strong}, {"strict", r.strict}, {"budget", to_json(r.budget)},
            {"verdict", to_string(r.verdict)}, {"wings", wings}, {"instances", instances}};
    }

    auto to_json(const TheoremReport & r) -> Json
    {
        auto instances = Json::array();
        for (auto & inst : r.instances) {
            Json j{{"base", to_json(inst.base)}, {"left", to_json(inst.left)}, {"right", to_json(inst.right)},
                {"f", names_of(inst.left, inst.f)}, {"g", names_of(inst.right, inst.g)},
                {"apex_bound", inst.apex_bound}, {"outcome", to_string(inst.outcome)},
                {"reverified", inst.reverified}, {"note", inst.note}};
            j["solution"] = inst.solution ? solution_json(*inst.solution, inst.left, inst.right) : Json(nullptr);
            instances.push_back(j);
        }
        return {{"id", r.id}, {"statement", r.statement}, {"kinds", to_string(r.kinds)},
            {"class", class_json(r.cls)}, {"strong", r.strong}, {"strict", r.strict}, {"seed", r.seed},
            {"budget", to_json(r.budget)}, {"witnessed", r.witnessed()}, {"total", r.instances.size()},
            {"red_flags", r.red_flags}, {"instances", instances}};
    }

    auto to_json(const LoadReport & r) -> Json
    {
        auto objects = Json::array();
        for (auto & o : r.objects)
            objects.push_back({{"kind", o.kind}, {"name", o.name}, {"source", o.source}, {"ok", o.ok()},
                {"error", o.error}});
        return {{"ok", r.ok()}, {"objects", objects}};
    }

    auto report(const string & command) -> Json
    {
        return {{"schema", schema}, {"command", command}};
    }

    auto recheck(const Json & j) -> RecheckResult
    {
        if (! j.is_object() || j.value("schema", "") != schema)
            throw SemanticError(string("not a ") + schema + " document");
        RecheckResult out;
        auto command = j.at("command").get<string>();
        try {
            if (command == "pc")
                recheck_pc(j, out);
            else if (command == "classify")
                recheck_classify(j, out);
            else if (command == "homs")
                recheck_homs(j, out);
            else if (command == "amalgamate")
                check_solution(problem_from_json(j.at("problem")), j.at("result").at("solution"), "amalgamate", out);
            else if (command == "basis")
                recheck_basis(j, out);
            else if (command == "verify")
                recheck_theorem(j, out);
        }
        catch (const nlohmann::json::exception & e) {
            throw SemanticError(string("malformed report: ") + e.what());
        }
        return out;
    }
}
