#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/lexer.hh>
#include <posmt/parser.hh>
#include <posmt/workspace.hh>

#include <algorithm>
#include <set>
#include <sstream>

using std::string;
using std::vector;

namespace posmt
{
    auto LoadReport::ok() const -> bool
    {
        return std::all_of(objects.begin(), objects.end(), [](const ObjectStatus & o) { return o.ok(); });
    }

    auto set_budget_entry(Budget & b, const string & key, long long value) -> void
    {
        if (value < 1)
            throw SemanticError("budget entry '" + key + "' must be positive");
        if (key == "n")
            b.n = int(value);
        else if (key == "N")
            b.N = int(value);
        else if (key == "k")
            b.k = int(value);
        else if (key == "node_cap" || key == "node-cap")
            b.node_cap = std::size_t(value);
        else if (key == "jobs")
            b.jobs = int(value);
        else
            throw SemanticError("unknown budget entry '" + key + "'");
    }

    namespace
    {
        enum class BlockKind
        {
            Signature,
            Structure,
            Morphism,
            Theory,
            Amalgamation
        };

        auto to_string(BlockKind k) -> string
        {
            switch (k) {
            case BlockKind::Signature: return "signature";
            case BlockKind::Structure: return "structure";
            case BlockKind::Morphism: return "morphism";
            case BlockKind::Theory: return "theory";
            case BlockKind::Amalgamation: return "amalgamation";
            }
            return "?";
        }

        struct Item
        {
            vector<string> args;
            std::optional<string> result;
        };

        struct TheoryEntry
        {
            SentenceClass declared;
            vector<vector<Token>> parts;
        };

        struct Block
        {
            BlockKind kind;
            string name;
            string source;
            SourceLocation where;
            string over;

            vector<Symbol> relations, functions;
            vector<string> constants;

            vector<string> universe;
            vector<std::pair<string, vector<Item>>> tables;
            vector<std::pair<string, string>> constant_values;

            string from, to;
            vector<std::pair<string, string>> pairs;

            vector<TheoryEntry> entries;

            ProblemSpec problem;
        };

        class BlockReader
        {
        public:
            BlockReader(std::string_view text, string source) : _tokens(tokenize(text)), _source(std::move(source))
            {
            }

            auto read(vector<Block> & blocks, string & last_signature) -> void
            {
                while (! _tokens.at_end()) {
                    auto & head = _tokens.peek();
                    Block b;
                    b.source = _source;
                    b.where = head.where;
                    if (_tokens.accept_keyword("signature"))
                        signature(b);
                    else if (_tokens.accept_keyword("structure"))
                        structure(b);
                    else if (_tokens.accept_keyword("morphism"))
                        morphism(b);
                    else if (_tokens.accept_keyword("theory")) {
                        theory(b);
                        if (b.over.empty())
                            b.over = last_signature;
                    }
                    else if (_tokens.accept_keyword("amalgamation"))
                        amalgamation(b, blocks.size());
                    else
                        _tokens.fail("expected signature, structure, morphism, theory or amalgamation");
                    if (b.kind == BlockKind::Signature)
                        last_signature = b.name;
                    blocks.push_back(std::move(b));
                }
            }

        private:
            TokenStream _tokens;
            string _source;

            auto name() -> string
            {
                return _tokens.expect_identifier("a name").text;
            }

            auto name_list(vector<string> & out) -> void
            {
                if (_tokens.is(";"))
                    return;
                do
                    out.push_back(name());
                while (_tokens.accept(","));
            }

            auto symbol_list(vector<Symbol> & out) -> void
            {
                if (_tokens.is(";"))
                    return;
                do {
                    auto n = name();
                    _tokens.expect("/");
                    auto & arity = _tokens.expect_identifier("an arity");
                    if (arity.text.find_first_not_of("0123456789") != string::npos || arity.text.size() > 3)
                        _tokens.fail_at(arity, "expected an arity");
                    out.push_back(Symbol{n, std::stoi(arity.text)});
                } while (_tokens.accept(","));
            }

            auto signature(Block & b) -> void
            {
                b.kind = BlockKind::Signature;
                b.name = name();
                _tokens.expect("{");
                while (! _tokens.accept("}")) {
                    auto & key = _tokens.expect_identifier("relations, functions or constants");
                    _tokens.expect(":");
                    if (key.text == "relations")
                        symbol_list(b.relations);
                    else if (key.text == "functions")
                        symbol_list(b.functions);
                    else if (key.text == "constants")
                        name_list(b.constants);
                    else
                        _tokens.fail_at(key, "expected relations, functions or constants");
                    _tokens.expect(";");
                }
            }

            auto item() -> Item
            {
                Item it;
                if (_tokens.accept("(")) {
                    if (! _tokens.is(")"))
                        name_list_until(it.args, ")");
                    _tokens.expect(")");
                }
                else
                    it.args.push_back(name());
                if (_tokens.accept("->"))
                    it.result = name();
                return it;
            }

            auto name_list_until(vector<string> & out, std::string_view close) -> void
            {
                do
                    out.push_back(name());
                while (_tokens.accept(",") && ! _tokens.is(close));
            }

            auto structure(Block & b) -> void
            {
                b.kind = BlockKind::Structure;
                b.name = name();
                if (! _tokens.accept_keyword("over"))
                    _tokens.fail("expected 'over <signature>'");
                b.over = name();
                _tokens.expect("{");
                while (! _tokens.accept("}")) {
                    auto & key = _tokens.expect_identifier("a symbol or 'universe'");
                    if (_tokens.accept("=")) {
                        b.constant_values.emplace_back(key.text, name());
                        _tokens.expect(";");
                        continue;
                    }
                    _tokens.expect(":");
                    if (key.text == "universe")
                        name_list(b.universe);
                    else {
                        vector<Item> items;
                        if (! _tokens.is(";"))
                            do
                                items.push_back(item());
                            while (_tokens.accept(","));
                        b.tables.emplace_back(key.text, std::move(items));
                    }
                    _tokens.expect(";");
                }
            }

            auto morphism(Block & b) -> void
            {
                b.kind = BlockKind::Morphism;
                b.name = name();
                if (! _tokens.accept_keyword("from"))
                    _tokens.fail("expected 'from <structure>'");
                b.from = name();
                if (! _tokens.accept_keyword("to"))
                    _tokens.fail("expected 'to <structure>'");
                b.to = name();
                _tokens.expect("{");
                while (! _tokens.accept("}")) {
                    if (! _tokens.accept_keyword("map"))
                        _tokens.fail("expected 'map'");
                    if (! _tokens.is(":")) {
                        auto & label = _tokens.expect_identifier("the morphism name");
                        if (label.text != b.name)
                            _tokens.fail_at(label, "map label must repeat the morphism name '" + b.name + "'");
                    }
                    _tokens.expect(":");
                    if (! _tokens.is(";"))
                        do {
                            auto src = name();
                            _tokens.expect("->");
                            b.pairs.emplace_back(src, name());
                        } while (_tokens.accept(","));
                    _tokens.expect(";");
                }
            }

            // Tokens of one ';'-separated part, ending with an End token.
            auto part() -> vector<Token>
            {
                vector<Token> out;
                int depth = 0;
                while (! _tokens.at_end()) {
                    if (depth == 0 && (_tokens.is(";") || _tokens.is("}")))
                        break;
                    if (_tokens.is("("))
                        ++depth;
                    else if (_tokens.is(")"))
                        --depth;
                    out.push_back(_tokens.next());
                }
                Token end;
                end.where = _tokens.peek().where;
                out.push_back(end);
                return out;
            }

            auto entry_class() -> std::optional<SentenceClass>
            {
                if (_tokens.peek().kind != Token::Kind::Identifier || ! _tokens.is(":", 1))
                    return std::nullopt;
                auto & word = _tokens.peek().text;
                if (word == "hinductive")
                    return SentenceClass::HInductive;
                if (word == "huniversal")
                    return SentenceClass::HUniversal;
                if (word == "positive")
                    return SentenceClass::Positive;
                return std::nullopt;
            }

            auto theory(Block & b) -> void
            {
                b.kind = BlockKind::Theory;
                b.name = name();
                if (_tokens.accept_keyword("over"))
                    b.over = name();
                _tokens.expect("{");
                while (! _tokens.accept("}")) {
                    if (_tokens.accept(";"))
                        continue;
                    if (auto declared = entry_class()) {
                        _tokens.next();
                        _tokens.next();
                        b.entries.push_back(TheoryEntry{*declared, {part()}});
                    }
                    else if (! b.entries.empty() && b.entries.back().declared == SentenceClass::HInductive)
                        b.entries.back().parts.push_back(part());
                    else
                        _tokens.fail("expected 'hinductive:', 'huniversal:' or 'positive:'");
                    if (! _tokens.is("}"))
                        _tokens.expect(";");
                }
            }

            auto amalgamation(Block & b, std::size_t index) -> void
            {
                b.kind = BlockKind::Amalgamation;
                if (_tokens.peek().kind == Token::Kind::Identifier)
                    b.name = name();
                else
                    b.name = "amalgamation" + std::to_string(index + 1);
                auto & p = b.problem;
                p.name = b.name;
                _tokens.expect("{");
                while (! _tokens.accept("}")) {
                    auto & key = _tokens.expect_identifier("a field name");
                    _tokens.expect(":");
                    if (key.text == "base")
                        p.base = name();
                    else if (key.text == "left")
                        p.left = name();
                    else if (key.text == "right")
                        p.right = name();
                    else if (key.text == "kinds") {
                        string text;
                        while (! _tokens.is(";") && ! _tokens.at_end())
                            text += _tokens.next().text;
                        try {
                            p.kinds = parse_kind_tuple(text);
                        }
                        catch (const SemanticError & e) {
                            _tokens.fail_at(key, e.what());
                        }
                    }
                    else if (key.text == "class") {
                        if (_tokens.accept_keyword("theory"))
                            p.theory = name();
                        else if (! _tokens.accept_keyword("all") && ! _tokens.accept_keyword("structures"))
                            _tokens.fail("expected 'theory <name>' or 'all'");
                    }
                    else if (key.text == "strong" || key.text == "strict") {
                        auto & v = _tokens.expect_identifier("true or false");
                        if (v.text != "true" && v.text != "false")
                            _tokens.fail_at(v, "expected true or false");
                        (key.text == "strong" ? p.strong : p.strict) = v.text == "true";
                    }
                    else if (key.text == "budget") {
                        _tokens.expect("{");
                        while (! _tokens.accept("}")) {
                            auto field = name();
                            _tokens.expect(":");
                            auto & v = _tokens.expect_identifier("a number");
                            if (v.text.find_first_not_of("0123456789") != string::npos || v.text.size() > 12)
                                _tokens.fail_at(v, "expected a number");
                            p.budget[field] = std::stoll(v.text);
                            if (! _tokens.is("}"))
                                _tokens.expect(",");
                        }
                    }
                    else
                        _tokens.fail_at(key, "unknown amalgamation field '" + key.text + "'");
                    _tokens.expect(";");
                }
            }
        };

        template <typename Map>
        auto lookup(const Map & staged, const Map & existing, const string & name, const string & what)
            -> const typename Map::mapped_type &
        {
            if (auto it = staged.find(name); it != staged.end())
                return it->second;
            if (auto it = existing.find(name); it != existing.end())
                return it->second;
            throw SemanticError("unknown " + what + " '" + name + "'");
        }

        template <typename Map>
        auto keys(const Map & m) -> vector<string>
        {
            vector<string> out;
            for (auto & [k, v] : m)
                out.push_back(k);
            return out;
        }

        auto build_structure(const Block & b, const SignatureRef & sig) -> FiniteStructure
        {
            if (b.universe.empty())
                throw SemanticError("structure '" + b.name + "' has an empty universe");
            std::map<string, Element> index;
            for (auto & e : b.universe)
                if (! index.emplace(e, Element(index.size())).second)
                    throw SemanticError("element '" + e + "' listed twice in the universe");
            int n = int(b.universe.size());
            auto element = [&](const string & e) {
                auto it = index.find(e);
                if (it == index.end())
                    throw SemanticError("unknown element '" + e + "' in structure '" + b.name + "'");
                return it->second;
            };
            vector<vector<signed char>> relations;
            for (auto & r : sig->relations())
                relations.emplace_back(table_size(n, r.arity), 0);
            vector<vector<int>> functions;
            for (auto & f : sig->functions())
                functions.emplace_back(table_size(n, f.arity), -1);
            vector<Element> constants(sig->constants().size(), -1);
            std::set<string> seen;
            for (auto & [symbol, items] : b.tables) {
                if (! seen.insert(symbol).second)
                    throw SemanticError("symbol '" + symbol + "' interpreted twice");
                if (auto r = sig->relation_index(symbol)) {
                    for (auto & it : items) {
                        if (it.result)
                            throw SemanticError("relation '" + symbol + "' entries have no '->'");
                        if (int(it.args.size()) != sig->relations()[*r].arity)
                            throw SemanticError("relation '" + symbol + "' entry has the wrong arity");
                        vector<Element> args;
                        for (auto & a : it.args)
                            args.push_back(element(a));
                        relations[*r][tuple_index(n, args)] = 1;
                    }
                }
                else if (auto f = sig->function_index(symbol)) {
                    for (auto & it : items) {
                        if (! it.result)
                            throw SemanticError("function '" + symbol + "' entries need '-> value'");
                        if (int(it.args.size()) != sig->functions()[*f].arity)
                            throw SemanticError("function '" + symbol + "' entry has the wrong arity");
                        vector<Element> args;
                        for (auto & a : it.args)
                            args.push_back(element(a));
                        auto & cell = functions[*f][tuple_index(n, args)];
                        auto value = element(*it.result);
                        if (cell >= 0 && cell != value)
                            throw SemanticError("function '" + symbol + "' given two values at one argument");
                        cell = value;
                    }
                }
                else
                    throw SemanticError("symbol '" + symbol + "' is not a relation or function of " + sig->name());
            }
            for (auto & [c, e] : b.constant_values) {
                auto i = sig->constant_index(c);
                if (! i)
                    throw SemanticError("'" + c + "' is not a constant of " + sig->name());
                constants[*i] = element(e);
            }
            for (std::size_t f = 0; f < functions.size(); ++f)
                if (std::find(functions[f].begin(), functions[f].end(), -1) != functions[f].end())
                    throw SemanticError("function '" + sig->functions()[f].name + "' is not total");
            for (std::size_t c = 0; c < constants.size(); ++c)
                if (constants[c] < 0)
                    throw SemanticError("constant '" + sig->constants()[c] + "' has no value");
            return FiniteStructure(sig, b.universe, std::move(relations), std::move(functions), std::move(constants));
        }

        auto build_theory(const Block & b, const SignatureRef & sig) -> Theory
        {
            Theory t{b.name, sig, {}};
            for (auto & entry : b.entries) {
                vector<Implication> conjuncts;
                for (auto & part : entry.parts) {
                    TokenStream tokens(part);
                    auto s = parse_sentence_entry(tokens, entry.declared, sig.get());
                    if (! tokens.at_end())
                        tokens.fail("unexpected text after the sentence");
                    if (entry.declared != SentenceClass::HInductive) {
                        t.sentences.push_back(s);
                        continue;
                    }
                    conjuncts.insert(conjuncts.end(), s.conjuncts.begin(), s.conjuncts.end());
                }
                if (entry.declared == SentenceClass::HInductive)
                    t.sentences.push_back(Sentence::h_inductive(std::move(conjuncts)));
            }
            validate_theory(t);
            return t;
        }

        auto prelude_text() -> string
        {
            std::ostringstream out;
            for (auto & sig : {catalog::poset_signature(), catalog::binary_signature(), catalog::unary_signature(),
                     catalog::group_signature(), catalog::ring_signature()})
                out << format_signature(*sig);
            out << "signature group_plus { functions: mul/2, inv/1; constants: e, a; }\n";
            auto tpos = catalog::partial_orders();
            out << format_theory(tpos);
            out << "theory T_any over poset { }\n";
            for (int n = 1; n <= 3; ++n)
                out << format_theory(catalog::has_cycle(n));
            auto tg = catalog::groups();
            tg.name = "T_g";
            out << format_theory(tg);
            auto tgp = catalog::groups_plus();
            tgp.name = "T_g_plus";
            out << format_theory(tgp);
            out << format_theory(catalog::rings());
            out << format_structure(catalog::point(), "point") << format_structure(catalog::chain2(), "chain2")
                << format_structure(catalog::antichain2(), "antichain2") << format_structure(catalog::loop(), "loop")
                << format_structure(catalog::trivial_group(), "trivial");
            for (int n = 2; n <= 4; ++n)
                out << format_structure(catalog::cyclic_group(n), "Z" + std::to_string(n));
            for (int n = 2; n <= 3; ++n)
                out << format_structure(catalog::residue_ring(n), "R" + std::to_string(n));
            out << R"(
structure chain3 over poset { universe: b, m, t; leq: (b,b),(b,m),(b,t),(m,m),(m,t),(t,t); }
structure swap over unary { universe: x, y; f: x->y, y->x; }
structure V4 over group {
    universe: 0, a, b, c;
    mul: (0,0)->0, (0,a)->a, (0,b)->b, (0,c)->c, (a,0)->a, (a,a)->0, (a,b)->c, (a,c)->b,
         (b,0)->b, (b,a)->c, (b,b)->0, (b,c)->a, (c,0)->c, (c,a)->b, (c,b)->a, (c,c)->0;
    inv: 0->0, a->a, b->b, c->c;
    e = 0;
}
morphism bottom from point to chain2 { map bottom: p -> b; }
morphism top from point to chain2 { map top: p -> t; }
amalgamation glue { base: point; left: bottom; right: bottom; kinds: [e,e,e,e]; class: theory T_pos; strong: true; budget: {N: 4}; }
)";
            return out.str();
        }
    }

    auto format_signature(const Signature & s) -> string
    {
        std::ostringstream out;
        out << "signature " << s.name() << " {";
        auto symbols = [&](const char * key, const vector<Symbol> & list) {
            if (list.empty())
                return;
            out << " " << key << ":";
            for (std::size_t i = 0; i < list.size(); ++i)
                out << (i ? ", " : " ") << list[i].name << "/" << list[i].arity;
            out << ";";
        };
        symbols("relations", s.relations());
        symbols("functions", s.functions());
        if (! s.constants().empty()) {
            out << " constants:";
            for (std::size_t i = 0; i < s.constants().size(); ++i)
                out << (i ? ", " : " ") << s.constants()[i];
            out << ";";
        }
        out << " }\n";
        return out.str();
    }

    auto format_structure(const FiniteStructure & s, const string & name) -> string
    {
        auto & sig = s.signature();
        int n = s.size();
        std::ostringstream out;
        out << "structure " << name << " over " << sig.name() << " {\n    universe:";
        for (int e = 0; e < n; ++e)
            out << (e ? ", " : " ") << s.element_name(e);
        out << ";\n";
        auto tuple_text = [&](const vector<Element> & t) {
            string text = "(";
            for (std::size_t i = 0; i < t.size(); ++i)
                text += (i ? "," : "") + s.element_name(t[i]);
            return text + ")";
        };
        for (std::size_t r = 0; r < sig.relations().size(); ++r) {
            int arity = sig.relations()[r].arity;
            out << "    " << sig.relations()[r].name << ":";
            bool first = true;
            // Listed in lexicographic order of the argument tuple.
            vector<vector<Element>> rows;
            for (std::size_t i = 0; i < s.relation_table(int(r)).size(); ++i)
                if (s.relation_table(int(r))[i])
                    rows.push_back(tuple_at(n, arity, i));
            std::sort(rows.begin(), rows.end());
            for (auto & t : rows) {
                out << (first ? " " : ", ") << (arity == 1 ? s.element_name(t[0]) : tuple_text(t));
                first = false;
            }
            out << ";\n";
        }
        for (std::size_t f = 0; f < sig.functions().size(); ++f) {
            int arity = sig.functions()[f].arity;
            out << "    " << sig.functions()[f].name << ":";
            vector<vector<Element>> rows;
            for (std::size_t i = 0; i < s.function_table(int(f)).size(); ++i)
                rows.push_back(tuple_at(n, arity, i));
            std::sort(rows.begin(), rows.end());
            bool first = true;
            for (auto & t : rows) {
                out << (first ? " " : ", ") << (arity == 1 ? s.element_name(t[0]) : tuple_text(t)) << "->"
                    << s.element_name(s.apply(int(f), t));
                first = false;
            }
            out << ";\n";
        }
        for (std::size_t c = 0; c < sig.constants().size(); ++c)
            out << "    " << sig.constants()[c] << " = " << s.element_name(s.constant(int(c))) << ";\n";
        out << "}\n";
        return out.str();
    }

    auto format_theory(const Theory & t) -> string
    {
        std::ostringstream out;
        out << "theory " << t.name << " over " << t.signature->name() << " {\n";
        for (auto & s : t.sentences)
            out << "    " << to_string(s) << ";\n";
        out << "}\n";
        return out.str();
    }

    auto Workspace::prelude() -> Workspace
    {
        static const Workspace cached = [] {
            Workspace w;
            SourceText text{"<prelude>", prelude_text()};
            auto report = w.load(std::span(&text, 1));
            for (auto & o : report.objects)
                if (! o.ok())
                    throw SemanticError("prelude object " + o.name + ": " + o.error);
            return w;
        }();
        return cached;
    }

    auto Workspace::load(std::span<const SourceText> sources) -> LoadReport
    {
        vector<Block> blocks;
        for (auto & src : sources) {
            string last_signature;
            try {
                BlockReader(src.text, src.name).read(blocks, last_signature);
            }
            catch (const ParseError & e) {
                throw ParseError(e, src.name);
            }
        }

        // Formula syntax is checked before resolution, with the declared
        // signature when it is known so that its constants are not read as
        // free variables.
        std::map<string, SignatureRef> declared;
        for (auto & b : blocks)
            if (b.kind == BlockKind::Signature) {
                try {
                    declared[b.name] = make_signature(Signature(b.name, b.relations, b.functions, b.constants));
                }
                catch (const SemanticError &) {
                }
            }
        for (auto & b : blocks) {
            if (b.kind != BlockKind::Theory)
                continue;
            SignatureRef sig;
            if (auto it = declared.find(b.over); it != declared.end())
                sig = it->second;
            else if (auto it = _signatures.find(b.over); it != _signatures.end())
                sig = it->second;
            if (! sig)
                continue;
            for (auto & entry : b.entries)
                for (auto & part : entry.parts) {
                    try {
                        TokenStream tokens(part);
                        parse_sentence_entry(tokens, entry.declared, sig.get());
                        if (! tokens.at_end())
                            tokens.fail("unexpected text after the sentence");
                    }
                    catch (const ParseError & e) {
                        throw ParseError(e, b.source);
                    }
                }
        }

        LoadReport report;
        Workspace staged;
        std::set<std::pair<BlockKind, string>> defined;
        for (auto kind : {BlockKind::Signature, BlockKind::Structure, BlockKind::Morphism, BlockKind::Theory,
                 BlockKind::Amalgamation})
            for (auto & b : blocks) {
                if (b.kind != kind)
                    continue;
                ObjectStatus status{to_string(kind), b.name, b.source, ""};
                try {
                    if (! defined.emplace(kind, b.name).second)
                        throw SemanticError(to_string(kind) + " '" + b.name + "' is defined twice");
                    switch (kind) {
                    case BlockKind::Signature:
                        staged._signatures[b.name] =
                                make_signature(Signature(b.name, b.relations, b.functions, b.constants));
                        break;
                    case BlockKind::Structure: {
                        auto sig = lookup(staged._signatures, _signatures, b.over, "signature");
                        staged._structures.insert_or_assign(b.name, build_structure(b, sig));
                        break;
                    }
                    case BlockKind::Morphism: {
                        auto & from = lookup(staged._structures, _structures, b.from, "structure");
                        auto & to = lookup(staged._structures, _structures, b.to, "structure");
                        vector<Element> map(from.size(), -1);
                        for (auto & [x, y] : b.pairs) {
                            auto xi = from.element_index(x);
                            auto yi = to.element_index(y);
                            if (! xi)
                                throw SemanticError("'" + x + "' is not an element of " + b.from);
                            if (! yi)
                                throw SemanticError("'" + y + "' is not an element of " + b.to);
                            if (map[*xi] >= 0 && map[*xi] != *yi)
                                throw SemanticError("'" + x + "' is mapped twice");
                            map[*xi] = *yi;
                        }
                        for (Element x = 0; x < from.size(); ++x)
                            if (map[x] < 0)
                                throw SemanticError("'" + from.element_name(x) + "' has no image");
                        Morphism m{from, to, map};
                        validate_morphism(m);
                        staged._morphisms.insert_or_assign(b.name, NamedMorphism{b.from, b.to, m});
                        break;
                    }
                    case BlockKind::Theory: {
                        if (b.over.empty())
                            throw SemanticError("theory '" + b.name + "' has no signature");
                        auto sig = lookup(staged._signatures, _signatures, b.over, "signature");
                        staged._theories.insert_or_assign(b.name, build_theory(b, sig));
                        break;
                    }
                    case BlockKind::Amalgamation: {
                        auto & p = b.problem;
                        for (auto * field : {&p.base, &p.left, &p.right})
                            if (field->empty())
                                throw SemanticError("amalgamation '" + b.name + "' needs base, left and right");
                        lookup(staged._structures, _structures, p.base, "structure");
                        for (auto * m : {&p.left, &p.right}) {
                            auto & nm = lookup(staged._morphisms, _morphisms, *m, "morphism");
                            if (nm.from != p.base)
                                throw SemanticError("morphism '" + *m + "' does not start at " + p.base);
                        }
                        if (! p.theory.empty())
                            lookup(staged._theories, _theories, p.theory, "theory");
                        Budget scratch;
                        for (auto & [key, value] : p.budget)
                            set_budget_entry(scratch, key, value);
                        staged._problems.insert_or_assign(b.name, p);
                        break;
                    }
                    }
                }
                catch (const ParseError & e) {
                    throw ParseError(e, b.source);
                }
                catch (const SemanticError & e) {
                    status.error = e.what();
                }
                report.objects.push_back(std::move(status));
            }

        for (auto & [k, v] : staged._signatures)
            _signatures.insert_or_assign(k, v);
        for (auto & [k, v] : staged._structures)
            _structures.insert_or_assign(k, v);
        for (auto & [k, v] : staged._morphisms)
            _morphisms.insert_or_assign(k, v);
        for (auto & [k, v] : staged._theories)
            _theories.insert_or_assign(k, v);
        for (auto & [k, v] : staged._problems)
            _problems.insert_or_assign(k, v);
        return report;
    }

    auto Workspace::signature(const string & name) const -> SignatureRef
    {
        return lookup(_signatures, _signatures, name, "signature");
    }

    auto Workspace::structure(const string & name) const -> const FiniteStructure &
    {
        return lookup(_structures, _structures, name, "structure");
    }

    auto Workspace::morphism(const string & name) const -> const NamedMorphism &
    {
        return lookup(_morphisms, _morphisms, name, "morphism");
    }

    auto Workspace::theory(const string & name) const -> const Theory &
    {
        return lookup(_theories, _theories, name, "theory");
    }

    auto Workspace::problem(const string & name) const -> const ProblemSpec &
    {
        return lookup(_problems, _problems, name, "amalgamation problem");
    }

    auto Workspace::resolve(const ProblemSpec & spec, Budget b) const -> AmalgamationProblem
    {
        for (auto & [key, value] : spec.budget)
            set_budget_entry(b, key, value);
        auto & base = structure(spec.base);
        auto & left = morphism(spec.left);
        auto & right = morphism(spec.right);
        if (left.from != spec.base || right.from != spec.base)
            throw SemanticError("both maps must start at " + spec.base);
        auto cls = spec.theory.empty() ? StructureClass::all(base.signature_ref()) : StructureClass::of(theory(spec.theory));
        return AmalgamationProblem{base, left.morphism.target, right.morphism.target, left.morphism.map,
            right.morphism.map, spec.kinds, cls, spec.strong, spec.strict, b};
    }

    auto Workspace::structure_names() const -> vector<string>
    {
        return keys(_structures);
    }

    auto Workspace::theory_names() const -> vector<string>
    {
        return keys(_theories);
    }

    auto Workspace::morphism_names() const -> vector<string>
    {
        return keys(_morphisms);
    }

    auto Workspace::problem_names() const -> vector<string>
    {
        return keys(_problems);
    }

    auto Workspace::signature_names() const -> vector<string>
    {
        return keys(_signatures);
    }
}
