#include "oracle.hh"

#include <posmt/error.hh>

#include <algorithm>
#include <numeric>
#include <set>

namespace oracle
{
    using std::string;
    using std::vector;

    namespace
    {
        // All argument tuples of the given arity, first position varying slowest.
        auto tuples(int n, int arity) -> vector<vector<Element>>
        {
            vector<vector<Element>> out{{}};
            for (int i = 0; i < arity; ++i) {
                vector<vector<Element>> next;
                for (auto & t : out)
                    for (Element e = 0; e < n; ++e) {
                        auto u = t;
                        u.push_back(e);
                        next.push_back(u);
                    }
                out = std::move(next);
            }
            return out;
        }

        auto image(const Map & m, const vector<Element> & t) -> vector<Element>
        {
            vector<Element> out;
            for (auto e : t)
                out.push_back(m[e]);
            return out;
        }

        auto all_maps(int from, int to) -> vector<Map>
        {
            vector<Map> out;
            Map m(from, 0);
            while (true) {
                out.push_back(m);
                int i = from - 1;
                while (i >= 0 && m[i] == to - 1)
                    m[i--] = 0;
                if (i < 0)
                    return out;
                ++m[i];
            }
        }

        auto injective(const Map & m) -> bool
        {
            std::set<Element> seen(m.begin(), m.end());
            return seen.size() == m.size();
        }

        auto term_value(const FiniteStructure & s, const posmt::Term & t, const std::map<string, Element> & env)
            -> Element
        {
            using K = posmt::Term::Kind;
            switch (t.kind) {
            case K::Variable: return env.at(t.name);
            case K::Constant: return s.constant(*s.signature().constant_index(t.name));
            case K::Application: {
                vector<Element> args;
                for (auto & a : t.args)
                    args.push_back(term_value(s, a, env));
                return s.apply(*s.signature().function_index(t.name), args);
            }
            }
            return -1;
        }

        auto quantify(const FiniteStructure & s, const posmt::FormulaPtr & body, const vector<string> & vars,
                std::size_t i, std::map<string, Element> & env, bool universal) -> bool
        {
            if (i == vars.size())
                return eval(s, body, env);
            auto saved = env.find(vars[i]) != env.end() ? std::optional<Element>(env[vars[i]]) : std::nullopt;
            bool result = universal;
            for (Element e = 0; e < s.size(); ++e) {
                env[vars[i]] = e;
                bool r = quantify(s, body, vars, i + 1, env, universal);
                if (universal && ! r) {
                    result = false;
                    break;
                }
                if (! universal && r) {
                    result = true;
                    break;
                }
            }
            if (saved)
                env[vars[i]] = *saved;
            else
                env.erase(vars[i]);
            return result;
        }

        auto build(const SignatureRef & sig, int n, const vector<vector<signed char>> & rel,
                const vector<vector<int>> & fun) -> FiniteStructure
        {
            return FiniteStructure::with_default_names(sig, n, rel, fun, {});
        }
    }

    auto is_hom(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool
    {
        auto & sig = a.signature();
        for (std::size_t r = 0; r < sig.relations().size(); ++r)
            for (auto & t : tuples(a.size(), sig.relations()[r].arity))
                if (a.holds(int(r), t) && ! b.holds(int(r), image(m, t)))
                    return false;
        for (std::size_t f = 0; f < sig.functions().size(); ++f)
            for (auto & t : tuples(a.size(), sig.functions()[f].arity))
                if (m[a.apply(int(f), t)] != b.apply(int(f), image(m, t)))
                    return false;
        for (std::size_t c = 0; c < sig.constants().size(); ++c)
            if (m[a.constant(int(c))] != b.constant(int(c)))
                return false;
        return true;
    }

    auto homs(const FiniteStructure & a, const FiniteStructure & b) -> vector<Map>
    {
        vector<Map> out;
        for (auto & m : all_maps(a.size(), b.size()))
            if (is_hom(a, b, m))
                out.push_back(m);
        return out;
    }

    auto is_embedding(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool
    {
        if (! is_hom(a, b, m) || ! injective(m))
            return false;
        auto & sig = a.signature();
        for (std::size_t r = 0; r < sig.relations().size(); ++r)
            for (auto & t : tuples(a.size(), sig.relations()[r].arity))
                if (! a.holds(int(r), t) && b.holds(int(r), image(m, t)))
                    return false;
        return true;
    }

    auto is_iso(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool
    {
        return a.size() == b.size() && is_embedding(a, b, m);
    }

    auto retracts(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool
    {
        for (auto & r : all_maps(b.size(), a.size())) {
            bool inverse = true;
            for (Element x = 0; x < a.size() && inverse; ++x)
                inverse = r[m[x]] == x;
            if (inverse && is_hom(b, a, r))
                return true;
        }
        return false;
    }

    auto strength(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> int
    {
        if (! is_hom(a, b, m))
            return 0;
        if (! is_embedding(a, b, m))
            return 1;
        if (! retracts(a, b, m))
            return 2;
        return a.size() == b.size() ? 4 : 3;
    }

    auto strength_of(char kind) -> int
    {
        switch (kind) {
        case 'h': return 1;
        case 'e': return 2;
        case 'i': return 3;
        case 's': return 4;
        }
        throw posmt::PreconditionError(std::string("unknown kind letter ") + kind);
    }

    auto preserves_cqs(const FiniteStructure & a, const FiniteStructure & b, const Map & m, int max_vars) -> bool
    {
        if (max_vars < a.size() + b.size())
            throw posmt::PreconditionError("preserves_cqs needs room for a witness per element of b");
        auto & sig = a.signature();
        int free = a.size();
        // |b| quantified variables suffice: a conjunction using more is implied by
        // one whose witnesses are distinct, and its witnesses lie in b.
        int quantified = b.size();
        int vars = free + quantified;
        struct Atom
        {
            int kind;  // 0 relation, 1 function, 2 constant, 3 equality
            int symbol;
            vector<int> args;
            int result;
        };
        for (auto & sigma : all_maps(quantified, b.size())) {
            Map in_b = m;
            in_b.insert(in_b.end(), sigma.begin(), sigma.end());
            // The maximal conjunction true in b under in_b.
            vector<Atom> atoms;
            for (int u = 0; u < vars; ++u)
                for (int v = u + 1; v < vars; ++v)
                    if (in_b[u] == in_b[v])
                        atoms.push_back({3, 0, {u}, v});
            for (std::size_t r = 0; r < sig.relations().size(); ++r)
                for (auto & t : tuples(vars, sig.relations()[r].arity))
                    if (b.holds(int(r), image(in_b, t)))
                        atoms.push_back({0, int(r), t, -1});
            for (std::size_t f = 0; f < sig.functions().size(); ++f)
                for (auto & t : tuples(vars, sig.functions()[f].arity))
                    for (int v = 0; v < vars; ++v)
                        if (b.apply(int(f), image(in_b, t)) == in_b[v])
                            atoms.push_back({1, int(f), t, v});
            for (std::size_t c = 0; c < sig.constants().size(); ++c)
                for (int v = 0; v < vars; ++v)
                    if (b.constant(int(c)) == in_b[v])
                        atoms.push_back({2, int(c), {}, v});
            // Tested in a with the free variables at their own elements.
            bool found = false;
            for (auto & tau : all_maps(quantified, a.size())) {
                Map in_a(free);
                std::iota(in_a.begin(), in_a.end(), 0);
                in_a.insert(in_a.end(), tau.begin(), tau.end());
                found = std::all_of(atoms.begin(), atoms.end(), [&](const Atom & x) {
                    switch (x.kind) {
                    case 0: return a.holds(x.symbol, image(in_a, x.args));
                    case 1: return a.apply(x.symbol, image(in_a, x.args)) == in_a[x.result];
                    case 2: return a.constant(x.symbol) == in_a[x.result];
                    default: return in_a[x.args[0]] == in_a[x.result];
                    }
                });
                if (found)
                    break;
            }
            if (! found)
                return false;
        }
        return true;
    }

    auto eval(const FiniteStructure & s, const posmt::FormulaPtr & f, std::map<string, Element> env) -> bool
    {
        using K = posmt::FormulaKind;
        switch (f->kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Relation: {
            vector<Element> args;
            for (auto & t : f->terms)
                args.push_back(term_value(s, t, env));
            return s.holds(*s.signature().relation_index(f->symbol), args);
        }
        case K::Equality: return term_value(s, f->terms[0], env) == term_value(s, f->terms[1], env);
        case K::And:
            return std::all_of(f->children.begin(), f->children.end(), [&](auto & c) { return eval(s, c, env); });
        case K::Or:
            return std::any_of(f->children.begin(), f->children.end(), [&](auto & c) { return eval(s, c, env); });
        case K::Not: return ! eval(s, f->children[0], env);
        case K::Implies: return ! eval(s, f->children[0], env) || eval(s, f->children[1], env);
        case K::Exists: return quantify(s, f->children[0], f->variables, 0, env, false);
        case K::Forall: return quantify(s, f->children[0], f->variables, 0, env, true);
        }
        return false;
    }

    auto code(const FiniteStructure & s) -> vector<int>
    {
        int n = s.size();
        auto & sig = s.signature();
        vector<Element> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        vector<int> best;
        do {
            // perm[old] = new; encode tables in the new labelling.
            vector<Element> inv(n);
            for (Element e = 0; e < n; ++e)
                inv[perm[e]] = e;
            vector<int> c{n};
            for (std::size_t r = 0; r < sig.relations().size(); ++r)
                for (auto & t : tuples(n, sig.relations()[r].arity))
                    c.push_back(s.holds(int(r), image(inv, t)));
            for (std::size_t f = 0; f < sig.functions().size(); ++f)
                for (auto & t : tuples(n, sig.functions()[f].arity))
                    c.push_back(perm[s.apply(int(f), image(inv, t))]);
            for (std::size_t k = 0; k < sig.constants().size(); ++k)
                c.push_back(perm[s.constant(int(k))]);
            if (best.empty() || c < best)
                best = c;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    auto structures(const SignatureRef & sig, int max_size) -> vector<FiniteStructure>
    {
        if (! sig->constants().empty())
            throw posmt::PreconditionError("oracle enumeration is for signatures without constants");
        vector<FiniteStructure> out;
        for (int n = 1; n <= max_size; ++n) {
            // One digit per table cell: relation cells in base 2, function cells in base n.
            vector<int> bases;
            for (auto & r : sig->relations())
                bases.insert(bases.end(), posmt::table_size(n, r.arity), 2);
            for (auto & f : sig->functions())
                bases.insert(bases.end(), posmt::table_size(n, f.arity), n);
            vector<int> digits(bases.size(), 0);
            std::set<vector<int>> seen;
            while (true) {
                vector<vector<signed char>> rel;
                vector<vector<int>> fun;
                std::size_t at = 0;
                for (auto & r : sig->relations()) {
                    auto size = posmt::table_size(n, r.arity);
                    rel.emplace_back(digits.begin() + at, digits.begin() + at + size);
                    at += size;
                }
                for (auto & f : sig->functions()) {
                    auto size = posmt::table_size(n, f.arity);
                    fun.emplace_back(digits.begin() + at, digits.begin() + at + size);
                    at += size;
                }
                auto s = build(sig, n, rel, fun);
                if (seen.insert(code(s)).second)
                    out.push_back(s);
                std::size_t i = 0;
                while (i < digits.size() && digits[i] == bases[i] - 1)
                    digits[i++] = 0;
                if (i == digits.size())
                    break;
                ++digits[i];
            }
        }
        return out;
    }

    auto random_structure(const SignatureRef & sig, int size, std::mt19937_64 & rng) -> FiniteStructure
    {
        vector<vector<signed char>> rel;
        vector<vector<int>> fun;
        for (auto & r : sig->relations()) {
            vector<signed char> t(posmt::table_size(size, r.arity));
            for (auto & x : t)
                x = static_cast<signed char>(rng() % 2);
            rel.push_back(t);
        }
        for (auto & f : sig->functions()) {
            vector<int> t(posmt::table_size(size, f.arity));
            for (auto & x : t)
                x = int(rng() % size);
            fun.push_back(t);
        }
        return build(sig, size, rel, fun);
    }

    auto posets(int size) -> vector<FiniteStructure>
    {
        auto sig = posmt::make_signature(posmt::Signature("poset", {{"leq", 2}}, {}, {}));
        vector<FiniteStructure> out;
        for (auto & s : structures(sig, size)) {
            if (s.size() != size)
                continue;
            bool ok = true;
            for (Element x = 0; x < size && ok; ++x) {
                ok = s.holds(0, vector<Element>{x, x});
                for (Element y = 0; y < size && ok; ++y) {
                    if (x != y && s.holds(0, vector<Element>{x, y}) && s.holds(0, vector<Element>{y, x}))
                        ok = false;
                    for (Element z = 0; z < size && ok; ++z)
                        if (s.holds(0, vector<Element>{x, y}) && s.holds(0, vector<Element>{y, z})
                                && ! s.holds(0, vector<Element>{x, z}))
                            ok = false;
                }
            }
            if (ok)
                out.push_back(s);
        }
        return out;
    }

    auto graph_signature() -> SignatureRef
    {
        static auto sig = posmt::make_signature(posmt::Signature("graph", {{"R", 2}}, {}, {}));
        return sig;
    }

    auto unary_signature() -> SignatureRef
    {
        static auto sig = posmt::make_signature(posmt::Signature("unary", {}, {{"f", 1}}, {}));
        return sig;
    }
}
