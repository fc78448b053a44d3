#include <posmt/structure.hh>
#include <posmt/error.hh>

#include <algorithm>
#include <numeric>
#include <set>

using std::span;
using std::string;
using std::vector;

namespace posmt
{
    auto tuple_index(int universe_size, span<const Element> args) -> std::size_t
    {
        std::size_t index = 0, scale = 1;
        for (auto a : args) {
            index += std::size_t(a) * scale;
            scale *= std::size_t(universe_size);
        }
        return index;
    }

    auto tuple_at(int universe_size, int arity, std::size_t index) -> vector<Element>
    {
        vector<Element> result(arity);
        for (int i = 0; i < arity; ++i) {
            result[i] = Element(index % std::size_t(universe_size));
            index /= std::size_t(universe_size);
        }
        return result;
    }

    auto table_size(int universe_size, int arity) -> std::size_t
    {
        std::size_t result = 1;
        for (int i = 0; i < arity; ++i)
            result *= std::size_t(universe_size);
        return result;
    }

    FiniteStructure::FiniteStructure(SignatureRef signature, vector<string> element_names,
            vector<vector<signed char>> relations, vector<vector<int>> functions, vector<Element> constants) :
        _signature(std::move(signature)),
        _names(std::move(element_names)),
        _relations(std::move(relations)),
        _functions(std::move(functions)),
        _constants(std::move(constants))
    {
        validate();
    }

    auto FiniteStructure::with_default_names(SignatureRef signature, int size, vector<vector<signed char>> relations,
            vector<vector<int>> functions, vector<Element> constants) -> FiniteStructure
    {
        vector<string> names;
        for (int i = 0; i < size; ++i)
            names.push_back(std::to_string(i));
        return FiniteStructure(std::move(signature), std::move(names), std::move(relations), std::move(functions),
                std::move(constants));
    }

    auto FiniteStructure::validate() const -> void
    {
        if (! _signature)
            throw SemanticError("structure without a signature");
        int n = size();
        if (n == 0)
            throw SemanticError("structure universe must be nonempty");
        std::set<string> seen;
        for (auto & name : _names)
            if (! seen.insert(name).second)
                throw SemanticError("element '" + name + "' occurs twice in the universe");

        auto & sig = *_signature;
        if (_relations.size() != sig.relations().size() || _functions.size() != sig.functions().size()
                || _constants.size() != sig.constants().size())
            throw SemanticError("structure tables do not match signature " + sig.name());
        for (std::size_t r = 0; r < _relations.size(); ++r) {
            if (_relations[r].size() != table_size(n, sig.relations()[r].arity))
                throw SemanticError("relation table for '" + sig.relations()[r].name + "' has the wrong size");
            for (auto v : _relations[r])
                if (v != 0 && v != 1)
                    throw SemanticError("relation '" + sig.relations()[r].name + "' is not fully interpreted");
        }
        for (std::size_t f = 0; f < _functions.size(); ++f) {
            if (_functions[f].size() != table_size(n, sig.functions()[f].arity))
                throw SemanticError("function table for '" + sig.functions()[f].name + "' has the wrong size");
            for (auto v : _functions[f])
                if (v < 0 || v >= n)
                    throw SemanticError("function '" + sig.functions()[f].name + "' is not total on the universe");
        }
        for (std::size_t c = 0; c < _constants.size(); ++c)
            if (_constants[c] < 0 || _constants[c] >= n)
                throw SemanticError("constant '" + sig.constants()[c] + "' is not interpreted in the universe");
    }

    auto FiniteStructure::element_index(const string & name) const -> std::optional<Element>
    {
        auto it = std::find(_names.begin(), _names.end(), name);
        if (it == _names.end())
            return std::nullopt;
        return Element(it - _names.begin());
    }

    auto FiniteStructure::holds(int relation, span<const Element> args) const -> bool
    {
        return _relations.at(relation)[tuple_index(size(), args)] == 1;
    }

    auto FiniteStructure::apply(int function, span<const Element> args) const -> Element
    {
        return _functions.at(function)[tuple_index(size(), args)];
    }

    auto FiniteStructure::view() const -> Interp
    {
        return Interp{size(), _functions, _relations, _constants};
    }

    auto FiniteStructure::same_tables(const FiniteStructure & other) const -> bool
    {
        return size() == other.size() && signature().same_symbols(other.signature()) && _relations == other._relations
            && _functions == other._functions && _constants == other._constants;
    }

    auto FiniteStructure::permuted(span<const Element> perm) const -> FiniteStructure
    {
        int n = size();
        vector<Element> inverse(n);
        for (int i = 0; i < n; ++i)
            inverse[perm[i]] = i;

        auto & sig = signature();
        vector<vector<signed char>> relations;
        for (std::size_t r = 0; r < _relations.size(); ++r) {
            int arity = sig.relations()[r].arity;
            vector<signed char> table(_relations[r].size());
            for (std::size_t j = 0; j < table.size(); ++j) {
                auto t = tuple_at(n, arity, j);
                for (auto & x : t)
                    x = inverse[x];
                table[j] = _relations[r][tuple_index(n, t)];
            }
            relations.push_back(std::move(table));
        }
        vector<vector<int>> functions;
        for (std::size_t f = 0; f < _functions.size(); ++f) {
            int arity = sig.functions()[f].arity;
            vector<int> table(_functions[f].size());
            for (std::size_t j = 0; j < table.size(); ++j) {
                auto t = tuple_at(n, arity, j);
                for (auto & x : t)
                    x = inverse[x];
                table[j] = perm[_functions[f][tuple_index(n, t)]];
            }
            functions.push_back(std::move(table));
        }
        vector<Element> constants;
        for (auto c : _constants)
            constants.push_back(perm[c]);
        vector<string> names(n);
        for (int i = 0; i < n; ++i)
            names[perm[i]] = _names[i];
        return FiniteStructure(_signature, std::move(names), std::move(relations), std::move(functions),
                std::move(constants));
    }

    auto FiniteStructure::reduct(SignatureRef smaller) const -> FiniteStructure
    {
        auto & sig = signature();
        vector<vector<signed char>> relations;
        for (auto & r : smaller->relations()) {
            auto i = sig.relation_index(r.name);
            if (! i || sig.relations()[*i].arity != r.arity)
                throw SignatureMismatch("reduct: relation '" + r.name + "' missing");
            relations.push_back(_relations[*i]);
        }
        vector<vector<int>> functions;
        for (auto & f : smaller->functions()) {
            auto i = sig.function_index(f.name);
            if (! i || sig.functions()[*i].arity != f.arity)
                throw SignatureMismatch("reduct: function '" + f.name + "' missing");
            functions.push_back(_functions[*i]);
        }
        vector<Element> constants;
        for (auto & c : smaller->constants()) {
            auto i = sig.constant_index(c);
            if (! i)
                throw SignatureMismatch("reduct: constant '" + c + "' missing");
            constants.push_back(_constants[*i]);
        }
        return FiniteStructure(std::move(smaller), _names, std::move(relations), std::move(functions),
                std::move(constants));
    }

    auto FiniteStructure::expanded(SignatureRef larger, span<const Element> extra_constant_values) const -> FiniteStructure
    {
        auto constants = _constants;
        constants.insert(constants.end(), extra_constant_values.begin(), extra_constant_values.end());
        return FiniteStructure(std::move(larger), _names, _relations, _functions, std::move(constants));
    }

    auto FiniteStructure::renamed(vector<string> names) const -> FiniteStructure
    {
        return FiniteStructure(_signature, std::move(names), _relations, _functions, _constants);
    }

    auto closure_mask(const FiniteStructure & s, span<const Element> seed) -> vector<bool>
    {
        int n = s.size();
        vector<bool> in(n, false);
        for (auto e : seed) {
            if (e < 0 || e >= n)
                throw SemanticError("seed element outside the universe");
            in[e] = true;
        }
        for (auto c : s.constants())
            in[c] = true;

        auto & sig = s.signature();
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t f = 0; f < sig.functions().size(); ++f) {
                int arity = sig.functions()[f].arity;
                auto & table = s.function_table(int(f));
                for (std::size_t j = 0; j < table.size(); ++j) {
                    if (in[table[j]])
                        continue;
                    auto t = tuple_at(n, arity, j);
                    if (std::all_of(t.begin(), t.end(), [&](Element x) { return in[x]; })) {
                        in[table[j]] = true;
                        changed = true;
                    }
                }
            }
        }
        return in;
    }

    auto generated_substructure(const FiniteStructure & s, span<const Element> seed) -> Substructure
    {
        auto in = closure_mask(s, seed);
        vector<Element> inclusion, position(s.size(), -1);
        for (int i = 0; i < s.size(); ++i)
            if (in[i]) {
                position[i] = int(inclusion.size());
                inclusion.push_back(i);
            }
        if (inclusion.empty())
            throw SemanticError("generated substructure of an empty seed over a signature without constants is empty");

        int m = int(inclusion.size());
        auto & sig = s.signature();
        vector<vector<signed char>> relations;
        for (std::size_t r = 0; r < sig.relations().size(); ++r) {
            int arity = sig.relations()[r].arity;
            vector<signed char> table(table_size(m, arity));
            for (std::size_t j = 0; j < table.size(); ++j) {
                auto t = tuple_at(m, arity, j);
                for (auto & x : t)
                    x = inclusion[x];
                table[j] = s.holds(int(r), t) ? 1 : 0;
            }
            relations.push_back(std::move(table));
        }
        vector<vector<int>> functions;
        for (std::size_t f = 0; f < sig.functions().size(); ++f) {
            int arity = sig.functions()[f].arity;
            vector<int> table(table_size(m, arity));
            for (std::size_t j = 0; j < table.size(); ++j) {
                auto t = tuple_at(m, arity, j);
                for (auto & x : t)
                    x = inclusion[x];
                table[j] = position[s.apply(int(f), t)];
            }
            functions.push_back(std::move(table));
        }
        vector<Element> constants;
        for (auto c : s.constants())
            constants.push_back(position[c]);
        vector<string> names;
        for (auto e : inclusion)
            names.push_back(s.element_name(e));
        return Substructure{FiniteStructure(s.signature_ref(), std::move(names), std::move(relations),
                                    std::move(functions), std::move(constants)),
            std::move(inclusion)};
    }

    namespace
    {
        auto encode_under(const FiniteStructure & s, span<const Element> perm, span<const Element> inverse) -> vector<int>
        {
            int n = s.size();
            auto & sig = s.signature();
            vector<int> code;
            code.push_back(n);
            for (auto c : s.constants())
                code.push_back(perm[c]);
            vector<Element> t;
            for (std::size_t f = 0; f < sig.functions().size(); ++f) {
                int arity = sig.functions()[f].arity;
                auto & table = s.function_table(int(f));
                for (std::size_t j = 0; j < table.size(); ++j) {
                    t = tuple_at(n, arity, j);
                    for (auto & x : t)
                        x = inverse[x];
                    code.push_back(perm[table[tuple_index(n, t)]]);
                }
            }
            for (std::size_t r = 0; r < sig.relations().size(); ++r) {
                int arity = sig.relations()[r].arity;
                auto & table = s.relation_table(int(r));
                for (std::size_t j = 0; j < table.size(); ++j) {
                    t = tuple_at(n, arity, j);
                    for (auto & x : t)
                        x = inverse[x];
                    code.push_back(table[tuple_index(n, t)]);
                }
            }
            return code;
        }

        auto best_permutation(const FiniteStructure & s) -> std::pair<vector<int>, vector<Element>>
        {
            int n = s.size();
            if (n > 9)
                throw BudgetExhausted("canonical form requested for a structure of size " + std::to_string(n)
                        + " (limit 9)");
            vector<Element> perm(n), inverse(n);
            std::iota(perm.begin(), perm.end(), 0);
            vector<int> best;
            vector<Element> best_perm;
            do {
                for (int i = 0; i < n; ++i)
                    inverse[perm[i]] = i;
                auto code = encode_under(s, perm, inverse);
                if (best.empty() || code < best) {
                    best = std::move(code);
                    best_perm = perm;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            return {std::move(best), std::move(best_perm)};
        }
    }

    auto canonical_code(const FiniteStructure & s) -> vector<int>
    {
        return best_permutation(s).first;
    }

    auto canonical_form(const FiniteStructure & s) -> FiniteStructure
    {
        auto [code, perm] = best_permutation(s);
        auto p = s.permuted(perm);
        vector<string> names;
        for (int i = 0; i < p.size(); ++i)
            names.push_back(std::to_string(i));
        return p.renamed(std::move(names));
    }

    auto are_isomorphic(const FiniteStructure & a, const FiniteStructure & b) -> bool
    {
        if (a.size() != b.size() || ! a.signature().same_symbols(b.signature()))
            return false;
        return canonical_code(a) == canonical_code(b);
    }
}

namespace posmt
{
    auto expand_with_constants(const FiniteStructure & a, std::span<const Element> subset, const std::string & prefix)
        -> Expansion
    {
        Expansion result;
        if (subset.empty())
            for (Element e = 0; e < a.size(); ++e)
                result.named.push_back(e);
        else
            result.named.assign(subset.begin(), subset.end());

        auto & base = a.signature();
        std::set<std::string> taken;
        for (auto & r : base.relations())
            taken.insert(r.name);
        for (auto & f : base.functions())
            taken.insert(f.name);
        for (auto & c : base.constants())
            taken.insert(c);
        for (auto e : result.named) {
            if (e < 0 || e >= a.size())
                throw PreconditionError("expand_with_constants: element outside the universe");
            auto name = prefix + a.element_name(e);
            if (taken.count(name)) {
                int suffix = 1;
                while (taken.count(name + "_" + std::to_string(suffix)))
                    ++suffix;
                name += "_" + std::to_string(suffix);
                result.suffixed.push_back(name);
            }
            taken.insert(name);
            result.constant_names.push_back(name);
        }
        result.signature = make_signature(base.with_constants(base.name() + "(" + std::to_string(a.size()) + ")",
                result.constant_names));
        result.structure = a.expanded(result.signature, result.named);
        return result;
    }
}
