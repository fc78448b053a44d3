#include <posmt/signature.hh>
#include <posmt/error.hh>

#include <algorithm>
#include <set>

using std::optional;
using std::string;
using std::vector;

namespace posmt
{
    Signature::Signature(string name, vector<Symbol> relations, vector<Symbol> functions, vector<string> constants) :
        _name(std::move(name)),
        _relations(std::move(relations)),
        _functions(std::move(functions)),
        _constants(std::move(constants))
    {
        validate();
    }

    auto Signature::validate() const -> void
    {
        std::set<string> seen;
        auto claim = [&](const string & n) {
            if (n.empty())
                throw SemanticError("signature " + _name + ": empty symbol name");
            if (! seen.insert(n).second)
                throw SemanticError("signature " + _name + ": symbol '" + n + "' declared twice");
        };
        for (auto & r : _relations) {
            claim(r.name);
            if (r.arity < 1)
                throw SemanticError("signature " + _name + ": relation '" + r.name + "' must have arity >= 1");
        }
        for (auto & f : _functions) {
            claim(f.name);
            if (f.arity < 1)
                throw SemanticError("signature " + _name + ": function '" + f.name
                        + "' must have arity >= 1 (declare 0-ary symbols as constants)");
        }
        for (auto & c : _constants)
            claim(c);
    }

    namespace
    {
        auto find_symbol(const vector<Symbol> & v, const string & name) -> optional<int>
        {
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i].name == name)
                    return int(i);
            return std::nullopt;
        }
    }

    auto Signature::relation_index(const string & name) const -> optional<int>
    {
        return find_symbol(_relations, name);
    }

    auto Signature::function_index(const string & name) const -> optional<int>
    {
        return find_symbol(_functions, name);
    }

    auto Signature::constant_index(const string & name) const -> optional<int>
    {
        auto it = std::find(_constants.begin(), _constants.end(), name);
        if (it == _constants.end())
            return std::nullopt;
        return int(it - _constants.begin());
    }

    auto Signature::has_symbol(const string & name) const -> bool
    {
        return relation_index(name) || function_index(name) || constant_index(name);
    }

    auto Signature::max_function_arity() const -> int
    {
        int result = 0;
        for (auto & f : _functions)
            result = std::max(result, f.arity);
        return result;
    }

    auto Signature::same_symbols(const Signature & other) const -> bool
    {
        return _relations == other._relations && _functions == other._functions && _constants == other._constants;
    }

    auto Signature::with_constants(const string & new_name, const vector<string> & extra) const -> Signature
    {
        auto constants = _constants;
        constants.insert(constants.end(), extra.begin(), extra.end());
        return Signature(new_name, _relations, _functions, constants);
    }

    auto Signature::merged_with(const Signature & other, const string & new_name) const -> Signature
    {
        auto relations = _relations;
        auto functions = _functions;
        auto constants = _constants;
        for (auto & r : other._relations) {
            if (auto i = relation_index(r.name)) {
                if (_relations[*i].arity != r.arity)
                    throw SignatureMismatch("relation '" + r.name + "' has conflicting arities");
            }
            else if (has_symbol(r.name))
                throw SignatureMismatch("symbol '" + r.name + "' used with two roles");
            else
                relations.push_back(r);
        }
        for (auto & f : other._functions) {
            if (auto i = function_index(f.name)) {
                if (_functions[*i].arity != f.arity)
                    throw SignatureMismatch("function '" + f.name + "' has conflicting arities");
            }
            else if (has_symbol(f.name))
                throw SignatureMismatch("symbol '" + f.name + "' used with two roles");
            else
                functions.push_back(f);
        }
        for (auto & c : other._constants) {
            if (constant_index(c))
                continue;
            if (has_symbol(c))
                throw SignatureMismatch("symbol '" + c + "' used with two roles");
            constants.push_back(c);
        }
        return Signature(new_name, relations, functions, constants);
    }

    auto make_signature(Signature s) -> SignatureRef
    {
        return std::make_shared<const Signature>(std::move(s));
    }
}
