#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace posmt
{
    struct Symbol
    {
        std::string name;
        int arity = 0;

        auto operator<=>(const Symbol &) const = default;
    };

    /// Relation, function and constant symbols. Equality and falsum belong to the
    /// formula language, not to the signature. Symbol order is declaration order and
    /// is significant: structures store their tables in the same order.
    class Signature
    {
    public:
        Signature() = default;
        Signature(std::string name, std::vector<Symbol> relations, std::vector<Symbol> functions,
                std::vector<std::string> constants);

        auto name() const -> const std::string & { return _name; }
        auto relations() const -> const std::vector<Symbol> & { return _relations; }
        auto functions() const -> const std::vector<Symbol> & { return _functions; }
        auto constants() const -> const std::vector<std::string> & { return _constants; }

        auto relation_index(const std::string & name) const -> std::optional<int>;
        auto function_index(const std::string & name) const -> std::optional<int>;
        auto constant_index(const std::string & name) const -> std::optional<int>;
        auto has_symbol(const std::string & name) const -> bool;

        auto is_relational() const -> bool { return _functions.empty(); }
        auto max_function_arity() const -> int;

        /// Same symbols with the same arities (names of signatures are ignored).
        auto same_symbols(const Signature & other) const -> bool;

        /// Copy with additional constants appended; throws on a name clash.
        auto with_constants(const std::string & new_name, const std::vector<std::string> & extra) const -> Signature;

        /// Union of symbol sets; throws SignatureMismatch if a name is used with
        /// two different roles or arities.
        auto merged_with(const Signature & other, const std::string & new_name) const -> Signature;

    private:
        std::string _name;
        std::vector<Symbol> _relations;
        std::vector<Symbol> _functions;
        std::vector<std::string> _constants;

        auto validate() const -> void;
    };

    using SignatureRef = std::shared_ptr<const Signature>;

    auto make_signature(Signature s) -> SignatureRef;
}
