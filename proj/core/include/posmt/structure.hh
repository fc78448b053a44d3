#pragma once

#include <posmt/signature.hh>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace posmt
{
    using Element = int;

    /// Index of an argument tuple in a dense table over a universe of the given
    /// size. Position 0 is the least significant digit.
    auto tuple_index(int universe_size, std::span<const Element> args) -> std::size_t;
    auto tuple_at(int universe_size, int arity, std::size_t index) -> std::vector<Element>;
    auto table_size(int universe_size, int arity) -> std::size_t;

    /// Read-only view of interpretation tables. Function entries and constants may
    /// be -1 and relation entries may be -1 when the view describes a partial
    /// interpretation under construction; a finite structure never has either.
    struct Interp
    {
        int size = 0;
        std::span<const std::vector<int>> functions;
        std::span<const std::vector<signed char>> relations;
        std::span<const int> constants;
    };

    class FiniteStructure
    {
    public:
        FiniteStructure() = default;

        /// Validates every structure invariant and throws SemanticError on failure.
        FiniteStructure(SignatureRef signature, std::vector<std::string> element_names,
                std::vector<std::vector<signed char>> relations, std::vector<std::vector<int>> functions,
                std::vector<Element> constants);

        /// Universe {"0", ..., "n-1"}.
        static auto with_default_names(SignatureRef signature, int size,
                std::vector<std::vector<signed char>> relations, std::vector<std::vector<int>> functions,
                std::vector<Element> constants) -> FiniteStructure;

        auto signature() const -> const Signature & { return *_signature; }
        auto signature_ref() const -> const SignatureRef & { return _signature; }
        auto size() const -> int { return int(_names.size()); }
        auto element_name(Element e) const -> const std::string & { return _names.at(e); }
        auto element_names() const -> const std::vector<std::string> & { return _names; }
        auto element_index(const std::string & name) const -> std::optional<Element>;

        auto holds(int relation, std::span<const Element> args) const -> bool;
        auto apply(int function, std::span<const Element> args) const -> Element;
        auto constant(int c) const -> Element { return _constants.at(c); }

        auto relation_table(int r) const -> const std::vector<signed char> & { return _relations.at(r); }
        auto function_table(int f) const -> const std::vector<int> & { return _functions.at(f); }
        auto relation_tables() const -> const std::vector<std::vector<signed char>> & { return _relations; }
        auto function_tables() const -> const std::vector<std::vector<int>> & { return _functions; }
        auto constants() const -> const std::vector<Element> & { return _constants; }

        auto view() const -> Interp;

        /// Same symbols and identical tables; element names are ignored.
        auto same_tables(const FiniteStructure & other) const -> bool;

        /// The structure transported along a permutation: element e becomes perm[e].
        auto permuted(std::span<const Element> perm) const -> FiniteStructure;

        /// Reduct to the symbols of a smaller signature (looked up by name).
        auto reduct(SignatureRef smaller) const -> FiniteStructure;

        /// Expansion to a larger signature that adds only constants.
        auto expanded(SignatureRef larger, std::span<const Element> extra_constant_values) const -> FiniteStructure;

        auto renamed(std::vector<std::string> names) const -> FiniteStructure;

    private:
        SignatureRef _signature;
        std::vector<std::string> _names;
        std::vector<std::vector<signed char>> _relations;
        std::vector<std::vector<int>> _functions;
        std::vector<Element> _constants;

        auto validate() const -> void;
    };

    struct PointedStructure
    {
        FiniteStructure structure;
        std::vector<Element> anchors;
    };

    struct Substructure
    {
        FiniteStructure structure;
        /// inclusion[i] is the element of the ambient structure that element i stands for.
        std::vector<Element> inclusion;
    };

    /// Least subset containing the seed and every constant, closed under every
    /// function, with the induced interpretation. Elements keep their names and
    /// their relative order. Throws SemanticError if the result would be empty.
    auto generated_substructure(const FiniteStructure & s, std::span<const Element> seed) -> Substructure;

    /// Closure of a set of elements under constants and functions, as a membership mask.
    auto closure_mask(const FiniteStructure & s, std::span<const Element> seed) -> std::vector<bool>;

    /// Lexicographically least table encoding over all relabellings. Two structures
    /// over the same signature are isomorphic iff their codes are equal.
    auto canonical_code(const FiniteStructure & s) -> std::vector<int>;

    /// Canonical representative: the relabelling attaining canonical_code, with
    /// default element names.
    auto canonical_form(const FiniteStructure & s) -> FiniteStructure;

    auto are_isomorphic(const FiniteStructure & a, const FiniteStructure & b) -> bool;

    /// A structure expanded by one new constant per named element.
    struct Expansion
    {
        SignatureRef signature;
        FiniteStructure structure;
        std::vector<Element> named;
        /// constant_names[i] names element named[i].
        std::vector<std::string> constant_names;
        /// Names that had to be suffixed because the plain name was taken.
        std::vector<std::string> suffixed;
    };

    /// L(A)-expansion: constant <prefix><element name> for each element of the
    /// subset (all elements when the subset is empty), suffixed with _1, _2, ...
    /// on collision with an existing symbol.
    auto expand_with_constants(const FiniteStructure & a, std::span<const Element> subset = {},
            const std::string & prefix = "c_") -> Expansion;
}
