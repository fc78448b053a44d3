#pragma once

#include <posmt/formula.hh>
#include <posmt/structure.hh>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace posmt
{
    /// Kleene truth values. Over a total structure only False and True occur.
    enum class Truth : signed char
    {
        False = 0,
        Unknown = 1,
        True = 2
    };

    using Assignment = std::map<std::string, Element>;

    /// A formula resolved against a signature: symbols become table indices and
    /// variables become slots. Free variables occupy the first slots, in the order
    /// given at construction.
    class CompiledFormula
    {
    public:
        CompiledFormula(const FormulaPtr & f, const Signature & sig, std::vector<std::string> free_variables = {});

        auto evaluate(const Interp & interp, std::span<const Element> free_values = {}) const -> Truth;
        auto holds(const FiniteStructure & s, std::span<const Element> free_values = {}) const -> bool;

        auto free_variables() const -> const std::vector<std::string> & { return _free; }

        struct Term
        {
            enum class Kind : signed char
            {
                Slot,
                Constant,
                Application
            };
            Kind kind;
            int index;
            std::vector<Term> args;
        };

        struct Node
        {
            FormulaKind kind;
            int symbol = -1;
            std::vector<Term> terms;
            std::vector<Node> children;
            std::vector<int> slots;
        };

    private:
        std::vector<std::string> _free;
        int _slot_count = 0;
        Node _root;
    };

    /// Truth of a formula in a structure under an assignment of its free variables.
    /// Throws UnboundVariable if a free variable is unassigned and SemanticError if
    /// a symbol is not in the structure's signature.
    auto eval(const FiniteStructure & s, const FormulaPtr & f, const Assignment & env = {}) -> bool;
    auto eval(const FiniteStructure & s, const Sentence & sentence) -> bool;
    auto evaluate_term(const FiniteStructure & s, const posmt::Term & t, const Assignment & env = {}) -> Element;

    auto models_all(const FiniteStructure & s, std::span<const Sentence> sentences) -> bool;
}
