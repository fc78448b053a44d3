#pragma once

#include <posmt/formula.hh>
#include <posmt/structure.hh>

#include <span>
#include <string>
#include <vector>

namespace posmt
{
    /// Conjunctive query: an existentially quantified conjunction of flat atoms.
    /// Flat atoms are R(u,...), f(u,...) = v and u = v where every u, v is a
    /// variable or a constant.
    struct CQ
    {
        std::vector<std::string> free_variables;
        std::vector<std::string> quantified;
        std::vector<FormulaPtr> atoms;

        auto to_formula() const -> FormulaPtr;

        /// Number of variables, free and quantified.
        auto size() const -> int { return int(free_variables.size() + quantified.size()); }
    };

    auto to_string(const CQ & q) -> std::string;

    inline constexpr std::size_t default_dnf_cap = 4096;

    /// Disjunction of CQs equivalent to a positive formula. Nested function
    /// applications are flattened through fresh variables named _v0, _v1, ...;
    /// disjuncts containing false are dropped, so the result is empty iff the
    /// formula is equivalent to false. Free variables of the result are the free
    /// variables of the input, sorted. Throws BudgetExhausted past the cap.
    auto to_cq_dnf(const FormulaPtr & positive, std::size_t cap = default_dnf_cap) -> std::vector<CQ>;

    /// Every atomic fact of the structure among the given elements, as a CQ whose
    /// free variables x0, x1, ... stand for the anchor positions and whose
    /// quantified variables y0, y1, ... stand for the remaining elements.
    auto pointed_positive_diagram(const PointedStructure & p, std::span<const Element> subset) -> CQ;

    /// CQ matcher by backtracking, checking each atom as soon as its variables are bound.
    class CompiledCQ
    {
    public:
        CompiledCQ(const CQ & q, const Signature & sig);

        auto holds(const FiniteStructure & s, std::span<const Element> free_values) const -> bool;
        auto free_count() const -> int { return _free_count; }
        auto slot_count() const -> int { return _slot_count; }

    private:
        struct Arg
        {
            int slot = -1;
            int constant = -1;
        };

        struct Atom
        {
            FormulaKind kind;
            bool is_function = false;
            int symbol = -1;
            std::vector<Arg> args;
            Arg result;
            int last_slot = -1;
        };

        int _free_count = 0;
        int _slot_count = 0;
        std::vector<Atom> _atoms;
        std::vector<std::vector<int>> _check_at;  // indexed by last_slot + 1
        std::vector<int> _determiner;             // atom that forces the value of a slot, or -1

        auto atom_holds(const Atom & a, const FiniteStructure & s, const std::vector<Element> & env) const -> bool;
        auto search(int slot, const FiniteStructure & s, std::vector<Element> & env) const -> bool;
    };
}
