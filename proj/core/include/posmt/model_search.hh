#pragma once

#include <posmt/formula.hh>
#include <posmt/structure.hh>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace posmt
{
    inline constexpr std::size_t default_node_cap = 1'000'000;

    struct ModelSearchOptions
    {
        std::size_t node_cap = default_node_cap;

        /// Prune with the least-number heuristic and drop isomorphic duplicates.
        /// Without it every labelled model is produced.
        bool up_to_iso = true;

        /// Stop after this many models; 0 means no limit.
        std::size_t limit = 0;
    };

    struct ModelSearchStats
    {
        std::size_t nodes = 0;
        /// False when the search stopped early because of the limit or a callback.
        bool complete = true;
    };

    /// Backtracking finite model finder for closed formulas. Each table cell is
    /// assigned in turn, and a branch is cut as soon as some formula evaluates to
    /// false under three-valued evaluation of the partial tables. Throws
    /// BudgetExhausted when the node cap is reached.
    ///
    /// The visitor returns false to stop the search. With up_to_iso the visitor may
    /// still see isomorphic models; dedup happens in find_models.
    auto visit_models(SignatureRef sig, std::span<const FormulaPtr> sentences, int size,
            const ModelSearchOptions & options, const std::function<auto (const FiniteStructure &)->bool> & visit)
        -> ModelSearchStats;

    /// Models of exactly the given size, deduplicated up to isomorphism when
    /// options.up_to_iso is set and the size is at most 9, sorted by canonical code.
    auto find_models(SignatureRef sig, std::span<const FormulaPtr> sentences, int size,
            const ModelSearchOptions & options = {}, ModelSearchStats * stats = nullptr) -> std::vector<FiniteStructure>;

    /// Models with universe size 1..max_size, in order of size then canonical code.
    auto find_models_up_to(SignatureRef sig, std::span<const FormulaPtr> sentences, int max_size,
            const ModelSearchOptions & options = {}) -> std::vector<FiniteStructure>;

    /// Every structure over sig of size 1..max_size by plain table enumeration,
    /// in order of size then canonical code when up_to_iso, else of table encoding.
    /// Throws BudgetExhausted once more than cap candidate tables would be generated.
    auto enumerate_structures(SignatureRef sig, int max_size, bool up_to_iso, std::size_t cap = default_node_cap)
        -> std::vector<FiniteStructure>;
}
