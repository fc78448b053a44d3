#pragma once

#include <posmt/cq.hh>
#include <posmt/structure.hh>

#include <cstdint>
#include <memory>
#include <vector>

namespace posmt
{
    /// Canonical CQs with free variables x0..x(m-1) and at most k variables in all.
    /// Atoms are relation atoms and flat function atoms over variables and
    /// constants, plus equalities among free variables and constants. Queries that
    /// differ by a renaming of quantified variables appear once, and no quantified
    /// variable is unused.
    struct CQPool
    {
        int free = 0;
        int k = 0;
        std::vector<CQ> queries;
        std::vector<CompiledCQ> compiled;
        /// Per query: number of variables and sorted atom codes
        /// {kind, symbol, terms...} with variables as indices and constant c as -1-c.
        std::vector<int> variables;
        std::vector<std::vector<std::vector<int>>> codes;

        /// Query i is query j with some atoms or quantified variables removed,
        /// up to renaming; then j implies i.
        auto is_subquery(std::size_t i, std::size_t j) const -> bool;
    };

    /// Cached per signature symbols, m and k. Throws BudgetExhausted when some
    /// variable count allows more than 16 atoms.
    auto cq_pool(const SignatureRef & sig, int free, int k) -> std::shared_ptr<const CQPool>;

    using TypeBits = std::vector<std::uint64_t>;

    auto bit_test(const TypeBits & t, std::size_t i) -> bool;
    auto bit_subset(const TypeBits & a, const TypeBits & b) -> bool;

    /// For each m up to max_free, the distinct sets of pool_m queries true at an
    /// m-tuple of the structure(s). Profiles of several structures merge by union,
    /// which corresponds to intersecting their bounded theories.
    struct TypeProfile
    {
        int k = 0;
        std::vector<std::vector<TypeBits>> types;

        auto max_free() const -> int { return int(types.size()) - 1; }
        /// Pool_0 queries true in the structure; meaningful for a single structure.
        auto sentences() const -> const TypeBits & { return types.at(0).at(0); }
    };

    auto type_profile(const FiniteStructure & s, int k, int max_free) -> TypeProfile;
    auto merge_profiles(const std::vector<TypeProfile> & profiles, int k, int max_free) -> TypeProfile;

    /// Pool_0 queries that hold in at least one of the profiled structures.
    auto satisfiable_sentences(const TypeProfile & p, std::size_t pool_size) -> TypeBits;

    /// T_u*(x)|k ⊆ T_u*(y)|k, on single-structure profiles.
    auto tu_contained(const TypeProfile & x, const TypeProfile & y) -> bool;

    /// T_i*(x)|k ⊆ T_i*(y)|k. On merged profiles, x stands for the intersection of
    /// its structures' theories. Every y-type must be the union of the x-types below it.
    auto ti_contained(const TypeProfile & x, const TypeProfile & y) -> bool;
}
