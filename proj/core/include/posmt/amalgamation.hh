#pragma once

#include <posmt/morphism.hh>
#include <posmt/theory.hh>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace posmt
{
    /// [alpha, beta, gamma, delta]: f: A -> B is alpha, g: A -> C is beta, and
    /// each out-map has the kind of the in-map it is parallel to in the square:
    /// f': C -> D is gamma and g': B -> D is delta.
    struct KindTuple
    {
        MorphismKind alpha = MorphismKind::Hom;
        MorphismKind beta = MorphismKind::Hom;
        MorphismKind gamma = MorphismKind::Hom;
        MorphismKind delta = MorphismKind::Hom;

        auto operator==(const KindTuple &) const -> bool = default;
    };

    /// Accepts "[i,i,h,h]", "i,i,h,h", "iihh" and the one-letter form "[h]".
    auto parse_kind_tuple(std::string_view text) -> KindTuple;
    auto to_string(const KindTuple & k) -> std::string;

    auto uniform_kinds(MorphismKind a) -> KindTuple;
    /// [a, b, a, b]
    auto asymmetric_kinds(MorphismKind a, MorphismKind b) -> KindTuple;
    /// [a, a, b, b]
    auto pregeneric_kinds(MorphismKind a, MorphismKind b) -> KindTuple;

    /// Either every structure over a signature, or the models of a theory.
    struct StructureClass
    {
        SignatureRef signature;
        std::optional<Theory> theory;

        static auto all(SignatureRef sig) -> StructureClass;
        static auto of(Theory t) -> StructureClass;

        auto name() const -> std::string;
        auto contains(const FiniteStructure & s) const -> bool;
        /// Members of size 1..max_size up to isomorphism.
        auto members(int max_size, std::size_t node_cap) const -> std::vector<FiniteStructure>;
    };

    struct AmalgamationProblem
    {
        FiniteStructure base;
        FiniteStructure left;
        FiniteStructure right;
        std::vector<Element> f;
        std::vector<Element> g;
        KindTuple kinds;
        StructureClass cls;
        bool strong = false;
        /// Collisions also need a common preimage in the base.
        bool strict = false;
        /// N bounds the apex size, node_cap every search.
        Budget budget;
    };

    struct AmalgamationSolution
    {
        FiniteStructure apex;
        /// g': left -> apex, of kind delta.
        std::vector<Element> left_out;
        /// f': right -> apex, of kind gamma.
        std::vector<Element> right_out;
        KindCertificate left_kind;
        KindCertificate right_kind;
        /// commutation[a] = g'(f(a)) = f'(g(a)).
        std::vector<Element> commutation;
        bool strong_holds = false;
        /// "quotient" or "search".
        std::string method;
    };

    struct AmalgamationResult
    {
        VerdictValue value = VerdictValue::Unknown;
        std::optional<AmalgamationSolution> solution;
        std::string summary;
        std::vector<std::string> notes;
        std::size_t apexes_tried = 0;
    };

    /// Throws PreconditionError unless f, g have the required kinds and the three
    /// structures lie in the class.
    auto validate_problem(const AmalgamationProblem & p) -> void;

    /// Quotients of the glued sum B + C (f(a) ~ g(a)) first, closed under the
    /// theory when it is Horn, then apexes of size 1..N from model search.
    auto solve_amalgamation(const AmalgamationProblem & p) -> AmalgamationResult;

    /// Re-checks class membership, kinds, commutation, apex size and the strong
    /// condition. Returns the failures; empty means valid.
    auto verify_solution(const AmalgamationProblem & p, const AmalgamationSolution & s) -> std::vector<std::string>;

    /// g'(b) = f'(c) only when b is in f(A) and c in g(A); strict also asks for one
    /// a with b = f(a) and c = g(a).
    auto check_strong_condition(const AmalgamationSolution & s, std::span<const Element> f,
            std::span<const Element> g, bool strict = false) -> bool;

    struct BasisInstance
    {
        std::size_t left_wing = 0;
        std::size_t right_wing = 0;
        std::vector<Element> f;
        std::vector<Element> g;
        AmalgamationResult result;
    };

    struct BasisReport
    {
        FiniteStructure base;
        KindTuple kinds;
        std::string class_name;
        StructureClass cls;
        bool strong = false;
        bool strict = false;
        Budget budget;
        /// Members of the class of size <= n that the instances index into.
        std::vector<FiniteStructure> wings;
        std::vector<BasisInstance> instances;
        VerdictValue verdict = VerdictValue::Unknown;
    };

    /// Every instance (B, C, f, g) with wings of size <= n in the class.
    auto check_basis(const FiniteStructure & a, const KindTuple & kinds, const StructureClass & cls, bool strong,
            const Budget & b, bool strict = false) -> BasisReport;

    enum class InstanceOutcome
    {
        Witnessed,
        BudgetExhausted
    };

    auto to_string(InstanceOutcome o) -> std::string;

    struct TheoremInstance
    {
        FiniteStructure base;
        FiniteStructure left;
        FiniteStructure right;
        std::vector<Element> f;
        std::vector<Element> g;
        int apex_bound = 0;
        InstanceOutcome outcome = InstanceOutcome::BudgetExhausted;
        std::optional<AmalgamationSolution> solution;
        bool reverified = false;
        std::string note;
    };

    struct TheoremReport
    {
        std::string id;
        std::string statement;
        KindTuple kinds;
        std::string class_name;
        StructureClass cls;
        bool strong = false;
        bool strict = false;
        std::uint64_t seed = 0;
        Budget budget;
        std::vector<TheoremInstance> instances;
        /// Instances where the search up to N was exhaustive and empty.
        std::vector<std::size_t> red_flags;

        auto witnessed() const -> std::size_t;
    };

    struct TheoremOptions
    {
        std::uint64_t seed = 1;
        int instances = 50;
        /// Apex bound; 0 means 2(|B| + |C|) per instance.
        int N = 0;
        bool strict = false;
    };

    auto theorem_ids() -> std::vector<std::string>;

    /// Instances are drawn from the class members of size <= n with a generator
    /// seeded by options.seed, then solved. Never reports a refutation.
    auto verify_theorem(const std::string & id, const TheoremOptions & options, const Budget & b) -> TheoremReport;
}
