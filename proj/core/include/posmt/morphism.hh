#pragma once

#include <posmt/formula.hh>
#include <posmt/model_search.hh>
#include <posmt/structure.hh>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace posmt
{
    enum class MorphismKind
    {
        Hom,
        Embedding,
        Immersion,
        StrongImmersion
    };

    auto to_string(MorphismKind k) -> std::string;

    /// Single-letter form used in kind tuples: h, e, i, s.
    auto kind_letter(MorphismKind k) -> char;
    auto parse_kind(std::string_view text) -> MorphismKind;

    struct Morphism
    {
        FiniteStructure source;
        FiniteStructure target;
        std::vector<Element> map;

        auto operator()(Element e) const -> Element { return map.at(e); }
    };

    /// Checks totality, ranges and signature agreement; throws otherwise.
    auto validate_morphism(const Morphism & m) -> void;
    auto identity_morphism(const FiniteStructure & s) -> Morphism;
    auto compose(const Morphism & first, const Morphism & second) -> Morphism;

    /// Positive atomic facts over variables 0..variables-1, the source side of a
    /// homomorphism search.
    struct FactSet
    {
        struct Fact
        {
            enum class Kind
            {
                Relation,
                Function,
                Constant
            };
            Kind kind;
            int symbol;
            std::vector<int> args;
            int result = -1;
        };

        int variables = 0;
        std::vector<Fact> facts;

        /// Every relation tuple, function entry and constant of the structure.
        static auto of(const FiniteStructure & s) -> FactSet;
    };

    struct HomConstraint
    {
        /// required[a] is the forced image of a, or -1. May be shorter than the source.
        std::vector<Element> required;
        /// Source pairs that must get different images.
        std::vector<std::pair<Element, Element>> distinct;
        /// Source pairs that must get the same image.
        std::vector<std::pair<Element, Element>> same;
        /// (source element, target element) pairs that are not allowed.
        std::vector<std::pair<Element, Element>> forbidden;
        bool injective = false;
    };

    /// Backtracking homomorphism search with forward checking. Targets are
    /// limited to 64 elements. The visitor returns false to stop. Throws
    /// BudgetExhausted past the node cap.
    auto search_homs(const FactSet & source, const FiniteStructure & target, const HomConstraint & constraint,
            const std::function<bool(const std::vector<Element> &)> & visit, std::size_t node_cap = default_node_cap)
        -> std::size_t;

    auto find_hom(const FactSet & source, const FiniteStructure & target, const HomConstraint & constraint = {},
            std::size_t node_cap = default_node_cap) -> std::optional<std::vector<Element>>;

    auto is_homomorphism(const Morphism & m) -> bool;
    auto is_embedding(const Morphism & m) -> bool;

    /// A homomorphism r: target -> source with r(m(a)) = a for every a, if one
    /// exists. Its existence is equivalent to m being an immersion.
    auto find_retraction(const Morphism & m, std::size_t node_cap = default_node_cap)
        -> std::optional<std::vector<Element>>;
    auto is_immersion(const Morphism & m) -> bool;

    struct StrongImmersionCheck
    {
        bool holds = false;
        int bound = 0;
        /// An L(source)-sentence true in the source and false in the target along m.
        std::optional<Sentence> witness;
    };

    /// Bounded test of the target satisfying T_i of the source along m. Premises
    /// range over positive diagrams of target subsets of size at most k, with the
    /// images of m named by constants c_<element>; conclusions list every way the
    /// remaining elements can be matched in the source. k <= 0 means |target|.
    auto is_strong_immersion(const Morphism & m, int k = 0) -> StrongImmersionCheck;

    /// Signature of the constants used in strong-immersion witnesses.
    auto strong_witness_signature(const Morphism & m) -> Expansion;

    struct KindCertificate
    {
        MorphismKind kind = MorphismKind::Hom;
        std::optional<std::vector<Element>> retraction;
        int strong_bound = 0;
        /// Why the next kind up fails, when it is decidable from a sentence.
        std::optional<Sentence> refutation;
    };

    /// Strongest kind that holds. Throws PreconditionError if m is not a homomorphism.
    auto classify_morphism(const Morphism & m, int k = 0) -> KindCertificate;

    /// Same, but stops once the requested kind is established or refuted.
    auto certify_kind(const Morphism & m, MorphismKind at_least, int k = 0) -> std::optional<KindCertificate>;

    struct CertifiedMorphism
    {
        Morphism morphism;
        KindCertificate certificate;
    };

    /// All homomorphisms a -> b satisfying the constraint that are of at least the
    /// requested kind, sorted by map.
    auto enumerate_homs(const FiniteStructure & a, const FiniteStructure & b, const HomConstraint & constraint = {},
            MorphismKind kind = MorphismKind::Hom, int k = 0, std::size_t node_cap = default_node_cap)
        -> std::vector<CertifiedMorphism>;
}
