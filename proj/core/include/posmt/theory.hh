#pragma once

#include <posmt/formula.hh>
#include <posmt/model_search.hh>
#include <posmt/morphism.hh>
#include <posmt/structure.hh>
#include <posmt/types.hh>

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace posmt
{
    struct Theory
    {
        std::string name;
        SignatureRef signature;
        std::vector<Sentence> sentences;

        auto formulas() const -> std::vector<FormulaPtr>;
        auto with(std::vector<Sentence> extra, std::string new_name = "") const -> Theory;
    };

    /// Checks closedness and symbols of every sentence; throws SemanticError.
    auto validate_theory(const Theory & t) -> void;

    struct Budget
    {
        int n = 3;
        int N = 6;
        int k = 3;
        std::size_t node_cap = default_node_cap;
        int jobs = 1;
    };

    /// Throws PreconditionError unless every bound is positive.
    auto validate_budget(const Budget & b) -> void;

    enum class VerdictValue
    {
        Yes,
        No,
        Unknown
    };

    auto to_string(VerdictValue v) -> std::string;

    struct NamedMap
    {
        std::string name;
        std::string from;
        std::string to;
        std::vector<Element> map;
    };

    /// Checkable evidence attached to a verdict: labelled structures, maps
    /// between them, sentences and free-form entries.
    struct Certificate
    {
        std::vector<std::pair<std::string, FiniteStructure>> structures;
        std::vector<NamedMap> maps;
        std::vector<std::pair<std::string, Sentence>> sentences;
        std::vector<std::pair<std::string, std::string>> details;

        auto structure(const std::string & label) const -> const FiniteStructure *;
        auto map(const std::string & label) const -> const NamedMap *;
        auto detail(const std::string & label) const -> const std::string *;
    };

    struct Verdict
    {
        VerdictValue value = VerdictValue::Unknown;
        Budget budget;
        std::string summary;
        Certificate certificate;
        std::vector<std::string> notes;

        auto yes() const -> bool { return value == VerdictValue::Yes; }
        auto no() const -> bool { return value == VerdictValue::No; }
        auto unknown() const -> bool { return value == VerdictValue::Unknown; }
    };

    /// Any no wins, then any unknown, else yes.
    auto merge_value(VerdictValue a, VerdictValue b) -> VerdictValue;

    /// Models of size 1..b.n up to isomorphism, by size then canonical code.
    auto models(const Theory & t, const Budget & b) -> std::vector<FiniteStructure>;

    enum class DiagramKind
    {
        Diag,
        DiagPlus,
        DiagPlusStar,
        Tu,
        Ti,
        TuStar,
        TiStar,
        TuRelative,
        TiRelative,
        Tk,
        TuTheory
    };

    auto to_string(DiagramKind k) -> std::string;
    auto parse_diagram_kind(std::string_view text) -> DiagramKind;

    /// A bounded set of sentences attached to one structure or to a class of
    /// structures (the sources). The listed sentences axiomatize the set; for
    /// the starred and hull kinds, membership of an arbitrary sentence is decided
    /// semantically by contains().
    struct DiagramSet
    {
        DiagramKind kind = DiagramKind::Diag;
        SignatureRef signature;
        std::vector<Sentence> sentences;
        int bound = 0;
        std::vector<FiniteStructure> sources;
        /// Constant names introduced for elements, if any.
        std::vector<std::string> constant_names;

        /// True iff the sentence holds in every source structure (kinds with
        /// sources) or is one of the listed sentences (Diag and Diag+).
        auto contains(const Sentence & s) const -> bool;
    };

    /// Diag and Diag+ use constants <prefix><element>; the starred kinds are over
    /// L with CQ bound b.k; Tu, Ti are the starred sets of the L(A)-expansion and
    /// the relative kinds those of the expansion by the subset only.
    auto diagram(const FiniteStructure & a, DiagramKind kind, const Budget & b, std::span<const Element> subset = {},
            const std::string & prefix = "c_") -> DiagramSet;

    /// The sentences as a theory over the set's signature.
    auto to_theory(const DiagramSet & d, std::string name = "") -> Theory;

    using ConsistencyPart = std::variant<Theory, DiagramSet>;

    /// Searches a model of the union over the union signature (constants with the
    /// same name are identified), sizes 1..b.N. No only from a ground refutation.
    auto joint_consistency_bounded(const std::vector<ConsistencyPart> & parts, const Budget & b) -> Verdict;

    /// Every homomorphism from m into a model of size <= n is an immersion.
    auto is_pc_within(const FiniteStructure & m, const Theory & t, const Budget & b) -> Verdict;
    auto pc_models(const Theory & t, const Budget & b) -> std::vector<FiniteStructure>;

    /// Every pair of models of size <= n continues into a common model of size <= N.
    auto is_jc_bounded(const Theory & t, const Budget & b) -> Verdict;
    auto is_T_complete_pair(const Theory & t1, const Theory & t2, const Theory & t, const Budget & b) -> Verdict;

    struct ConditionResult
    {
        std::string name;
        bool holds = false;
        std::string detail;
    };

    struct JCReport
    {
        std::vector<ConditionResult> conditions;
        Verdict jc;
        bool agree = false;
        Budget budget;
    };

    auto jc_characterization_report(const Theory & t, const Budget & b) -> JCReport;

    auto tu_ti_extremality_check(const Theory & t, const Budget & b) -> Verdict;
    auto companion_check_bounded(const Theory & t1, const Theory & t2, const Budget & b) -> Verdict;

    struct KaiserHull
    {
        /// h-inductive sentences of size <= k true in every bounded-pc model.
        DiagramSet hull;
        /// h-universal sentences of size <= k true in every model of size <= n.
        DiagramSet universal;
    };

    auto kaiser_hull_bounded(const Theory & t, const Budget & b) -> KaiserHull;

    /// Whether some homomorphism a -> c exists.
    auto has_hom(const FiniteStructure & a, const FiniteStructure & c, std::size_t node_cap = default_node_cap) -> bool;
}
