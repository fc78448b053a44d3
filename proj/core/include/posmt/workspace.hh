#pragma once

#include <posmt/amalgamation.hh>
#include <posmt/morphism.hh>
#include <posmt/theory.hh>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace posmt
{
    struct SourceText
    {
        std::string name;
        std::string text;
    };

    /// An amalgamation block with names still unresolved against structures.
    struct ProblemSpec
    {
        std::string name;
        std::string base;
        std::string left;
        std::string right;
        KindTuple kinds;
        /// Empty means all structures over the base's signature.
        std::string theory;
        bool strong = false;
        bool strict = false;
        std::map<std::string, long long> budget;
    };

    struct ObjectStatus
    {
        std::string kind;
        std::string name;
        std::string source;
        /// Empty when the object is valid.
        std::string error;

        auto ok() const -> bool { return error.empty(); }
    };

    struct LoadReport
    {
        std::vector<ObjectStatus> objects;

        auto ok() const -> bool;
    };

    /// Named signatures, structures, morphisms, theories and amalgamation problems.
    ///
    /// Text format, one or more blocks per file, '#' comments:
    ///
    ///     signature poset { relations: leq/2; functions: f/1; constants: e; }
    ///     structure chain2 over poset { universe: b, t; leq: (b,b),(b,t),(t,t); f: b->t, t->t; e = b; }
    ///     morphism bottom from point to chain2 { map bottom: p -> b; }
    ///     theory T_pos over poset { hinductive: forall x. true -> leq(x,x); ... }
    ///     amalgamation glue { base: point; left: bottom; right: bottom; kinds: [e,e,e,e];
    ///                         class: theory T_pos; strong: true; budget: {N: 6}; }
    ///
    /// Function entries with several arguments are written (a,b)->c. A theory
    /// without 'over' uses the signature declared last before it. Inside an
    /// hinductive entry, further implications separated by ';' are conjuncts of
    /// the same sentence.
    class Workspace
    {
    public:
        struct NamedMorphism
        {
            std::string from;
            std::string to;
            Morphism morphism;
        };

        /// Built-in objects: poset, graph, unary, group, group_plus and ring
        /// signatures; T_pos, T_any, T_f1..T_f3, T_g, T_g_plus, T_ring; point,
        /// chain2, chain3, antichain2, loop, swap, trivial, Z2, Z3, Z4, V4, R2, R3;
        /// the maps bottom and top of point into chain2; the problem glue.
        static auto prelude() -> Workspace;

        /// All sources are parsed before any name is resolved, so a syntax error
        /// anywhere is reported as a ParseError (message prefixed by the source
        /// name) before semantic problems. Semantic problems are collected per
        /// object. Objects from the sources replace earlier ones of the same name,
        /// but a name may be defined only once per kind across the sources.
        auto load(std::span<const SourceText> sources) -> LoadReport;

        auto signature(const std::string & name) const -> SignatureRef;
        auto structure(const std::string & name) const -> const FiniteStructure &;
        auto morphism(const std::string & name) const -> const NamedMorphism &;
        auto theory(const std::string & name) const -> const Theory &;
        auto problem(const std::string & name) const -> const ProblemSpec &;

        /// Resolves names into a problem; overrides from the block's budget apply
        /// on top of b.
        auto resolve(const ProblemSpec & spec, Budget b) const -> AmalgamationProblem;

        auto structure_names() const -> std::vector<std::string>;
        auto theory_names() const -> std::vector<std::string>;
        auto morphism_names() const -> std::vector<std::string>;
        auto problem_names() const -> std::vector<std::string>;
        auto signature_names() const -> std::vector<std::string>;

    private:
        std::map<std::string, SignatureRef> _signatures;
        std::map<std::string, FiniteStructure> _structures;
        std::map<std::string, NamedMorphism> _morphisms;
        std::map<std::string, Theory> _theories;
        std::map<std::string, ProblemSpec> _problems;
    };

    /// Block text for a structure, in the workspace format.
    auto format_structure(const FiniteStructure & s, const std::string & name) -> std::string;
    auto format_signature(const Signature & s) -> std::string;
    auto format_theory(const Theory & t) -> std::string;

    /// Applies one budget key (n, N, k, node_cap, jobs) to a budget.
    auto set_budget_entry(Budget & b, const std::string & key, long long value) -> void;
}
