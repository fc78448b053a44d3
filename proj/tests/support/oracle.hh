#pragma once

// Brute-force reference implementations. They only read structure tables and
// never call the library's search, evaluation or classification code.

#include <posmt/formula.hh>
#include <posmt/structure.hh>

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle
{
    using posmt::Element;
    using posmt::FiniteStructure;
    using posmt::SignatureRef;
    using Map = std::vector<Element>;

    /// Every map from a to b that preserves relations, functions and constants,
    /// in lexicographic order.
    auto homs(const FiniteStructure & a, const FiniteStructure & b) -> std::vector<Map>;

    auto is_hom(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool;
    auto is_embedding(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool;
    auto is_iso(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool;

    /// Some homomorphism r: b -> a with r(m(x)) = x for every x, found by trying
    /// every map.
    auto retracts(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> bool;

    /// 0 when m is not a homomorphism, else 1 hom, 2 embedding, 3 immersion, 4
    /// isomorphism. Immersion is decided by retracts.
    auto strength(const FiniteStructure & a, const FiniteStructure & b, const Map & m) -> int;

    /// Same scale for a kind letter h, e, i, s.
    auto strength_of(char kind) -> int;

    /// CQ preservation with free variables for the elements of a and at most
    /// max_vars variables in all: every conjunction of atoms over free and
    /// quantified variables that holds in b at m(a) under some witness values
    /// holds in a at a. Only the maximal conjunction per witness assignment is
    /// tested, which covers every weaker one. Needs max_vars >= |a| + |b|.
    auto preserves_cqs(const FiniteStructure & a, const FiniteStructure & b, const Map & m, int max_vars) -> bool;

    /// Recursive evaluation of a formula under an assignment of its free variables.
    auto eval(const FiniteStructure & s, const posmt::FormulaPtr & f,
            std::map<std::string, Element> env = {}) -> bool;

    /// Smallest relabelled table encoding; equal iff isomorphic.
    auto code(const FiniteStructure & s) -> std::vector<int>;

    /// All structures of size 1..max_size over a signature with relations and
    /// functions only, one per isomorphism class.
    auto structures(const SignatureRef & sig, int max_size) -> std::vector<FiniteStructure>;

    /// Uniform random tables of the given size.
    auto random_structure(const SignatureRef & sig, int size, std::mt19937_64 & rng) -> FiniteStructure;

    /// Reflexive, antisymmetric and transitive leq tables, up to isomorphism.
    auto posets(int size) -> std::vector<FiniteStructure>;

    auto graph_signature() -> SignatureRef;
    auto unary_signature() -> SignatureRef;
}
