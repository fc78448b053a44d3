#pragma once

#include <posmt/structure.hh>
#include <posmt/theory.hh>

namespace posmt::catalog
{
    /// {leq/2}
    auto poset_signature() -> SignatureRef;
    /// {R/2}
    auto binary_signature() -> SignatureRef;
    /// {f/1}
    auto unary_signature() -> SignatureRef;
    /// {mul/2, inv/1; e}
    auto group_signature() -> SignatureRef;
    /// {add/2, mul/2, neg/1; zero, one}
    auto ring_signature() -> SignatureRef;

    /// Reflexivity, antisymmetry, transitivity.
    auto partial_orders() -> Theory;
    /// {exists x. f^n(x) = x}
    auto has_cycle(int n) -> Theory;
    auto groups() -> Theory;
    /// Groups with a constant a and !(a = e), over group_signature() plus a.
    auto groups_plus() -> Theory;
    /// Commutative rings with 1 and !(zero = one).
    auto rings() -> Theory;

    auto point() -> FiniteStructure;
    /// b <= t
    auto chain2() -> FiniteStructure;
    auto antichain2() -> FiniteStructure;
    /// f(x) = x on one element.
    auto loop() -> FiniteStructure;
    auto trivial_group() -> FiniteStructure;
    auto cyclic_group(int n) -> FiniteStructure;
    /// Z/nZ as a ring.
    auto residue_ring(int n) -> FiniteStructure;
}
