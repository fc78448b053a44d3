#include <posmt/catalog.hh>
#include <posmt/parser.hh>

using std::string;
using std::vector;

namespace posmt::catalog
{
    namespace
    {
        auto sentences(const SignatureRef & sig, std::initializer_list<const char *> texts) -> vector<Sentence>
        {
            vector<Sentence> result;
            for (auto text : texts)
                result.push_back(parse_formula(text, sig.get()).sentence.value());
            return result;
        }

        auto group_axioms() -> vector<const char *>
        {
            return {"hinductive: forall x y z. true -> mul(mul(x,y),z) = mul(x,mul(y,z))",
                "hinductive: forall x. true -> mul(e,x) = x", "hinductive: forall x. true -> mul(x,e) = x",
                "hinductive: forall x. true -> mul(inv(x),x) = e", "hinductive: forall x. true -> mul(x,inv(x)) = e"};
        }

        auto modular(int n, int arity, auto op) -> vector<int>
        {
            vector<int> table(table_size(n, arity));
            for (std::size_t i = 0; i < table.size(); ++i)
                table[i] = op(tuple_at(n, arity, i));
            return table;
        }
    }

    auto poset_signature() -> SignatureRef
    {
        static auto sig = make_signature(Signature("poset", {{"leq", 2}}, {}, {}));
        return sig;
    }

    auto binary_signature() -> SignatureRef
    {
        static auto sig = make_signature(Signature("graph", {{"R", 2}}, {}, {}));
        return sig;
    }

    auto unary_signature() -> SignatureRef
    {
        static auto sig = make_signature(Signature("unary", {}, {{"f", 1}}, {}));
        return sig;
    }

    auto group_signature() -> SignatureRef
    {
        static auto sig = make_signature(Signature("group", {}, {{"mul", 2}, {"inv", 1}}, {"e"}));
        return sig;
    }

    auto ring_signature() -> SignatureRef
    {
        static auto sig =
                make_signature(Signature("ring", {}, {{"add", 2}, {"mul", 2}, {"neg", 1}}, {"zero", "one"}));
        return sig;
    }

    auto partial_orders() -> Theory
    {
        auto sig = poset_signature();
        return Theory{"T_pos", sig,
            sentences(sig, {"hinductive: forall x. true -> leq(x,x)",
                               "hinductive: forall x y. leq(x,y) & leq(y,x) -> x = y",
                               "hinductive: forall x y z. leq(x,y) & leq(y,z) -> leq(x,z)"})};
    }

    auto has_cycle(int n) -> Theory
    {
        string term = "x";
        for (int i = 0; i < n; ++i)
            term = "f(" + term + ")";
        auto sig = unary_signature();
        auto text = "positive: exists x. " + term + " = x";
        return Theory{"T_f" + std::to_string(n), sig, sentences(sig, {text.c_str()})};
    }

    auto groups() -> Theory
    {
        auto sig = group_signature();
        Theory t{"T_g", sig, {}};
        for (auto text : group_axioms())
            t.sentences.push_back(parse_formula(text, sig.get()).sentence.value());
        return t;
    }

    auto groups_plus() -> Theory
    {
        auto sig = make_signature(group_signature()->with_constants("group_plus", {"a"}));
        Theory t{"T_g+", sig, {}};
        for (auto text : group_axioms())
            t.sentences.push_back(parse_formula(text, sig.get()).sentence.value());
        t.sentences.push_back(parse_formula("huniversal: ! a = e", sig.get()).sentence.value());
        return t;
    }

    auto rings() -> Theory
    {
        auto sig = ring_signature();
        return Theory{"T_ring", sig,
            sentences(sig, {"hinductive: forall x y z. true -> add(add(x,y),z) = add(x,add(y,z))",
                               "hinductive: forall x y. true -> add(x,y) = add(y,x)",
                               "hinductive: forall x. true -> add(x,zero) = x",
                               "hinductive: forall x. true -> add(x,neg(x)) = zero",
                               "hinductive: forall x y z. true -> mul(mul(x,y),z) = mul(x,mul(y,z))",
                               "hinductive: forall x y. true -> mul(x,y) = mul(y,x)",
                               "hinductive: forall x. true -> mul(x,one) = x",
                               "hinductive: forall x y z. true -> mul(x,add(y,z)) = add(mul(x,y),mul(x,z))",
                               "huniversal: ! zero = one"})};
    }

    auto point() -> FiniteStructure
    {
        return FiniteStructure(poset_signature(), {"p"}, {{1}}, {}, {});
    }

    auto chain2() -> FiniteStructure
    {
        return FiniteStructure(poset_signature(), {"b", "t"}, {{1, 0, 1, 1}}, {}, {});
    }

    auto antichain2() -> FiniteStructure
    {
        return FiniteStructure(poset_signature(), {"u", "v"}, {{1, 0, 0, 1}}, {}, {});
    }

    auto loop() -> FiniteStructure
    {
        return FiniteStructure(unary_signature(), {"x"}, {}, {{0}}, {});
    }

    auto trivial_group() -> FiniteStructure
    {
        return cyclic_group(1);
    }

    auto cyclic_group(int n) -> FiniteStructure
    {
        auto mul = modular(n, 2, [n](const vector<int> & t) { return (t[0] + t[1]) % n; });
        auto inv = modular(n, 1, [n](const vector<int> & t) { return (n - t[0]) % n; });
        return FiniteStructure::with_default_names(group_signature(), n, {}, {mul, inv}, {0});
    }

    auto residue_ring(int n) -> FiniteStructure
    {
        auto add = modular(n, 2, [n](const vector<int> & t) { return (t[0] + t[1]) % n; });
        auto mul = modular(n, 2, [n](const vector<int> & t) { return (t[0] * t[1]) % n; });
        auto neg = modular(n, 1, [n](const vector<int> & t) { return (n - t[0]) % n; });
        return FiniteStructure::with_default_names(ring_signature(), n, {}, {add, mul, neg}, {0, 1 % n});
    }
}
