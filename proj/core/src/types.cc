#include <posmt/error.hh>
#include <posmt/types.hh>

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

using std::size_t;
using std::vector;

namespace posmt
{
    namespace
    {
        // Term codes: v >= 0 is variable v, -1 - c is constant c.
        struct PAtom
        {
            FormulaKind kind;
            bool is_function;
            int symbol;
            vector<int> args;
            int result;

            auto operator<=>(const PAtom &) const = default;
        };

        auto term_of(int code, int free, const Signature & sig) -> Term
        {
            if (code < 0)
                return Term::constant(sig.constants()[-1 - code]);
            if (code < free)
                return Term::variable("x" + std::to_string(code));
            return Term::variable("y" + std::to_string(code - free));
        }

        auto pool_atoms(const Signature & sig, int free, int vars) -> vector<PAtom>
        {
            vector<int> terms;
            for (int v = 0; v < vars; ++v)
                terms.push_back(v);
            for (int c = 0; c < int(sig.constants().size()); ++c)
                terms.push_back(-1 - c);
            int t = int(terms.size());

            vector<PAtom> atoms;
            for (int r = 0; r < int(sig.relations().size()); ++r) {
                int arity = sig.relations()[r].arity;
                for (size_t j = 0; j < table_size(t, arity); ++j) {
                    vector<int> args;
                    for (auto x : tuple_at(t, arity, j))
                        args.push_back(terms[x]);
                    atoms.push_back(PAtom{FormulaKind::Relation, false, r, args, 0});
                }
            }
            for (int f = 0; f < int(sig.functions().size()); ++f) {
                int arity = sig.functions()[f].arity;
                for (size_t j = 0; j < table_size(t, arity); ++j) {
                    vector<int> args;
                    for (auto x : tuple_at(t, arity, j))
                        args.push_back(terms[x]);
                    for (auto result : terms)
                        atoms.push_back(PAtom{FormulaKind::Equality, true, f, args, result});
                }
            }
            // Equalities between free variables and constants only; an equality
            // with a quantified variable can be eliminated.
            vector<int> named;
            for (int v = 0; v < free; ++v)
                named.push_back(v);
            for (int c = 0; c < int(sig.constants().size()); ++c)
                named.push_back(-1 - c);
            for (size_t i = 0; i < named.size(); ++i)
                for (size_t j = i + 1; j < named.size(); ++j)
                    atoms.push_back(PAtom{FormulaKind::Equality, false, -1, {named[i]}, named[j]});
            std::sort(atoms.begin(), atoms.end());
            return atoms;
        }

        auto to_formula(const PAtom & a, int free, const Signature & sig) -> FormulaPtr
        {
            vector<Term> args;
            for (auto x : a.args)
                args.push_back(term_of(x, free, sig));
            if (a.kind == FormulaKind::Relation)
                return make_relation(sig.relations()[a.symbol].name, args);
            if (a.is_function)
                return make_equality(Term::application(sig.functions()[a.symbol].name, args),
                        term_of(a.result, free, sig));
            return make_equality(args[0], term_of(a.result, free, sig));
        }

        auto signature_key(const Signature & sig, int free, int k) -> std::string
        {
            std::string key = std::to_string(free) + "/" + std::to_string(k) + "|";
            for (auto & r : sig.relations())
                key += "R" + r.name + "/" + std::to_string(r.arity) + ",";
            for (auto & f : sig.functions())
                key += "F" + f.name + "/" + std::to_string(f.arity) + ",";
            for (auto & c : sig.constants())
                key += "C" + c + ",";
            return key;
        }

        auto build_pool(const SignatureRef & sig, int free, int k) -> std::shared_ptr<CQPool>
        {
            auto pool = std::make_shared<CQPool>();
            pool->free = free;
            pool->k = k;
            for (int vars = free; vars <= k; ++vars) {
                auto atoms = pool_atoms(*sig, free, vars);
                if (atoms.size() > 16)
                    throw BudgetExhausted("CQ pool with " + std::to_string(vars) + " variables over "
                            + std::to_string(atoms.size()) + " atoms exceeds 2^16 candidates; lower k");
                std::map<PAtom, int> index;
                for (size_t i = 0; i < atoms.size(); ++i)
                    index[atoms[i]] = int(i);

                int quantified = vars - free;
                vector<vector<int>> perms;
                vector<int> perm(quantified);
                std::iota(perm.begin(), perm.end(), free);
                do
                    perms.push_back(perm);
                while (std::next_permutation(perm.begin(), perm.end()));

                // Image of each atom under each renaming of quantified variables.
                vector<vector<int>> image(perms.size(), vector<int>(atoms.size()));
                for (size_t p = 0; p < perms.size(); ++p)
                    for (size_t i = 0; i < atoms.size(); ++i) {
                        auto a = atoms[i];
                        auto rename = [&](int x) { return x >= free ? perms[p][x - free] : x; };
                        for (auto & x : a.args)
                            x = rename(x);
                        if (a.is_function || a.kind == FormulaKind::Equality)
                            a.result = rename(a.result);
                        image[p][i] = index.at(a);
                    }

                vector<std::uint32_t> uses(atoms.size(), 0);
                for (size_t i = 0; i < atoms.size(); ++i) {
                    auto mark = [&](int x) {
                        if (x >= free)
                            uses[i] |= 1u << (x - free);
                    };
                    for (auto x : atoms[i].args)
                        mark(x);
                    if (atoms[i].is_function || atoms[i].kind == FormulaKind::Equality)
                        mark(atoms[i].result);
                }
                std::uint32_t all_used = (1u << quantified) - 1;

                for (std::uint32_t mask = 0; mask < (1u << atoms.size()); ++mask) {
                    std::uint32_t used = 0;
                    for (size_t i = 0; i < atoms.size(); ++i)
                        if (mask >> i & 1)
                            used |= uses[i];
                    if (used != all_used)
                        continue;
                    bool canonical = true;
                    for (size_t p = 1; p < perms.size() && canonical; ++p) {
                        std::uint32_t other = 0;
                        for (size_t i = 0; i < atoms.size(); ++i)
                            if (mask >> i & 1)
                                other |= 1u << image[p][i];
                        if (other < mask)
                            canonical = false;
                    }
                    if (! canonical)
                        continue;
                    CQ q;
                    for (int v = 0; v < free; ++v)
                        q.free_variables.push_back("x" + std::to_string(v));
                    for (int v = 0; v < quantified; ++v)
                        q.quantified.push_back("y" + std::to_string(v));
                    for (size_t i = 0; i < atoms.size(); ++i)
                        if (mask >> i & 1)
                            q.atoms.push_back(to_formula(atoms[i], free, *sig));
                    vector<vector<int>> codes;
                    for (size_t i = 0; i < atoms.size(); ++i)
                        if (mask >> i & 1) {
                            auto & a = atoms[i];
                            vector<int> code{a.kind == FormulaKind::Relation ? 0 : a.is_function ? 1 : 2, a.symbol};
                            code.insert(code.end(), a.args.begin(), a.args.end());
                            if (a.kind != FormulaKind::Relation)
                                code.push_back(a.result);
                            codes.push_back(std::move(code));
                        }
                    std::sort(codes.begin(), codes.end());
                    pool->codes.push_back(std::move(codes));
                    pool->variables.push_back(vars);
                    pool->compiled.emplace_back(q, *sig);
                    pool->queries.push_back(std::move(q));
                }
            }
            return pool;
        }
    }

    auto CQPool::is_subquery(size_t i, size_t j) const -> bool
    {
        int vi = variables[i], vj = variables[j];
        if (vi > vj || codes[i].size() > codes[j].size())
            return false;
        // Injective maps from the quantified variables of i into those of j.
        vector<int> targets(vj - free);
        std::iota(targets.begin(), targets.end(), free);
        int qi = vi - free;
        vector<int> choice(qi);
        auto & big = codes[j];
        std::function<bool(int, std::uint32_t)> assign = [&](int pos, std::uint32_t used) -> bool {
            if (pos == qi) {
                for (auto code : codes[i]) {
                    for (size_t p = 2; p < code.size(); ++p)
                        if (code[p] >= free)
                            code[p] = choice[code[p] - free];
                    if (! std::binary_search(big.begin(), big.end(), code))
                        return false;
                }
                return true;
            }
            for (size_t t = 0; t < targets.size(); ++t)
                if (! (used >> t & 1)) {
                    choice[pos] = targets[t];
                    if (assign(pos + 1, used | 1u << t))
                        return true;
                }
            return false;
        };
        return assign(0, 0);
    }

    auto cq_pool(const SignatureRef & sig, int free, int k) -> std::shared_ptr<const CQPool>
    {
        if (free < 0 || free > k || k < 0)
            throw PreconditionError("cq_pool needs 0 <= free <= k");
        static std::mutex mutex;
        static std::map<std::string, std::shared_ptr<const CQPool>> cache;
        auto key = signature_key(*sig, free, k);
        {
            std::lock_guard lock(mutex);
            if (auto it = cache.find(key); it != cache.end())
                return it->second;
        }
        auto pool = build_pool(sig, free, k);
        std::lock_guard lock(mutex);
        return cache.emplace(key, pool).first->second;
    }

    auto bit_test(const TypeBits & t, size_t i) -> bool
    {
        return t[i / 64] >> (i % 64) & 1;
    }

    auto bit_subset(const TypeBits & a, const TypeBits & b) -> bool
    {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] & ~b[i])
                return false;
        return true;
    }

    auto type_profile(const FiniteStructure & s, int k, int max_free) -> TypeProfile
    {
        TypeProfile profile;
        profile.k = k;
        auto sig = s.signature_ref();
        for (int m = 0; m <= max_free; ++m) {
            auto pool = cq_pool(sig, m, k);
            auto words = (pool->queries.size() + 63) / 64;
            vector<TypeBits> types;
            for (size_t j = 0; j < table_size(s.size(), m); ++j) {
                auto tuple = tuple_at(s.size(), m, j);
                TypeBits t(words, 0);
                for (size_t q = 0; q < pool->compiled.size(); ++q)
                    if (pool->compiled[q].holds(s, tuple))
                        t[q / 64] |= std::uint64_t(1) << (q % 64);
                types.push_back(std::move(t));
            }
            std::sort(types.begin(), types.end());
            types.erase(std::unique(types.begin(), types.end()), types.end());
            profile.types.push_back(std::move(types));
        }
        return profile;
    }

    auto merge_profiles(const vector<TypeProfile> & profiles, int k, int max_free) -> TypeProfile
    {
        TypeProfile merged;
        merged.k = k;
        merged.types.resize(max_free + 1);
        for (auto & p : profiles) {
            if (p.k != k || p.max_free() < max_free)
                throw PreconditionError("merge_profiles: profiles computed at different bounds");
            for (int m = 0; m <= max_free; ++m)
                merged.types[m].insert(merged.types[m].end(), p.types[m].begin(), p.types[m].end());
        }
        for (auto & t : merged.types) {
            std::sort(t.begin(), t.end());
            t.erase(std::unique(t.begin(), t.end()), t.end());
        }
        return merged;
    }

    auto satisfiable_sentences(const TypeProfile & p, size_t pool_size) -> TypeBits
    {
        TypeBits result((pool_size + 63) / 64, 0);
        for (auto & t : p.types.at(0))
            for (size_t i = 0; i < t.size(); ++i)
                result[i] |= t[i];
        return result;
    }

    auto tu_contained(const TypeProfile & x, const TypeProfile & y) -> bool
    {
        // T_u*(x) ⊆ T_u*(y) iff every sentence true in y is true in x.
        size_t words = 0;
        for (auto * p : {&x, &y})
            for (auto & t : p->types.at(0))
                words = std::max(words, t.size());
        auto tx = satisfiable_sentences(x, words * 64);
        auto ty = satisfiable_sentences(y, words * 64);
        return bit_subset(ty, tx);
    }

    auto ti_contained(const TypeProfile & x, const TypeProfile & y) -> bool
    {
        int top = std::min(x.max_free(), y.max_free());
        for (int m = 0; m <= top; ++m)
            for (auto & ty : y.types[m]) {
                TypeBits covered(ty.size(), 0);
                for (auto & tx : x.types[m])
                    if (bit_subset(tx, ty))
                        for (size_t i = 0; i < ty.size(); ++i)
                            covered[i] |= tx[i];
                if (covered != ty)
                    return false;
            }
        return true;
    }
}
