#include <posmt/error.hh>
#include <posmt/eval.hh>
#include <posmt/model_search.hh>

#include <algorithm>
#include <map>
#include <set>

using std::size_t;
using std::vector;

namespace posmt
{
    namespace
    {
        enum class CellKind
        {
            Constant,
            Function,
            Relation
        };

        struct Cell
        {
            CellKind kind;
            int symbol;
            size_t index;
            int max_argument;
        };

        auto symbols_of(const Term & t, const Signature & sig, vector<bool> & fun, vector<bool> & con) -> void
        {
            if (t.kind == Term::Kind::Application) {
                if (auto i = sig.function_index(t.name))
                    fun[*i] = true;
                for (auto & a : t.args)
                    symbols_of(a, sig, fun, con);
            }
            else if (auto i = sig.constant_index(t.name))
                con[*i] = true;
        }

        auto symbols_of(const FormulaPtr & f, const Signature & sig, vector<bool> & rel, vector<bool> & fun,
                vector<bool> & con) -> void
        {
            if (f->kind == FormulaKind::Relation)
                if (auto i = sig.relation_index(f->symbol))
                    rel[*i] = true;
            for (auto & t : f->terms)
                symbols_of(t, sig, fun, con);
            for (auto & c : f->children)
                symbols_of(c, sig, rel, fun, con);
        }

        struct Search
        {
            const SignatureRef & sig;
            int n;
            const ModelSearchOptions & options;
            const std::function<bool(const FiniteStructure &)> & visit;

            vector<CompiledFormula> formulas;
            vector<vector<size_t>> watchers_rel, watchers_fun, watchers_con;
            vector<Cell> cells;

            vector<vector<int>> functions;
            vector<vector<signed char>> relations;
            vector<int> constants;

            ModelSearchStats stats;
            bool stopped = false;

            auto view() const -> Interp
            {
                return Interp{n, functions, relations, constants};
            }

            auto watchers(const Cell & c) const -> const vector<size_t> &
            {
                switch (c.kind) {
                case CellKind::Constant: return watchers_con[c.symbol];
                case CellKind::Function: return watchers_fun[c.symbol];
                default: return watchers_rel[c.symbol];
                }
            }

            auto consistent(const vector<size_t> & which, vector<Truth> & status) const -> bool
            {
                auto in = view();
                for (auto i : which) {
                    if (status[i] == Truth::True)
                        continue;
                    status[i] = formulas[i].evaluate(in);
                    if (status[i] == Truth::False)
                        return false;
                }
                return true;
            }

            auto emit() -> void
            {
                auto s = FiniteStructure::with_default_names(sig, n, relations, functions, constants);
                if (! visit(s))
                    stopped = true;
            }

            auto run(size_t depth, int touched, const vector<Truth> & status) -> void
            {
                if (stopped)
                    return;
                if (++stats.nodes > options.node_cap)
                    throw BudgetExhausted("model search exceeded the node cap of " + std::to_string(options.node_cap));
                if (depth == cells.size()) {
                    emit();
                    return;
                }
                auto & cell = cells[depth];
                int mt = std::max(touched, cell.max_argument);
                auto & watch = watchers(cell);

                auto attempt = [&](auto assign, int new_touched) {
                    assign();
                    auto next = status;
                    if (consistent(watch, next))
                        run(depth + 1, new_touched, next);
                };

                if (cell.kind == CellKind::Relation) {
                    for (signed char v = 0; v <= 1 && ! stopped; ++v)
                        attempt([&] { relations[cell.symbol][cell.index] = v; }, mt);
                    relations[cell.symbol][cell.index] = -1;
                    return;
                }
                int top = options.up_to_iso ? std::min(n - 1, mt + 1) : n - 1;
                for (int v = 0; v <= top && ! stopped; ++v) {
                    if (cell.kind == CellKind::Constant)
                        attempt([&] { constants[cell.symbol] = v; }, std::max(mt, v));
                    else
                        attempt([&] { functions[cell.symbol][cell.index] = v; }, std::max(mt, v));
                }
                if (cell.kind == CellKind::Constant)
                    constants[cell.symbol] = -1;
                else
                    functions[cell.symbol][cell.index] = -1;
            }
        };
    }

    auto visit_models(SignatureRef sig, std::span<const FormulaPtr> sentences, int size,
            const ModelSearchOptions & options, const std::function<bool(const FiniteStructure &)> & visit)
        -> ModelSearchStats
    {
        if (size < 1)
            throw PreconditionError("model search needs a positive universe size");
        Search search{sig, size, options, visit, {}, {}, {}, {}, {}, {}, {}, {}, {}};

        auto & s = *sig;
        search.watchers_rel.resize(s.relations().size());
        search.watchers_fun.resize(s.functions().size());
        search.watchers_con.resize(s.constants().size());
        vector<size_t> unwatched;
        for (auto & f : sentences) {
            if (! free_variables(f).empty())
                throw PreconditionError("model search needs closed formulas: " + to_string(f));
            auto i = search.formulas.size();
            search.formulas.emplace_back(f, s, std::vector<std::string>{});
            vector<bool> rel(s.relations().size()), fun(s.functions().size()), con(s.constants().size());
            symbols_of(f, s, rel, fun, con);
            bool any = false;
            for (size_t j = 0; j < rel.size(); ++j)
                if (rel[j])
                    search.watchers_rel[j].push_back(i), any = true;
            for (size_t j = 0; j < fun.size(); ++j)
                if (fun[j])
                    search.watchers_fun[j].push_back(i), any = true;
            for (size_t j = 0; j < con.size(); ++j)
                if (con[j])
                    search.watchers_con[j].push_back(i), any = true;
            if (! any)
                unwatched.push_back(i);
        }

        for (size_t c = 0; c < s.constants().size(); ++c)
            search.cells.push_back(Cell{CellKind::Constant, int(c), 0, -1});
        vector<Cell> table_cells;
        for (size_t f = 0; f < s.functions().size(); ++f)
            for (size_t j = 0; j < table_size(size, s.functions()[f].arity); ++j) {
                auto t = tuple_at(size, s.functions()[f].arity, j);
                table_cells.push_back(Cell{CellKind::Function, int(f), j, *std::max_element(t.begin(), t.end())});
            }
        for (size_t r = 0; r < s.relations().size(); ++r)
            for (size_t j = 0; j < table_size(size, s.relations()[r].arity); ++j) {
                auto t = tuple_at(size, s.relations()[r].arity, j);
                table_cells.push_back(Cell{CellKind::Relation, int(r), j, *std::max_element(t.begin(), t.end())});
            }
        std::stable_sort(table_cells.begin(), table_cells.end(),
                [](const Cell & a, const Cell & b) { return a.max_argument < b.max_argument; });
        search.cells.insert(search.cells.end(), table_cells.begin(), table_cells.end());

        for (auto & f : s.functions())
            search.functions.emplace_back(table_size(size, f.arity), -1);
        for (auto & r : s.relations())
            search.relations.emplace_back(table_size(size, r.arity), -1);
        search.constants.assign(s.constants().size(), -1);

        vector<Truth> status(search.formulas.size(), Truth::Unknown);
        vector<size_t> all(search.formulas.size());
        for (size_t i = 0; i < all.size(); ++i)
            all[i] = i;
        if (search.consistent(all, status))
            search.run(0, -1, status);
        search.stats.complete = ! search.stopped;
        return search.stats;
    }

    auto find_models(SignatureRef sig, std::span<const FormulaPtr> sentences, int size,
            const ModelSearchOptions & options, ModelSearchStats * stats) -> vector<FiniteStructure>
    {
        bool dedup = options.up_to_iso && size <= 9;
        std::map<vector<int>, FiniteStructure> unique;
        vector<FiniteStructure> all;
        auto result_count = [&] { return dedup ? unique.size() : all.size(); };
        auto st = visit_models(sig, sentences, size, options, [&](const FiniteStructure & s) {
            if (dedup) {
                auto code = canonical_code(s);
                if (! unique.count(code))
                    unique.emplace(std::move(code), canonical_form(s));
            }
            else
                all.push_back(s);
            return options.limit == 0 || result_count() < options.limit;
        });
        if (stats)
            *stats = st;
        if (dedup)
            for (auto & [code, s] : unique)
                all.push_back(s);
        return all;
    }

    auto find_models_up_to(SignatureRef sig, std::span<const FormulaPtr> sentences, int max_size,
            const ModelSearchOptions & options) -> vector<FiniteStructure>
    {
        vector<FiniteStructure> result;
        for (int size = 1; size <= max_size; ++size) {
            auto opts = options;
            if (options.limit) {
                if (result.size() >= options.limit)
                    break;
                opts.limit = options.limit - result.size();
            }
            auto batch = find_models(sig, sentences, size, opts);
            result.insert(result.end(), batch.begin(), batch.end());
        }
        return result;
    }

    auto enumerate_structures(SignatureRef sig, int max_size, bool up_to_iso, size_t cap) -> vector<FiniteStructure>
    {
        if (max_size < 1)
            throw PreconditionError("enumerate_structures needs max_size >= 1");
        auto & s = *sig;
        vector<FiniteStructure> result;
        size_t produced = 0;
        for (int n = 1; n <= max_size; ++n) {
            // One odometer digit per table cell: constants, function cells, relation cells.
            vector<int> radix;
            for (size_t c = 0; c < s.constants().size(); ++c)
                radix.push_back(n);
            for (auto & f : s.functions())
                for (size_t j = 0; j < table_size(n, f.arity); ++j)
                    radix.push_back(n);
            for (auto & r : s.relations())
                for (size_t j = 0; j < table_size(n, r.arity); ++j)
                    radix.push_back(2);

            std::map<vector<int>, FiniteStructure> unique;
            vector<int> digits(radix.size(), 0);
            while (true) {
                if (++produced > cap)
                    throw BudgetExhausted("structure enumeration exceeded the cap of " + std::to_string(cap));
                size_t pos = 0;
                vector<int> constants(digits.begin(), digits.begin() + s.constants().size());
                pos = s.constants().size();
                vector<vector<int>> functions;
                for (auto & f : s.functions()) {
                    auto len = table_size(n, f.arity);
                    functions.emplace_back(digits.begin() + pos, digits.begin() + pos + len);
                    pos += len;
                }
                vector<vector<signed char>> relations;
                for (auto & r : s.relations()) {
                    auto len = table_size(n, r.arity);
                    relations.emplace_back(digits.begin() + pos, digits.begin() + pos + len);
                    pos += len;
                }
                auto st = FiniteStructure::with_default_names(sig, n, std::move(relations), std::move(functions),
                        std::move(constants));
                if (up_to_iso) {
                    auto code = canonical_code(st);
                    if (! unique.count(code))
                        unique.emplace(std::move(code), canonical_form(st));
                }
                else
                    result.push_back(std::move(st));

                size_t i = 0;
                while (i < digits.size() && ++digits[i] == radix[i])
                    digits[i++] = 0;
                if (i == digits.size())
                    break;
            }
            for (auto & [code, st] : unique)
                result.push_back(st);
        }
        return result;
    }
}
