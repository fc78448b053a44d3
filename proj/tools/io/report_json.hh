#pragma once

#include <posmt/amalgamation.hh>
#include <posmt/morphism.hh>
#include <posmt/theory.hh>
#include <posmt/workspace.hh>

#include <json.hpp>

#include <string>
#include <vector>

namespace posmt::io
{
    using Json = nlohmann::ordered_json;

    inline constexpr const char * schema = "posmt-report/1";

    auto to_json(const Signature & s) -> Json;
    auto signature_from_json(const Json & j) -> SignatureRef;

    /// Tables keyed by symbol, with elements by name. Readable back with
    /// structure_from_json.
    auto to_json(const FiniteStructure & s) -> Json;
    auto structure_from_json(const Json & j) -> FiniteStructure;

    /// Bounds only; the worker count never reaches a report.
    /// Bounds only; the worker count never reaches a report.
    auto to_json(const Budget & b) -> Json;
    auto budget_from_json(const Json & j) -> Budget;

    /// The theory as workspace text, plus its sentences one per entry.
    auto to_json(const Theory & t) -> Json;
    auto theory_from_json(const Json & j) -> Theory;

    auto to_json(const Verdict & v) -> Json;
    auto to_json(const KindCertificate & c, const Morphism & m) -> Json;
    auto to_json(const JCReport & r) -> Json;
    auto to_json(const DiagramSet & d) -> Json;
    auto to_json(const AmalgamationProblem & p) -> Json;
    auto problem_from_json(const Json & j) -> AmalgamationProblem;
    auto to_json(const AmalgamationResult & r, const AmalgamationProblem & p) -> Json;
    auto solution_from_json(const Json & j, const AmalgamationProblem & p) -> AmalgamationSolution;
    auto to_json(const BasisReport & r) -> Json;
    auto to_json(const TheoremReport & r) -> Json;
    auto to_json(const LoadReport & r) -> Json;

    /// Header shared by every report: schema and command.
    auto report(const std::string & command) -> Json;

    struct RecheckResult
    {
        std::size_t checked = 0;
        std::vector<std::string> failures;
    };

    /// Re-verifies the certificates inside a report written by the CLI: pc
    /// counterexamples, classifications, amalgamation witnesses and theorem
    /// instances. Verdicts without checkable evidence are counted as skipped.
    auto recheck(const Json & report) -> RecheckResult;
}
