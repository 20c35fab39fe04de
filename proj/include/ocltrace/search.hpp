#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ocltrace/engine.hpp"
#include "ocltrace/model.hpp"
#include "ocltrace/state.hpp"

namespace ocltrace {

enum class ErrorFilter { Pre, Post, Inv, Any };

/// Search target: a closed goal expression matched on non-error states, or
/// an error-record pattern matched on terminal error states.
using SearchTarget = std::variant<ExprPtr, ErrorFilter>;

struct SearchOptions {
    std::optional<std::uint64_t> maxSolutions;
    std::optional<std::uint64_t> maxDepth;
    bool genMessages = false;
    bool genObjects = false;
    /// Deduplicate on the log-erased key; reported solutions keep their
    /// concrete log so the witness message sequence is still printed.
    bool abstractLog = false;
    SearchTarget target;
};

struct SearchSolution {
    std::uint64_t index = 0;   // 1-based report order
    std::uint64_t stateId = 0; // discovery order, init = 0
    Configuration config;
    std::uint64_t depth = 0;
    std::vector<std::string> labelPath; // BFS-tree (shortest) path from init
    std::vector<std::string> messageLog;
};

struct SearchOutcome {
    std::vector<SearchSolution> solutions;
    /// True iff the whole reachable space was covered: the frontier emptied
    /// with no expansion suppressed by a bound.
    bool exhausted = false;
    std::uint64_t statesExplored = 0; // distinct canonical states discovered
};

using StateVisitor = std::function<void(const Configuration&, std::uint64_t depth)>;

/// Bounded breadth-first reachability with duplicate detection on the
/// canonical key. Matching states are reported in discovery order and are
/// still expanded (error states are terminal). Deterministic: identical
/// inputs yield identical outcomes.
SearchOutcome bfsSearch(const Model& model, const Configuration& init, const SearchOptions& opts,
                        const StateVisitor& onState = {});

struct FormatOptions {
    bool showPath = false; // append a one-label-per-line path listing
};

/// One block per solution: `Solution k (state n)`, the rendered
/// configuration, a `labels -->` line and a `messages -->` line. Final line:
/// `No solution.` / `No more solutions.` / `Bound reached.`.
std::string formatSolutions(const Model& model, const SearchOutcome& outcome,
                            const FormatOptions& fmt = {});

} // namespace ocltrace
