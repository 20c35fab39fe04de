#include "ocltrace/search.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "ocltrace/eval.hpp"

namespace ocltrace {

namespace {

bool errorMatches(const ErrorRecord& error, ErrorFilter filter) {
    switch (filter) {
    case ErrorFilter::Pre: return error.kind == ViolationKind::PreViolation;
    case ErrorFilter::Post: return error.kind == ViolationKind::PostViolation;
    case ErrorFilter::Inv: return error.kind == ViolationKind::InvViolation;
    case ErrorFilter::Any: return true;
    }
    return false;
}

// Goal expressions match non-error states only; error records are matched
// through the explicit error target.
bool matchesTarget(const Configuration& config, const SearchTarget& target) {
    if (const auto* goal = std::get_if<ExprPtr>(&target)) {
        if (config.error)
            return false;
        EvalContext ctx;
        const bool* b = eval(*goal, config, ctx).asBool();
        return b && *b;
    }
    if (!config.error)
        return false;
    return errorMatches(*config.error, std::get<ErrorFilter>(target));
}

struct Node {
    Configuration config;
    std::uint64_t depth = 0;
    std::int64_t parent = -1;
    std::string label; // transition label from the parent
};

} // namespace

SearchOutcome bfsSearch(const Model& model, const Configuration& init, const SearchOptions& opts,
                        const StateVisitor& onState) {
    SearchOutcome outcome;
    EngineOptions engineOpts{opts.genMessages, opts.genObjects};

    auto keyOf = [&](const Configuration& c) {
        return opts.abstractLog ? canonicalKey(abstractLog(c)) : canonicalKey(c);
    };

    std::vector<Node> nodes;
    std::unordered_set<std::string> visited;
    std::deque<std::size_t> frontier;

    auto solutionCapReached = [&] {
        return opts.maxSolutions && outcome.solutions.size() >= *opts.maxSolutions;
    };

    auto discover = [&](Configuration config, std::uint64_t depth, std::int64_t parent,
                        std::string label) -> bool {
        if (!visited.insert(keyOf(config)).second)
            return false;
        std::size_t id = nodes.size();
        nodes.push_back(Node{std::move(config), depth, parent, std::move(label)});
        frontier.push_back(id);
        const Node& node = nodes.back();
        if (onState)
            onState(node.config, depth);
        if (matchesTarget(node.config, opts.target)) {
            SearchSolution sol;
            sol.index = outcome.solutions.size() + 1;
            sol.stateId = id;
            sol.config = node.config;
            sol.depth = depth;
            for (std::int64_t i = (std::int64_t)id; nodes[(size_t)i].parent >= 0;
                 i = nodes[(size_t)i].parent)
                sol.labelPath.push_back(nodes[(size_t)i].label);
            std::reverse(sol.labelPath.begin(), sol.labelPath.end());
            if (node.config.log)
                sol.messageLog = node.config.log->entries;
            outcome.solutions.push_back(std::move(sol));
        }
        return true;
    };

    bool cutoff = false; // a bound suppressed at least one expansion
    discover(init, 0, -1, "");

    while (!frontier.empty() && !solutionCapReached()) {
        std::size_t id = frontier.front();
        frontier.pop_front();
        // Copy depth: nodes may reallocate while discovering successors.
        std::uint64_t depth = nodes[id].depth;
        if (nodes[id].config.error)
            continue; // terminal
        std::vector<Transition> transitions =
            enabledTransitions(model, nodes[id].config, engineOpts);
        if (transitions.empty())
            continue;
        if (opts.maxDepth && depth >= *opts.maxDepth) {
            cutoff = true;
            continue;
        }
        for (size_t i = 0; i < transitions.size(); ++i) {
            discover(std::move(transitions[i].successor), depth + 1, (std::int64_t)id,
                     std::move(transitions[i].label));
            if (solutionCapReached()) {
                if (i + 1 < transitions.size())
                    cutoff = true; // siblings left undiscovered
                break;
            }
        }
    }

    outcome.statesExplored = nodes.size();
    outcome.exhausted = frontier.empty() && !cutoff;
    return outcome;
}

std::string formatSolutions(const Model& model, const SearchOutcome& outcome,
                            const FormatOptions& fmt) {
    std::ostringstream out;
    if (outcome.solutions.empty() && outcome.exhausted) {
        out << "No solution.\n";
        return out.str();
    }
    for (const auto& sol : outcome.solutions) {
        out << "Solution " << sol.index << " (state " << sol.stateId << ")\n";
        out << renderConfiguration(sol.config, model);
        out << "labels -->";
        for (const auto& label : sol.labelPath)
            out << " " << label;
        out << "\n";
        out << "messages -->";
        if (sol.messageLog.empty()) {
            out << " nil";
        } else {
            for (size_t i = 0; i < sol.messageLog.size(); ++i)
                out << (i ? " ; " : " ") << sol.messageLog[i];
        }
        out << "\n";
        if (fmt.showPath) {
            out << "path labels (solution " << sol.index << ")\n";
            for (const auto& label : sol.labelPath)
                out << label << "\n";
        }
        out << "\n";
    }
    out << (outcome.exhausted ? "No more solutions.\n" : "Bound reached.\n");
    return out.str();
}

} // namespace ocltrace
