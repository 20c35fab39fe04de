#include "ocltrace/diag.hpp"

#include <sstream>

namespace ocltrace {

const char* diagCodeName(DiagCode code) {
    switch (code) {
    case DiagCode::ParseError: return "ParseError";
    case DiagCode::UnknownAttribute: return "UnknownAttribute";
    case DiagCode::UnknownEnumLiteral: return "UnknownEnumLiteral";
    case DiagCode::UnboundVariable: return "UnboundVariable";
    case DiagCode::AtPreOutsidePostcondition: return "AtPreOutsidePostcondition";
    case DiagCode::UnknownType: return "UnknownType";
    case DiagCode::UnknownClass: return "UnknownClass";
    case DiagCode::UnknownOperation: return "UnknownOperation";
    case DiagCode::DuplicateName: return "DuplicateName";
    case DiagCode::ArityMismatch: return "ArityMismatch";
    case DiagCode::UninitializedGeneratorAttribute: return "UninitializedGeneratorAttribute";
    case DiagCode::MissingAttribute: return "MissingAttribute";
    case DiagCode::TypeMismatch: return "TypeMismatch";
    case DiagCode::DuplicateOid: return "DuplicateOid";
    }
    return "UnknownDiag";
}

std::string formatDiag(const Diag& d) {
    std::ostringstream out;
    if (d.pos.known())
        out << d.pos.line << ":" << d.pos.column << ": ";
    out << diagCodeName(d.code) << ": " << d.message;
    if (!d.expected.empty()) {
        out << " (expected ";
        for (size_t i = 0; i < d.expected.size(); ++i) {
            if (i)
                out << ", ";
            out << d.expected[i];
        }
        out << ")";
    }
    return out.str();
}

std::string formatDiags(const std::vector<Diag>& ds) {
    std::string out;
    for (const auto& d : ds) {
        out += formatDiag(d);
        out += "\n";
    }
    return out;
}

} // namespace ocltrace
