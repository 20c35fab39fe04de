#pragma once

#include <string>
#include <vector>

namespace ocltrace {

/// 1-based position in a source text; {0,0} marks "no position".
struct SourcePos {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    bool operator==(const SourcePos&) const = default;
};

enum class DiagCode {
    ParseError,
    UnknownAttribute,
    UnknownEnumLiteral,
    UnboundVariable,
    AtPreOutsidePostcondition,
    UnknownType,
    UnknownClass,
    UnknownOperation,
    DuplicateName,
    ArityMismatch,
    UninitializedGeneratorAttribute,
    MissingAttribute,
    TypeMismatch,
    DuplicateOid,
};

const char* diagCodeName(DiagCode code);

struct Diag {
    DiagCode code = DiagCode::ParseError;
    SourcePos pos;
    std::string message;
    // Nonempty only for ParseError: the token classes that would have
    // allowed the parse to continue.
    std::vector<std::string> expected;
};

std::string formatDiag(const Diag& d);
std::string formatDiags(const std::vector<Diag>& ds);

} // namespace ocltrace
