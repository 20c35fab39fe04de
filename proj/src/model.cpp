#include "ocltrace/model.hpp"

#include <set>

#include "ocltrace/resolve.hpp"

namespace ocltrace {

std::string attrTypeText(const AttrType& t) {
    switch (t.kind) {
    case AttrType::Kind::Boolean: return "Boolean";
    case AttrType::Kind::Integer: return "Integer";
    case AttrType::Kind::String: return "String";
    case AttrType::Kind::Enum:
    case AttrType::Kind::Ref: return t.name;
    case AttrType::Kind::SetOf: return "Set(" + t.name + ")";
    }
    return "?";
}

const AttrDef* ClassDef::findAttr(const std::string& attrName) const {
    for (const auto& a : attrs)
        if (a.name == attrName)
            return &a;
    return nullptr;
}

const OpDef* ClassDef::findOp(const std::string& opName) const {
    for (const auto& o : ops)
        if (o.name == opName)
            return &o;
    return nullptr;
}

const EnumDef* Model::findEnum(const std::string& name) const {
    for (const auto& e : enums)
        if (e.name == name)
            return &e;
    return nullptr;
}

const ClassDef* Model::findClass(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name)
            return &c;
    return nullptr;
}

const EnumDef* Model::enumOfLiteral(const std::string& literal) const {
    for (const auto& e : enums)
        for (const auto& l : e.literals)
            if (l == literal)
                return &e;
    return nullptr;
}

namespace {

void addDiag(std::vector<Diag>& out, DiagCode code, SourcePos pos, std::string message) {
    out.push_back(Diag{code, pos, std::move(message), {}});
}

void checkTypeExists(const Model& m, const AttrType& t, SourcePos pos, const std::string& where,
                     std::vector<Diag>& out) {
    switch (t.kind) {
    case AttrType::Kind::Enum:
        if (!m.findEnum(t.name))
            addDiag(out, DiagCode::UnknownType, pos, "unknown type '" + t.name + "' in " + where);
        break;
    case AttrType::Kind::Ref:
    case AttrType::Kind::SetOf:
        if (!m.findClass(t.name))
            addDiag(out, DiagCode::UnknownType, pos, "unknown type '" + t.name + "' in " + where);
        break;
    default:
        break;
    }
}

// Return must end its action list: anything after it is unreachable.
void checkReturnPlacement(const ActionList& actions, std::vector<Diag>& out) {
    for (size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i];
        if (std::holds_alternative<ReturnAction>(a.node) && i + 1 < actions.size()) {
            addDiag(out, DiagCode::TypeMismatch, actions[i + 1].pos,
                    "unreachable action after return");
        }
        if (const auto* ifa = std::get_if<IfAction>(&a.node)) {
            checkReturnPlacement(ifa->thenBranch, out);
            checkReturnPlacement(ifa->elseBranch, out);
        }
    }
}

} // namespace

std::vector<Diag> validate(const Model& model) {
    std::vector<Diag> out;

    // Top-level names (enums, classes, generator labels) pairwise distinct.
    std::set<std::string> topNames;
    auto checkTop = [&](const std::string& name, SourcePos pos, const char* what) {
        if (!topNames.insert(name).second)
            addDiag(out, DiagCode::DuplicateName, pos,
                    std::string("duplicate ") + what + " name '" + name + "'");
    };
    for (const auto& e : model.enums)
        checkTop(e.name, e.pos, "enum");
    for (const auto& c : model.classes)
        checkTop(c.name, c.pos, "class");
    for (const auto& g : model.generators) {
        if (const auto* mg = std::get_if<MsgGenDef>(&g))
            checkTop(mg->label, mg->pos, "generator");
        else
            checkTop(std::get<ObjGenDef>(g).label, std::get<ObjGenDef>(g).pos, "generator");
    }

    // Enum literals: nonempty, distinct, and unique across enums so bare
    // literals resolve unambiguously.
    std::set<std::string> allLiterals;
    for (const auto& e : model.enums) {
        if (e.literals.empty())
            addDiag(out, DiagCode::TypeMismatch, e.pos, "enum '" + e.name + "' has no literals");
        std::set<std::string> seen;
        for (const auto& l : e.literals) {
            if (!seen.insert(l).second)
                addDiag(out, DiagCode::DuplicateName, e.pos,
                        "duplicate literal '" + l + "' in enum '" + e.name + "'");
            else if (!allLiterals.insert(l).second)
                addDiag(out, DiagCode::DuplicateName, e.pos,
                        "literal '" + l + "' declared by more than one enum");
        }
    }

    for (const auto& c : model.classes) {
        std::set<std::string> attrNames;
        for (const auto& a : c.attrs) {
            if (!attrNames.insert(a.name).second)
                addDiag(out, DiagCode::DuplicateName, a.pos,
                        "duplicate attribute '" + a.name + "' in class '" + c.name + "'");
            checkTypeExists(model, a.type, a.pos, "attribute '" + a.name + "'", out);
        }
        std::set<std::string> invNames;
        for (const auto& inv : c.invariants)
            if (!invNames.insert(inv.name).second)
                addDiag(out, DiagCode::DuplicateName, inv.pos,
                        "duplicate invariant '" + inv.name + "'");
        std::set<std::string> opNames;
        for (const auto& op : c.ops) {
            if (!opNames.insert(op.name).second)
                addDiag(out, DiagCode::DuplicateName, op.pos,
                        "duplicate operation '" + op.name + "' in class '" + c.name + "'");
            std::set<std::string> paramNames;
            for (const auto& p : op.params) {
                if (!paramNames.insert(p.name).second)
                    addDiag(out, DiagCode::DuplicateName, op.pos,
                            "duplicate parameter '" + p.name + "' of operation '" + op.name + "'");
                checkTypeExists(model, p.type, op.pos, "parameter '" + p.name + "'", out);
            }
            std::set<std::string> condNames;
            for (const auto& cond : op.pres)
                if (!condNames.insert(cond.name).second)
                    addDiag(out, DiagCode::DuplicateName, cond.pos,
                            "duplicate precondition '" + cond.name + "'");
            condNames.clear();
            for (const auto& cond : op.posts)
                if (!condNames.insert(cond.name).second)
                    addDiag(out, DiagCode::DuplicateName, cond.pos,
                            "duplicate postcondition '" + cond.name + "'");
            checkReturnPlacement(op.body, out);
        }
    }

    for (const auto& g : model.generators) {
        if (const auto* mg = std::get_if<MsgGenDef>(&g)) {
            std::set<std::string> varNames;
            const ClassDef* targetClass = nullptr;
            for (const auto& [vname, cname] : mg->vars) {
                if (!varNames.insert(vname).second)
                    addDiag(out, DiagCode::DuplicateName, mg->pos,
                            "duplicate generator variable '" + vname + "'");
                if (!model.findClass(cname))
                    addDiag(out, DiagCode::UnknownClass, mg->pos,
                            "unknown class '" + cname + "' in generator '" + mg->label + "'");
                if (vname == mg->emitTarget)
                    targetClass = model.findClass(cname);
            }
            if (!varNames.count(mg->emitTarget)) {
                addDiag(out, DiagCode::UnboundVariable, mg->pos,
                        "emit target '" + mg->emitTarget + "' is not a generator variable");
            }
            for (const auto& arg : mg->emitArgs)
                if (!varNames.count(arg))
                    addDiag(out, DiagCode::UnboundVariable, mg->pos,
                            "emit argument '" + arg + "' is not a generator variable");
            if (targetClass) {
                const OpDef* op = targetClass->findOp(mg->emitOp);
                if (!op)
                    addDiag(out, DiagCode::UnknownOperation, mg->pos,
                            "class '" + targetClass->name + "' has no operation '" + mg->emitOp +
                                "'");
                else if (op->params.size() != mg->emitArgs.size())
                    addDiag(out, DiagCode::ArityMismatch, mg->pos,
                            "generator '" + mg->label + "' emits " +
                                std::to_string(mg->emitArgs.size()) + " argument(s), operation '" +
                                mg->emitOp + "' takes " + std::to_string(op->params.size()));
            }
        } else {
            const auto& og = std::get<ObjGenDef>(g);
            const ClassDef* cls = model.findClass(og.className);
            if (!cls) {
                addDiag(out, DiagCode::UnknownClass, og.pos,
                        "unknown class '" + og.className + "' in generator '" + og.label + "'");
                continue;
            }
            std::set<std::string> inited;
            for (const auto& [attr, expr] : og.initializers) {
                (void)expr;
                if (!cls->findAttr(attr))
                    addDiag(out, DiagCode::UnknownAttribute, og.pos,
                            "class '" + og.className + "' has no attribute '" + attr + "'");
                if (!inited.insert(attr).second)
                    addDiag(out, DiagCode::DuplicateName, og.pos,
                            "attribute '" + attr + "' initialized twice in generator '" + og.label +
                                "'");
            }
            for (const auto& a : cls->attrs)
                if (!inited.count(a.name))
                    addDiag(out, DiagCode::UninitializedGeneratorAttribute, og.pos,
                            "generator '" + og.label + "' does not initialize attribute '" +
                                a.name + "'");
        }
    }

    return out;
}

ExprPtr aggregateInvariant(const Model& model) {
    ExprPtr acc;
    for (const auto& c : model.classes) {
        for (const auto& inv : c.invariants) {
            ExprPtr wrapped = mkContextInv(c.name, inv.body, inv.pos);
            acc = acc ? mkBinary(BinOp::And, acc, wrapped) : wrapped;
        }
    }
    return acc ? acc : mkBool(true);
}

} // namespace ocltrace
