#include "ocltrace/state.hpp"

#include <algorithm>
#include <sstream>

namespace ocltrace {

const char* violationKindName(ViolationKind k) {
    switch (k) {
    case ViolationKind::PreViolation: return "PreViolation";
    case ViolationKind::PostViolation: return "PostViolation";
    case ViolationKind::InvViolation: return "InvViolation";
    }
    return "?";
}

std::string renderPendingCall(const PendingCall& call) {
    std::string out = call.target.name + "." + call.opName + "(";
    for (size_t i = 0; i < call.args.size(); ++i) {
        if (i)
            out += ", ";
        out += renderValue(call.args[i]);
    }
    out += ")";
    return out;
}

std::string renderPendingCreate(const PendingCreate& create) {
    std::string out = "new(" + create.oid.name + ", " + create.className;
    for (const auto& [attr, value] : create.inits)
        out += ", " + attr + " : " + renderValue(value);
    out += ")";
    return out;
}

std::string renderCompletion(const Completion& completion) {
    return "resume(" + completion.opName + ", " + renderValue(completion.returnValue) + ")";
}

std::string renderErrorRecord(const ErrorRecord& error) {
    std::string out = "error(\"" + error.message + "\"";
    if (error.opName)
        out += ", " + *error.opName;
    out += ", " + render(error.failedExpr) + ")";
    return out;
}

std::string renderObject(const ObjectInstance& obj, const Model& model) {
    std::string out = "< " + obj.oid.name + " : " + obj.className + " | ";
    const ClassDef* cls = model.findClass(obj.className);
    bool first = true;
    auto append = [&](const std::string& name, const Value& v) {
        if (!first)
            out += ", ";
        first = false;
        out += name + " : " + renderValue(v);
    };
    if (cls) {
        for (const auto& a : cls->attrs) {
            auto it = obj.attrs.find(a.name);
            if (it != obj.attrs.end())
                append(a.name, it->second);
        }
    } else {
        for (const auto& [name, v] : obj.attrs)
            append(name, v);
    }
    out += " >";
    return out;
}

namespace {

// Object line with attributes sorted by name, for order-insensitive keys.
void keyObject(std::string& out, const ObjectInstance& obj) {
    out += "< ";
    out += obj.oid.name;
    out += " : ";
    out += obj.className;
    out += " |";
    for (const auto& [name, v] : obj.attrs) { // std::map: sorted by name
        out += " ";
        out += name;
        out += ":";
        out += renderValue(v);
    }
    out += " >";
}

void keyObjects(std::string& out, const ObjectMap& objects) {
    for (const auto& [oid, obj] : objects) {
        keyObject(out, obj);
        out += "\n";
    }
}

std::vector<std::string> sortedTexts(std::vector<std::string> texts) {
    std::sort(texts.begin(), texts.end());
    return texts;
}

} // namespace

std::string canonicalKey(const Configuration& config) {
    std::string out;
    out += "objects\n";
    keyObjects(out, config.objects);

    out += "pending\n";
    std::vector<std::string> texts;
    for (const auto& p : config.pending)
        texts.push_back(renderPendingCall(p));
    for (const auto& t : sortedTexts(std::move(texts)))
        out += t + "\n";

    out += "creates\n";
    texts.clear();
    for (const auto& c : config.pendingCreates)
        texts.push_back(renderPendingCreate(c));
    for (const auto& t : sortedTexts(std::move(texts)))
        out += t + "\n";

    out += "frame\n";
    if (config.frame) {
        out += config.frame->opName + " self=" + config.frame->selfOid.name;
        for (const auto& [name, v] : config.frame->env)
            out += " " + name + "=" + renderValue(v);
        out += "\n";
        keyObjects(out, config.frame->preSnapshot);
    }

    out += "completions\n";
    texts.clear();
    for (const auto& c : config.completions)
        texts.push_back(renderCompletion(c));
    for (const auto& t : sortedTexts(std::move(texts)))
        out += t + "\n";

    if (config.log) {
        // Entry order is semantic: the log is a sequence, not a multiset.
        out += config.log->held ? "log held\n" : "log\n";
        for (const auto& entry : config.log->entries)
            out += entry + "\n";
    }
    if (config.budget)
        out += "budget " + std::to_string(config.budget->remaining) + "\n";
    if (config.error) {
        out += "error ";
        out += violationKindName(config.error->kind);
        out += " ";
        out += renderErrorRecord(*config.error);
        out += "\n";
    }
    return out;
}

ObjectMap snapshotObjects(const Configuration& config) {
    return config.objects;
}

Configuration abstractLog(Configuration config) {
    if (config.log)
        config.log->entries.clear();
    return config;
}

std::string renderConfiguration(const Configuration& config, const Model& model) {
    std::ostringstream out;
    for (const auto& [oid, obj] : config.objects)
        out << renderObject(obj, model) << "\n";
    std::vector<std::string> texts;
    for (const auto& p : config.pending)
        texts.push_back(renderPendingCall(p));
    for (const auto& t : sortedTexts(std::move(texts)))
        out << t << "\n";
    texts.clear();
    for (const auto& c : config.pendingCreates)
        texts.push_back(renderPendingCreate(c));
    for (const auto& t : sortedTexts(std::move(texts)))
        out << t << "\n";
    if (config.frame) {
        out << "frame " << config.frame->opName << "(self : " << config.frame->selfOid.name;
        for (const auto& [name, v] : config.frame->env)
            out << ", " << name << " : " << renderValue(v);
        out << ")\n";
    }
    texts.clear();
    for (const auto& c : config.completions)
        texts.push_back(renderCompletion(c));
    for (const auto& t : sortedTexts(std::move(texts)))
        out << t << "\n";
    if (config.budget)
        out << "counter(" << config.budget->remaining << ")\n";
    if (config.log) {
        std::string entries;
        for (size_t i = 0; i < config.log->entries.size(); ++i) {
            if (i)
                entries += " ; ";
            entries += config.log->entries[i];
        }
        if (entries.empty())
            entries = "nil";
        if (config.log->held)
            out << "hold(messages(" << entries << "))\n";
        else
            out << "messages(" << entries << ")\n";
    }
    if (config.error)
        out << renderErrorRecord(*config.error) << "\n";
    return out.str();
}

} // namespace ocltrace
