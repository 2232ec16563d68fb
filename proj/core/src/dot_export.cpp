#include "mixflow/dot_export.hpp"

#include "mixflow/json_io.hpp"

#include <sstream>

namespace mixflow {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string node_shape(OpKind kind) {
    switch (kind) {
        case OpKind::Input: return "invhouse";
        case OpKind::Mix: return "box";
        case OpKind::Detect: return "diamond";
        case OpKind::Generic: return "ellipse";
        case OpKind::Output: return "house";
    }
    return "ellipse";
}

} // namespace

std::string to_dot(const ApplicationGraph& app) {
    std::ostringstream os;
    os << "digraph application {\n";
    os << "  rankdir=TB;\n";
    for (const auto& n : app.nodes) {
        std::ostringstream label;
        label << n.id;
        if (n.kind == OpKind::Mix) {
            auto in = app.in_edges(n.id);
            std::string ratio;
            for (const auto* e : in) {
                if (!e->ratio) continue;
                if (!ratio.empty()) ratio += " : ";
                ratio += e->ratio->str();
            }
            if (!ratio.empty()) label << "\\nratio " << ratio;
        }
        if (n.fva) {
            Rational total;
            for (const auto& [_, v] : *n.fva) total += v.amount();
            label << "\\nfva " << volume_to_string(Volume(total));
            if (n.replication_factor > 1) label << " (x" << n.replication_factor << ")";
        }
        os << "  " << quote(n.id) << " [shape=" << node_shape(n.kind) << ", label="
           << quote(label.str()) << "];\n";
    }
    for (const auto& e : app.edges) {
        os << "  " << quote(e.from) << " -> " << quote(e.to);
        std::string label;
        if (e.ratio) label = e.ratio->str();
        if (e.required_volume) label = volume_to_string(*e.required_volume);
        os << " [";
        if (!label.empty()) os << "label=" << quote(label);
        if (e.lof) {
            if (!label.empty()) os << ", ";
            os << "style=dashed";
        }
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace mixflow
