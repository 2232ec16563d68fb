#include "mixflow/validate.hpp"

#include <set>

namespace mixflow {

std::string to_string(DiagnosticCode code) {
    switch (code) {
        case DiagnosticCode::DuplicateNodeId: return "DuplicateNodeId";
        case DiagnosticCode::UnknownNode: return "UnknownNode";
        case DiagnosticCode::UnknownFfuClass: return "UnknownFfuClass";
        case DiagnosticCode::CycleDetected: return "CycleDetected";
        case DiagnosticCode::NotPolar: return "NotPolar";
        case DiagnosticCode::RatioSumNotOne: return "RatioSumNotOne";
        case DiagnosticCode::BadRatio: return "BadRatio";
        case DiagnosticCode::EdgeLabelInvalid: return "EdgeLabelInvalid";
        case DiagnosticCode::BadDegree: return "BadDegree";
        case DiagnosticCode::VolumeNotDispensable: return "VolumeNotDispensable";
        case DiagnosticCode::FvaExceedsMhc: return "FvaExceedsMhc";
        case DiagnosticCode::ArchInvalid: return "ArchInvalid";
    }
    return "Unknown";
}

std::string Diagnostic::str() const {
    return to_string(code) + " [" + subject + "] " + message;
}

std::vector<Diagnostic> validate_architecture(const ArchitectureSpec& arch) {
    std::vector<Diagnostic> out;
    auto emit = [&](const std::string& subject, const std::string& msg) {
        out.push_back({DiagnosticCode::ArchInvalid, subject, msg});
    };

    if (arch.htr.amount() <= Rational(0)) {
        emit("htr", "HTR must be positive");
        return out; // every multiple-of check below would be meaningless
    }

    std::set<std::string> seen;
    for (const auto& cls : arch.ffu_classes) {
        if (!seen.insert(cls.name).second) {
            emit(cls.name, "duplicate FFU class name");
            continue;
        }
        if (!cls.mhc.is_dispensable(arch.htr) || cls.mhc.is_zero()) {
            emit(cls.name, "MHC must be a positive multiple of HTR");
        }
        if (cls.mvr > cls.mhc) {
            emit(cls.name, "MVR exceeds MHC");
        }
        if (cls.chamber_count < 1) {
            emit(cls.name, "chamber count must be positive");
        }
        if (arch.mixer_technology == MixerTechnology::Fixed1to1 && cls.chamber_count == 2) {
            // each chamber holds MHC/2, which must itself be meterable
            Volume chamber = cls.mhc.scaled(Rational(1, 2));
            if (!chamber.is_dispensable(arch.htr)) {
                emit(cls.name, "chamber volume (MHC/2) is not a multiple of HTR");
            }
        }
    }
    return out;
}

std::vector<Diagnostic> validate(const ApplicationGraph& app, const ArchitectureSpec& arch) {
    std::vector<Diagnostic> out = validate_architecture(arch);
    auto emit = [&](DiagnosticCode code, const std::string& subject, const std::string& msg) {
        out.push_back({code, subject, msg});
    };

    std::set<std::string> ids;
    for (const auto& n : app.nodes) {
        if (!ids.insert(n.id).second) {
            emit(DiagnosticCode::DuplicateNodeId, n.id, "node id declared twice");
        }
        if (!arch.find_class(n.ffu_class)) {
            emit(DiagnosticCode::UnknownFfuClass, n.id,
                 "references unknown FFU class '" + n.ffu_class + "'");
        }
    }

    bool edges_ok = true;
    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const auto& e : app.edges) {
        std::string subject = e.from + "->" + e.to;
        if (!ids.count(e.from) || !ids.count(e.to)) {
            emit(DiagnosticCode::UnknownNode, subject, "edge references unknown node");
            edges_ok = false;
            continue;
        }
        if (!e.lof && !seen_edges.insert({e.from, e.to}).second) {
            emit(DiagnosticCode::BadDegree, subject, "parallel edges are not supported");
            edges_ok = false;
            continue;
        }
        if (e.from == e.to) {
            emit(DiagnosticCode::CycleDetected, subject, "self-loop edge");
            edges_ok = false;
            continue;
        }
        const OpNode& dst = app.require_node(e.to);
        if (e.lof) {
            // reassigned leftover parcels carry their volume, never a ratio
            if (e.ratio || !e.required_volume) {
                emit(DiagnosticCode::EdgeLabelInvalid, subject,
                     "leftover edges carry exactly a transferred volume");
            }
            continue;
        }
        bool into_mix = dst.kind == OpKind::Mix;
        if (into_mix) {
            if (!e.ratio || e.required_volume) {
                emit(DiagnosticCode::EdgeLabelInvalid, subject,
                     "edges into mix nodes carry exactly a ratio");
            } else if (*e.ratio <= Rational(0) || *e.ratio >= Rational(1)) {
                emit(DiagnosticCode::BadRatio, subject, "mixing share must lie in (0,1)");
            }
        } else {
            if (e.ratio || !e.required_volume) {
                emit(DiagnosticCode::EdgeLabelInvalid, subject,
                     "edges into non-mix nodes carry exactly a required volume");
            } else if (!e.required_volume->is_zero() &&
                       !e.required_volume->is_dispensable(arch.htr)) {
                emit(DiagnosticCode::VolumeNotDispensable, subject,
                     "required volume is not a multiple of HTR");
            }
        }
        if (app.require_node(e.from).kind == OpKind::Output) {
            emit(DiagnosticCode::BadDegree, subject, "output nodes cannot have successors");
        }
        if (dst.kind == OpKind::Input) {
            emit(DiagnosticCode::BadDegree, subject, "input nodes cannot have predecessors");
        }
    }

    if (!edges_ok) return out;

    bool acyclic = true;
    try {
        topo_order(app);
    } catch (const CycleError&) {
        emit(DiagnosticCode::CycleDetected, "graph", "application graph contains a cycle");
        acyclic = false;
    }

    for (const auto& n : app.nodes) {
        auto in = app.in_edges(n.id);
        auto outg = app.out_edges(n.id);

        switch (n.kind) {
            case OpKind::Input:
                if (outg.empty()) emit(DiagnosticCode::BadDegree, n.id, "input feeds nothing");
                break;
            case OpKind::Output:
                if (in.empty()) emit(DiagnosticCode::BadDegree, n.id, "output receives nothing");
                break;
            case OpKind::Mix: {
                std::size_t declared = 0;
                Rational sum;
                bool have_all = true;
                for (const auto* e : in) {
                    if (e->lof) continue;
                    ++declared;
                    if (e->ratio) sum += *e->ratio;
                    else have_all = false;
                }
                if (declared != 2) {
                    emit(DiagnosticCode::BadDegree, n.id, "mix nodes take exactly two inputs");
                    break;
                }
                if (have_all && sum != Rational(1)) {
                    emit(DiagnosticCode::RatioSumNotOne, n.id,
                         "incoming mixing shares sum to " + sum.str());
                }
                break;
            }
            case OpKind::Detect:
            case OpKind::Generic: {
                std::size_t declared = 0;
                for (const auto* e : in) {
                    if (!e->lof) ++declared;
                }
                if (declared != 1) {
                    emit(DiagnosticCode::BadDegree, n.id, "pass-through nodes take one input");
                }
                break;
            }
        }

        if (n.fva) {
            Rational sum;
            for (const auto& [from, vol] : *n.fva) {
                if (!vol.is_dispensable(arch.htr)) {
                    emit(DiagnosticCode::VolumeNotDispensable, n.id,
                         "preset FVA on edge from '" + from + "' is not an HTR multiple");
                }
                sum += vol.amount();
            }
            if (const FfuClass* cls = arch.find_class(n.ffu_class)) {
                Rational per_instance = sum / Rational(n.replication_factor);
                if (per_instance > cls->mhc.amount()) {
                    emit(DiagnosticCode::FvaExceedsMhc, n.id,
                         "per-instance FVA total exceeds MHC");
                }
            }
        }
    }

    if (acyclic && !app.nodes.empty()) {
        // polarity: every non-input reachable from an input, every non-output
        // reaches an output
        std::set<std::string> from_inputs, to_outputs;
        for (const auto& n : app.nodes) {
            if (n.kind == OpKind::Input) from_inputs.insert(n.id);
            if (n.kind == OpKind::Output) to_outputs.insert(n.id);
        }
        // one pass per direction over a topological order settles reachability
        auto order = topo_order(app);
        for (const auto& id : order) {
            if (from_inputs.count(id)) {
                for (const auto* e : app.out_edges(id)) from_inputs.insert(e->to);
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            if (to_outputs.count(*it)) {
                for (const auto* e : app.in_edges(*it)) to_outputs.insert(e->from);
            }
        }
        for (const auto& n : app.nodes) {
            if (n.kind != OpKind::Input && !from_inputs.count(n.id)) {
                emit(DiagnosticCode::NotPolar, n.id, "not reachable from any input");
            }
            if (n.kind != OpKind::Output && !to_outputs.count(n.id)) {
                emit(DiagnosticCode::NotPolar, n.id, "no path to any output");
            }
        }
    }

    return out;
}

} // namespace mixflow
