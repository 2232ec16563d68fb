#pragma once

#include "mixflow/application.hpp"

#include <string>
#include <vector>

namespace mixflow {

enum class DiagnosticCode {
    DuplicateNodeId,
    UnknownNode,
    UnknownFfuClass,
    CycleDetected,
    NotPolar,
    RatioSumNotOne,
    BadRatio,
    EdgeLabelInvalid,
    BadDegree,
    VolumeNotDispensable,
    FvaExceedsMhc,
    ArchInvalid,
};

std::string to_string(DiagnosticCode code);

struct Diagnostic {
    DiagnosticCode code;
    std::string subject; // node id, "from->to" for edges, class name for arch
    std::string message;

    std::string str() const;
};

// Structural checks for the architecture alone: positive HTR, MHC/MVR sanity,
// chamber rules for 1:1 mixers.
std::vector<Diagnostic> validate_architecture(const ArchitectureSpec& arch);

// Full application validation against an architecture. Empty result means the
// graph is a polar DAG with edge labels, ratios, classes and preset volumes
// all consistent. One diagnostic per violation.
std::vector<Diagnostic> validate(const ApplicationGraph& app, const ArchitectureSpec& arch);

} // namespace mixflow
