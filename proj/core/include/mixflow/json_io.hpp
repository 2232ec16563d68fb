#pragma once

#include "mixflow/application.hpp"

#include <string>

namespace mixflow {

// Volumes render as exact decimal strings when the denominator allows it
// ("2.5"), and fall back to "p/q" otherwise; ratios always render as "p/q".
std::string volume_to_string(const Volume& v);

std::string serialize_architecture(const ArchitectureSpec& arch, int indent = 2);
std::string serialize_application(const ApplicationGraph& app, int indent = 2);

// One document holding both top-level keys.
std::string serialize_document(const ApplicationGraph& app, const ArchitectureSpec& arch,
                               int indent = 2);

// Optimized-output document: architecture, application, a "lof_edges" list
// ({from, to, volume, composition}) and a per-reagent "savings" summary.
std::string serialize_optimized_document(const ApplicationGraph& app,
                                         const ArchitectureSpec& arch,
                                         const std::map<std::string, Rational>& savings,
                                         int indent = 2);

// Parsers accept a document that contains the respective top-level key.
ArchitectureSpec parse_architecture(const std::string& json_text);
ApplicationGraph parse_application(const std::string& json_text);

ArchitectureSpec load_architecture_file(const std::string& path);
ApplicationGraph load_application_file(const std::string& path);

} // namespace mixflow
