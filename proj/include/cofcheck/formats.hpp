#pragma once

#include "cofcheck/catalog.hpp"
#include "cofcheck/execution.hpp"
#include "cofcheck/object.hpp"
#include "cofcheck/progress.hpp"
#include "cofcheck/valency.hpp"

#include <string>
#include <vector>

namespace cofcheck {

// JSON-document serialization of the exchangeable artifacts: sequential
// objects, algorithm specs, manifests, progress verdicts, and refutation
// reports. Parsing validates shape and identifier references; semantic
// validation (domain membership, totality) happens in the owning modules.

std::string object_to_text(const sequential_object& obj);
sequential_object object_from_text(const std::string& text);

std::string algorithm_to_text(const algorithm_spec& spec);
algorithm_spec algorithm_from_text(const std::string& text);

std::string manifest_to_text(const algorithm_manifest& m);
algorithm_manifest manifest_from_text(const std::string& text);

// Line-oriented schedule files: one process name per line, `#` comments, an
// optional `CYCLE:` marker splitting prefix from cycle for lasso replay.
struct schedule_file {
    std::vector<std::string> prefix;
    std::vector<std::string> cycle; // empty when the file has no CYCLE: marker
};
std::string schedule_to_text(const schedule_file& s);
schedule_file schedule_from_text(const std::string& text);
// Resolves process names against alg; throws spec_error on unknown names.
schedule resolve_schedule(const algorithm& alg, const std::vector<std::string>& names);

std::string verdict_to_text(const algorithm& alg, const progress_verdict& v);
std::string refutation_to_text(const algorithm& alg, const refutation& r);

// File helpers.
std::string read_file(const std::string& path);   // throws spec_error if unreadable
void write_file(const std::string& path, const std::string& content);

} // namespace cofcheck
