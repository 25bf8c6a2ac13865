#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dmc/model.hpp"

namespace dmc {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    Severity severity = Severity::Error;
    int line = 0;  // 0 when the location is not tied to a source position
    int column = 0;
    std::string message;
};

std::string format_diagnostic(const ParseDiagnostic& d);

class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::vector<ParseDiagnostic> diags);

    const std::vector<ParseDiagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<ParseDiagnostic> diags_;
};

// Parses a DMF document ({"dmf": 1, "model": ..., ...}). Returns a normalized
// model; throws ParseError when any error-severity diagnostic is produced.
// Unknown keys are dropped with a warning (collected in *warnings when given).
Model parse_model(const std::string& text, std::vector<ParseDiagnostic>* warnings = nullptr);

// Canonical form: two-space indent, keys in schema order, element arrays in
// normalized order, default-valued fields omitted. Serializing the same model
// twice yields byte-identical text.
std::string serialize_model(const Model& m);

Model load_model_file(const std::string& path);
void save_model_file(const Model& m, const std::string& path);

}  // namespace dmc
