// config.hpp — flat key=value run configuration: parsing, validation, rendering.

#pragma once

#include "phl/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phl::cli {

using model::ModelParams;

struct ConfigError : std::runtime_error {
    int line;  // 1-based; 0 when not attributable to a line
    ConfigError(int line_, const std::string& message)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + message
                                       : message),
          line(line_) {}
};

enum class Mode { Dynamics, Steady, Sweep };
enum class Format { Csv, JsonLines };

struct SweepSpec {
    std::string variable;  // deltaT | lambda | g | gamma_sys
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

struct RunConfig {
    Mode mode = Mode::Dynamics;
    std::string preset_name = "model-section";
    ModelParams params;
    double t_end = 50.0;
    double dt = 0.001;
    int sample_every = 20;
    bool self_consistent = false;
    std::optional<SweepSpec> sweep;
    std::string out = "-";  // "-" = stdout
    Format format = Format::Csv;
    int workers = 1;
};

// Parses a key=value document ('#' comments, one assignment per line).
// Unknown keys, malformed lines, and parameter-invariant violations are
// rejected with the offending line number. Missing keys fall back to the
// named preset (default model-section).
RunConfig parse_config(std::string_view text);

// Renders a config document that parses back to the same RunConfig
// (full 17-significant-digit precision).
std::string render_config(const RunConfig& config);

const char* mode_name(Mode m);
const char* format_name(Format f);

}  // namespace phl::cli
