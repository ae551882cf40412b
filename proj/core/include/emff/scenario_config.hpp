#pragma once

#include <stdexcept>
#include <string>

#include "emff/sim_engine.hpp"

namespace emff {

/// Parse or validation failure with a "source:line: message" description.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the key/value scenario format. Unknown sections or keys are
/// rejected; every error names the offending line. The returned scenario has
/// been validated.
Scenario parse_scenario(const std::string& text, const std::string& source_name);

/// parse_scenario over the file's contents.
Scenario load_scenario(const std::string& path);

/// Canonical text form; load(dump(s)) == s field for field.
std::string dump_scenario(const Scenario& s);

} // namespace emff
