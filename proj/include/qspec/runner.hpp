#pragma once

#include "qspec/config.hpp"
#include "qspec/field.hpp"
#include "qspec/matter.hpp"
#include "qspec/types.hpp"

#include <string>

namespace qspec {

struct RunOptions {
    std::string out_dir;   // overrides [output].dir when nonempty
    int threads = 1;
    bool verbose = false;
};

/// Parses the run section, executes the command and writes one CSV plus a
/// JSON manifest. Returns the CSV path. Outputs are byte-stable for a fixed
/// config regardless of thread count.
std::string run_config(const Config& cfg, const RunOptions& opts);

MatterSystem matter_from_config(const Config& cfg);
Matrix initial_matter_state(const Config& cfg, const MatterSystem& sys);
FieldState field_from_config(const Config& cfg);

/// 17-significant-digit scientific formatting used for every CSV number.
std::string format_number(double v);

}  // namespace qspec
