#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigmod/error.hpp"
#include "sigmod/serialize.hpp"

namespace sigmod {

/// Settings for one run. Unset p, f and prec fall back to the input document.
struct JobConfig {
    std::optional<int64_t> p;
    std::optional<int> f;
    std::optional<int> rel;
    int64_t max_window = LaurentSeries::kDefaultMaxWidth;
    int k_max = 32;
    int n_max = 30;
    double tol = 1e-6;
    /// Sub-mode of commands that have one (factor: gamma or robba).
    std::string mode;

    void set(const std::string& key, const std::string& value);
    void validate() const;
};

struct CommandOutcome {
    int exit_code = 0;
    std::string verdict;
    std::optional<ErrorCode> error;
    io::json report;
};

const std::vector<std::string>& command_names();

/// Never throws; library errors end up in the report.
CommandOutcome run_command(const std::string& command, const JobConfig& config, const std::string& input);

}  // namespace sigmod
