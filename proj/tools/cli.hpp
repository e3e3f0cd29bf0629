#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qinterp::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Invalid flags, values, or combinations; mapped to exit status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// --help and friends; the caller prints the text and exits 0.
struct HelpRequested {
    std::string text;
    int code = 0;
};

struct ExperimentConfig {
    std::string command;

    // field-instance parameters
    std::uint32_t p = 3;
    std::uint32_t d = 1;
    std::vector<std::uint32_t> domain; // resolved; empty only before validation
    std::uint32_t z = 0;
    std::vector<std::uint32_t> accept{0};
    std::vector<std::uint32_t> exceptions;
    std::string property = "value-bit";
    std::uint32_t coeff_index = 1;
    std::optional<std::uint32_t> order; // independence order; defaults to d
    bool distinct_tuples = false;

    // LP parameters
    double eps = 0.5;
    std::optional<std::uint32_t> t_max; // defaults to d+1

    // block / pipeline parameters
    std::uint32_t n = 8;
    std::uint32_t k = 2;
    std::vector<std::uint32_t> g_values; // default: zeros
    std::vector<std::uint32_t> h_values; // default: ones
    std::uint32_t sym_cap = 8;
    bool sampling = false;
    std::uint64_t samples = 200'000;

    // grover
    std::uint32_t marked = 1;
    std::uint32_t iterations = 1;

    // interpolate
    std::string model = "chosen";
    std::optional<std::vector<std::uint32_t>> coeffs;
    std::optional<std::uint64_t> budget;

    // parity
    std::vector<std::uint32_t> u_subset;
    std::optional<std::vector<std::uint32_t>> f_bits;

    // paturi scan
    std::vector<std::uint32_t> grid{25, 100, 400};
    double gap = 0.5;

    // budgets and caps
    std::uint64_t enum_cap = 1'000'000;
    std::uint64_t tuple_budget = 1'000'000;
    std::uint64_t monomial_budget = 200'000;
    std::uint64_t box_budget = 100'000;

    // output
    std::string output_path; // empty = stdout
    std::string format = "json";
    std::uint32_t jobs = 1;
    std::uint64_t seed = 0;
};

struct Verdict {
    std::string name;
    bool pass = false;
};

struct RunReport {
    std::string command;
    nlohmann::json parameters; // full resolved parameter set
    nlohmann::json results;
    std::vector<Verdict> verdicts;
    double wall_time_ms = 0.0;

    bool all_pass() const;
    nlohmann::json to_json() const;
    std::string to_csv() const; // paturi-scan and grover only
};

/// Parses command line tokens (without the program name) plus an optional
/// --config file into a validated configuration.  Flags override config-file
/// values; unknown keys are rejected.  Throws UsageError or HelpRequested.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Dispatches a validated configuration to the owning module.
RunReport run(const ExperimentConfig& config);

/// Full program: parse, run, serialize, map errors to the exit-status
/// contract (0 pass, 1 expectation failure or run error, 2 usage, 3 budget).
int main_entry(int argc, char** argv);

} // namespace qinterp::cli
