#pragma once

// Problem-spec parsing, command execution, and report rendering for the
// `phaseborn` command-line tool. Kept in the library so tests can drive the
// commands in-process.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseborn/classical_state.hpp"
#include "phaseborn/observable.hpp"
#include "phaseborn/oscillator.hpp"
#include "phaseborn/reduction.hpp"

namespace phaseborn::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char *kEngineVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitOperational = 1;
inline constexpr int kExitVerificationFailed = 2;

enum class Command { reduce, expect, verify, evolve, moments };
enum class Format { json, csv };

const char *to_string(Command command);

/// Malformed or inconsistent problem spec. The message starts with the
/// location: a JSON pointer for schema errors, line/column for syntax errors.
class SpecError : public Error {
  public:
    using Error::Error;
};

/// Command-line values that take precedence over the spec's `run` block.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> hbar;
    std::optional<double> tolerance;
    bool compare = false;
};

struct RunParams {
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    double tolerance = kVerifyTolerance;
    std::vector<double> times;
    std::optional<StateVector> initial;
    std::optional<PhasePoint> phase_point;
    std::optional<std::uint64_t> unitary_seed;
    bool compare = false;
};

struct ProblemSpec {
    ModelConfig config;
    std::optional<ClassicalState> state;
    std::vector<HermitianObservable> observables;
    RunParams run;
    /// SHA-256 of the spec document with overrides folded in.
    std::string sha256;
};

ProblemSpec parse_spec(const nlohmann::json &doc, const Overrides &overrides = {});
ProblemSpec parse_spec_text(const std::string &text, const Overrides &overrides = {});
ProblemSpec load_spec(const std::filesystem::path &path, const Overrides &overrides = {});

struct RunReport {
    Command command;
    nlohmann::json document;
    int exit_code = kExitOk;
};

RunReport cmd_reduce(const ProblemSpec &spec);
RunReport cmd_expect(const ProblemSpec &spec);
RunReport cmd_verify(const ProblemSpec &spec);
RunReport cmd_evolve(const ProblemSpec &spec);
RunReport cmd_moments(const ProblemSpec &spec);
RunReport run(Command command, const ProblemSpec &spec);

/// JSON reports are pretty-printed with two-space indent; CSV is available
/// for reduce, moments, expect and verify.
std::string render(const RunReport &report, Format format);

// Encoders shared with tests.
nlohmann::json to_json(Complex z);
nlohmann::json to_json(const CMatrix &m);
nlohmann::json to_json(const RMatrix &m);
nlohmann::json to_json(const DensityMatrix &rho);
nlohmann::json to_json(const ReductionReport &report);
nlohmann::json to_json(const VerificationReport &report);
nlohmann::json to_json(const MomentReport &report);

/// Row-major CSV, one matrix row per line, each cell written as "re,im".
std::string matrix_csv(const CMatrix &m);

} // namespace phaseborn::cli
