#pragma once

#include <string>
#include <vector>

#include "hardyp/ground_state.hpp"
#include "hardyp/params.hpp"

namespace hardyp {

enum class Task { exponents, closed_form, ground_state, ball, eigen, verify, sweep };

struct SweepAxis {
    std::string name; // one of N, p, mu, s, lambda
    std::vector<double> values;
};

struct RunConfig {
    Task task = Task::exponents;
    Params params;
    GridSpec grid;
    double quad_tol = 1e-12;
    double ode_tol = 1e-10;
    double root_tol = 1e-12;
    std::string out;        // output path prefix; CSV/JSON files only when set
    std::string in;         // input profile CSV for the verify task
    std::vector<SweepAxis> sweep;
    std::string sweep_task = "ground-state";
};

// Exit codes shared by the CLI and run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by parse_args on -h/--help; carries the help text.
struct help_requested {
    std::string text;
};

// Parses command-line arguments (program name excluded).  --config names a
// key=value file supplying defaults that explicit flags override.  Throws
// usage_error with a one-line diagnostic naming the offending flag;
// parameter-validity violations report the violated inequality verbatim.
RunConfig parse_args(const std::vector<std::string>& args);

// Executes the configured task; returns an exit code.
int run(const RunConfig& cfg);

// Drives every invariant suite in scope and prints a pass/fail table.
int run_verify(const RunConfig& cfg);

// parse + run + exception-to-exit-code mapping; the CLI main().
int run_cli(int argc, char** argv);

} // namespace hardyp
