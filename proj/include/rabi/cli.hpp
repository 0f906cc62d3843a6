// cli.hpp - Run configuration and the report-producing commands behind the `rabi` CLI.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/dynamics.hpp"
#include "rabi/perturbation.hpp"
#include "rabi/report.hpp"

namespace rabi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumericalFailure = 3;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Command { overlaps, spectrum, dynamics, reconcile };
enum class Format { csv, json };

struct RunConfig {
    Command command{Command::overlaps};
    std::optional<double> beta;
    std::optional<double> omega0_ratio;
    int max_n{20};
    int dim{120};
    CutoffPolicy policy{};
    Denominators denominators{Denominators::unsplit};
    bool oracle{false};
    bool fig1{false};
    bool fig2{false};
    bool fig3{false};
    int n{0};                                  // dynamics: initial state |n_+,+>
    std::vector<PopulationTarget> populations; // dynamics: extra population columns
    std::optional<double> t_max;               // dynamics: default two adiabatic periods
    int samples{400};
    std::string out;                           // empty: standard output
    Format format{Format::csv};

    // Throws ConfigError.
    void validate() const;
};

// "pp:1,mm:0" -> targets. Throws ConfigError.
std::vector<PopulationTarget> parse_populations(const std::string& text);

report::Table cmd_overlaps(const RunConfig& config);
report::Table cmd_spectrum(const RunConfig& config);
report::Table cmd_dynamics(const RunConfig& config);
report::Table cmd_reconcile(const RunConfig& config);

report::Table run_command(const RunConfig& config);
std::string render(const report::Table& table, Format format);

// Full CLI: parse, validate, run, emit. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rabi::cli
