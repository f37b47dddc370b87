#pragma once
// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 solver failure, 4 oracle rejection.
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace subspectra {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitOracle = 4;

struct RunConfig {
    std::string command;
    std::string model = "ss-system";
    std::string reaction;       // "a1,a2,a3,a4", row-major
    std::string reaction_case;  // "cc" or "nr" presets
    double a = 0.0;
    double d = 1.0;
    std::string gamma = "1";
    std::string delta;          // thresholds/region for model A, fraction or decimal
    double theta1 = 1.5707963267948966;
    double theta2 = 1.5707963267948966;
    std::string q = "0:3:151";
    std::string window = "-3,1,-2,2";
    std::string gammas = "5/6,19/20,299/300";
    std::string delta_grid = "0.01:0.99:99";
    std::string gamma_grid = "0.5:0.999:100";
    std::string d_grid = "1:40:40";
    int refine = 1;
    std::string u0 = "1";
    std::string t = "1:10000:40";
    std::string fit_window = "100,10000";
    double tolerance = 0.1;
    std::string out;
    std::string series_out;
    int jobs = 1;
    std::uint64_t seed = 0;
};

// "start:stop:count" with count >= 2, or a single value.
std::vector<double> parse_grid(const std::string& spec);
std::vector<double> parse_list(const std::string& spec);
double parse_fraction(const std::string& spec);
// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subspectra
