#ifndef BELLLAB_CLI_HPP
#define BELLLAB_CLI_HPP

#include <string>
#include <vector>

namespace belllab::cli {

// Angle literal: a plain decimal, or "pi" with optional coefficient and
// divisor, e.g. "pi", "pi/2", "3pi/4", "0.5pi", "-pi/3".
double parse_angle(const std::string& text);

// "start:end:count" with angle literals; endpoints included, strictly
// increasing, inside [0, pi].
std::vector<double> parse_grid(const std::string& text);

// "a,a',b,b'" as four angle literals.
std::array<double, 4> parse_angle_list(const std::string& text);

// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace belllab::cli

#endif  // BELLLAB_CLI_HPP
