#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

// Command-line front end: series, eval, graphs, verify.
//
// Configuration precedence is flags > config file > defaults. The config file
// (path in $COLOUR3_CONFIG) is flat key=value text, '#' starts a comment;
// keys are the long flag names with '-' or '_'.

namespace colour3::cli {

enum class Format { json, csv };
enum class Source { closed, recursion, both };

struct RunConfig {
  int panels = 40;
  int points = 16;
  double ratio = 0;     // 0: keep the default t-range, ratio = 2^(40/panels)
  int max_order = 4;
  Format format = Format::json;
  std::string out;      // empty: stdout
  double p1 = 0, p2 = 0;
  int order = 1;
  Source source = Source::closed;
  int scan = 0;         // eval: emit p1 = i*p1/scan, i = 0..scan, at fixed p2
  double colour = 3;    // colour multiplicity; anything else is a canary run
  bool skip_refined = false; // verify: skip the doubled-grid comparison

  int grid_size() const { return panels * points; }
  double effective_ratio() const;
};

enum Exit { ok = 0, failure = 1, usage = 2 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Apply key=value lines to `cfg`; unknown keys and malformed values throw
// UsageError.
void apply_config_text(RunConfig &cfg, const std::string &text);
void validate(const RunConfig &cfg);

// Fixed-width formatting used everywhere in the output: 12 significant digits.
std::string fmt(double x);
// x rounded to 12 significant digits, the value a reader of the output sees
double round12(double x);

int cmd_series(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_eval(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_graphs(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_verify(const RunConfig &cfg, std::ostream &out, std::ostream &err);

// Parse arguments (without the program name) and run. `out` receives the
// result unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace colour3::cli
