#include "colour3/cli.hpp"
#include "colour3/closedforms.hpp"
#include "colour3/kernels.hpp"
#include "colour3/polylog.hpp"
#include "colour3/recursion.hpp"
#include "colour3/ribbon.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#ifndef COLOUR3_VERSION
#define COLOUR3_VERSION "dev"
#endif

namespace colour3::cli {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  int x = 0;
  try {
    x = std::stoi(v, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw UsageError(key + ": expected an integer, got '" + v + "'");
  return x;
}

double to_double(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || !std::isfinite(x))
    throw UsageError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on")
    return true;
  if (v == "0" || v == "false" || v == "no" || v == "off")
    return false;
  throw UsageError(key + ": expected a boolean, got '" + v + "'");
}

void apply_pair(RunConfig &cfg, std::string key, const std::string &v) {
  for (auto &c : key)
    if (c == '_')
      c = '-';
  if (key == "panels")
    cfg.panels = to_int(key, v);
  else if (key == "points")
    cfg.points = to_int(key, v);
  else if (key == "grid-size") {
    int m = to_int(key, v);
    if (m <= 0 || cfg.points <= 0 || m % cfg.points != 0)
      throw UsageError("grid-size: must be a positive multiple of points (" + std::to_string(cfg.points) + ")");
    cfg.panels = m / cfg.points;
  } else if (key == "ratio")
    cfg.ratio = to_double(key, v);
  else if (key == "max-order")
    cfg.max_order = to_int(key, v);
  else if (key == "format") {
    if (v == "json")
      cfg.format = Format::json;
    else if (v == "csv")
      cfg.format = Format::csv;
    else
      throw UsageError("format: expected json or csv, got '" + v + "'");
  } else if (key == "out")
    cfg.out = v;
  else if (key == "p1")
    cfg.p1 = to_double(key, v);
  else if (key == "p2")
    cfg.p2 = to_double(key, v);
  else if (key == "order")
    cfg.order = to_int(key, v);
  else if (key == "source") {
    if (v == "closed")
      cfg.source = Source::closed;
    else if (v == "recursion")
      cfg.source = Source::recursion;
    else if (v == "both")
      cfg.source = Source::both;
    else
      throw UsageError("source: expected closed, recursion or both, got '" + v + "'");
  } else if (key == "scan")
    cfg.scan = to_int(key, v);
  else if (key == "colour")
    cfg.colour = to_double(key, v);
  else if (key == "skip-refined")
    cfg.skip_refined = to_bool(key, v);
  else
    throw UsageError("unknown configuration key '" + key + "'");
}

recursion::EngineConfig engine_config(const RunConfig &cfg) {
  recursion::EngineConfig e;
  e.panels = cfg.panels;
  e.points = cfg.points;
  e.ratio = cfg.effective_ratio();
  e.colour = cfg.colour;
  return e;
}

ribbon::AmplitudeConfig amplitude_config(const RunConfig &cfg) {
  ribbon::AmplitudeConfig a;
  a.panels = cfg.panels;
  a.points = cfg.points;
  a.ratio = cfg.effective_ratio();
  return a;
}

ordered_json num(double x) { return std::isfinite(x) ? ordered_json(round12(x)) : ordered_json(nullptr); }

ordered_json meta(const RunConfig &cfg) {
  ordered_json m;
  m["grid"] = {{"nodes", cfg.grid_size()}, {"map", "q = t/(1-t)"}};
  m["quadrature"] = {{"rule", "composite Gauss-Legendre"},
                     {"panels", cfg.panels},
                     {"points", cfg.points},
                     {"ratio", round12(cfg.effective_ratio())}};
  m["version"] = COLOUR3_VERSION;
  return m;
}

// Output sink: the --out file when given, `out` otherwise.
class Sink {
public:
  Sink(const RunConfig &cfg, std::ostream &out) : out_(&out) {
    if (!cfg.out.empty()) {
      file_.open(cfg.out, std::ios::binary);
      if (!file_)
        throw UsageError("cannot open output file '" + cfg.out + "'");
      out_ = &file_;
    }
  }
  std::ostream &stream() { return *out_; }

private:
  std::ofstream file_;
  std::ostream *out_;
};

void emit_json(const RunConfig &cfg, std::ostream &out, const ordered_json &j) {
  Sink s(cfg, out);
  s.stream() << j.dump(2) << '\n';
}

std::string csv_cell(double x) { return std::isfinite(x) ? fmt(x) : std::string(); }

// Deterministic uniform doubles on [lo, hi).
class Uniform {
public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) { return lo + (hi - lo) * double(rng_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 rng_;
};

} // namespace

double RunConfig::effective_ratio() const {
  return ratio > 0 ? ratio : std::pow(2.0, 40.0 / double(panels));
}

void apply_config_text(RunConfig &cfg, const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    apply_pair(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void validate(const RunConfig &cfg) {
  if (cfg.panels <= 0 || cfg.points <= 0)
    throw UsageError("panels and points must be positive");
  if (cfg.ratio < 0 || (cfg.ratio > 0 && cfg.ratio < 1))
    throw UsageError("ratio must be >= 1");
  if (cfg.max_order < 0 || cfg.max_order > 4)
    throw UsageError("max-order must be in 0..4");
  if (cfg.order < 0 || cfg.order > 4)
    throw UsageError("order must be in 0..4");
  if (cfg.p1 < 0 || cfg.p2 < 0)
    throw UsageError("momenta must be nonnegative");
  if (cfg.scan < 0)
    throw UsageError("scan must be nonnegative");
  if (!(cfg.colour > 0))
    throw UsageError("colour must be positive");
  // the mapped t-nodes must stay below 1 in double precision
  if (cfg.panels * std::log2(cfg.effective_ratio()) > 46)
    throw UsageError("panels and ratio reach beyond double resolution near t = 1");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) { return std::isfinite(x) ? std::strtod(fmt(x).c_str(), nullptr) : x; }

// ---------------------------------------------------------------------------

int cmd_series(const RunConfig &cfg, std::ostream &out, std::ostream &) {
  auto table = recursion::g00_series(cfg.max_order, engine_config(cfg));
  if (cfg.format == Format::json) {
    ordered_json j;
    j["meta"] = meta(cfg);
    j["coefficients"] = ordered_json::array();
    ordered_json contraction = ordered_json::array();
    for (const auto &e : table.coefficients) {
      j["coefficients"].push_back({{"order", e.order}, {"value", num(e.value)}, {"error", num(e.error)}});
      contraction.push_back(num(e.contraction));
    }
    j["diagnostics"] = {{"error_reference",
                         {{"panels", table.reference.panels},
                          {"points", table.reference.points},
                          {"ratio", round12(table.reference.ratio)}}},
                        {"diagonal_contraction", contraction},
                        {"colour", round12(cfg.colour)},
                        {"kernels", kernels::name(kernels::active())}};
    emit_json(cfg, out, j);
  } else {
    Sink s(cfg, out);
    s.stream() << "order,value,error,contraction,panels,points,ratio,version\n";
    for (const auto &e : table.coefficients)
      s.stream() << e.order << ',' << fmt(e.value) << ',' << fmt(e.error) << ',' << fmt(e.contraction) << ','
                 << cfg.panels << ',' << cfg.points << ',' << fmt(cfg.effective_ratio()) << ','
                 << COLOUR3_VERSION << '\n';
  }
  return ok;
}

int cmd_eval(const RunConfig &cfg, std::ostream &out, std::ostream &) {
  bool want_closed = cfg.source != Source::recursion;
  bool want_rec = cfg.source != Source::closed;
  if (want_closed && cfg.order > 3)
    throw UsageError("closed forms exist for orders 0..3; use --source recursion for order 4");

  std::unique_ptr<recursion::Engine> fine, coarse;
  if (want_rec) {
    fine = std::make_unique<recursion::Engine>(engine_config(cfg));
    coarse = std::make_unique<recursion::Engine>(recursion::coarsen(engine_config(cfg)));
  }
  auto rec_value = [&](recursion::Engine &e, double a, double b) {
    return a == b ? e.diagonal(cfg.order, a).value : e.order(cfg.order).value(a, b);
  };

  struct Row {
    double p1, p2, closed = NAN, rec = NAN, error = NAN, discrepancy = NAN;
  };
  std::vector<Row> rows;
  int n = cfg.scan > 0 ? cfg.scan + 1 : 1;
  for (int i = 0; i < n; ++i) {
    Row r{cfg.scan > 0 ? cfg.p1 * i / cfg.scan : cfg.p1, cfg.p2};
    if (want_closed)
      r.closed = r.p1 == r.p2 && cfg.order == 3 ? closed::gp6_diag(r.p1) : closed::coefficient(cfg.order, r.p1, r.p2);
    if (want_rec) {
      r.rec = rec_value(*fine, r.p1, r.p2);
      r.error = std::abs(r.rec - rec_value(*coarse, r.p1, r.p2));
    }
    if (want_closed && want_rec)
      r.discrepancy = std::abs(r.rec - r.closed);
    rows.push_back(r);
  }

  if (cfg.format == Format::json) {
    ordered_json j;
    j["meta"] = meta(cfg);
    j["order"] = cfg.order;
    j["source"] = cfg.source == Source::closed ? "closed" : cfg.source == Source::recursion ? "recursion" : "both";
    ordered_json arr = ordered_json::array();
    for (const auto &r : rows) {
      ordered_json e{{"p1", num(r.p1)}, {"p2", num(r.p2)}};
      if (want_closed)
        e["closed"] = num(r.closed);
      if (want_rec) {
        e["recursion"] = num(r.rec);
        e["error"] = num(r.error);
      }
      if (want_closed && want_rec)
        e["discrepancy"] = num(r.discrepancy);
      arr.push_back(e);
    }
    j["values"] = arr;
    j["diagnostics"] = {{"colour", round12(cfg.colour)}};
    emit_json(cfg, out, j);
  } else {
    Sink s(cfg, out);
    s.stream() << "p1,p2,order,closed,recursion,error,discrepancy\n";
    for (const auto &r : rows)
      s.stream() << fmt(r.p1) << ',' << fmt(r.p2) << ',' << cfg.order << ',' << csv_cell(r.closed) << ','
                 << csv_cell(r.rec) << ',' << csv_cell(r.error) << ',' << csv_cell(r.discrepancy) << '\n';
  }
  return ok;
}

namespace {

ordered_json graph_json(const ribbon::RibbonGraph &g) {
  ordered_json j;
  ordered_json vs = ordered_json::array();
  for (const auto &v : g.vertices())
    vs.push_back({{"kind", v.kind == ribbon::VertexKind::external ? "external" : "internal"},
                  {"half_edges", v.half_edges}});
  j["vertices"] = vs;
  j["alpha"] = g.alpha();
  j["sigma"] = g.sigma();
  j["colour"] = g.colour();
  j["face"] = g.face_of();
  j["external_faces"] = g.external_faces();
  j["internal_faces"] = g.internal_faces();
  ordered_json es = ordered_json::array();
  for (const auto &e : g.edges())
    es.push_back({{"half_edges", {e.h, e.mate}},
                  {"colour", e.colour},
                  {"faces", {g.label_index(e.face_a), g.label_index(e.face_b)}}});
  j["edges"] = es;
  return j;
}

} // namespace

int cmd_graphs(const RunConfig &cfg, std::ostream &out, std::ostream &) {
  if (cfg.order < 1 || cfg.order > 2)
    throw UsageError("graphs: order must be 1 or 2");
  auto classes = ribbon::enumerate_2pt(cfg.order);
  auto acfg = amplitude_config(cfg);

  struct Row {
    std::string name;
    int s;
    double amp, err, closed = NAN;
  };
  std::vector<Row> rows;
  double total = 0;
  for (const auto &c : classes) {
    auto a = ribbon::amplitude_checked(c.representative, {cfg.p1, cfg.p2}, acfg);
    Row r{c.name, c.multiplicity, a.value, a.error};
    if (c.gamma)
      r.closed = ribbon::amplitude_closed(*c.gamma, cfg.p1, cfg.p2);
    total += c.multiplicity * a.value;
    rows.push_back(r);
  }
  double reference = closed::coefficient(cfg.order, cfg.p1, cfg.p2);

  if (cfg.format == Format::json) {
    ordered_json j;
    j["meta"] = meta(cfg);
    j["order"] = cfg.order;
    j["p1"] = num(cfg.p1);
    j["p2"] = num(cfg.p2);
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto &r = rows[i];
      ordered_json e{{"name", r.name}, {"s", r.s}, {"amplitude", num(r.amp)}, {"error", num(r.err)}};
      if (std::isfinite(r.closed))
        e["closed"] = num(r.closed);
      e["graph"] = graph_json(classes[i].representative);
      arr.push_back(e);
    }
    j["classes"] = arr;
    j["total"] = num(total);
    j["closed_total"] = num(reference);
    j["discrepancy"] = num(std::abs(total - reference));
    emit_json(cfg, out, j);
  } else {
    Sink s(cfg, out);
    s.stream() << "name,s,amplitude,error,closed\n";
    for (const auto &r : rows)
      s.stream() << r.name << ',' << r.s << ',' << fmt(r.amp) << ',' << fmt(r.err) << ',' << csv_cell(r.closed)
                 << '\n';
    s.stream() << "total,," << fmt(total) << ",," << fmt(reference) << '\n';
  }
  return ok;
}

// ---------------------------------------------------------------------------
// verification suite

namespace {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Check check_polylog() {
  const double pi = M_PI, z3 = zeta3();
  double worst = 0;
  worst = std::max(worst, std::abs(li2(-1) + pi * pi / 12));
  worst = std::max(worst, std::abs(li3(-1) + 0.75 * z3));
  for (int i = 1; i <= 1000; ++i) {
    double x = 50.0 * i / 1000;
    double L = std::log1p(x), lx = std::log(x);
    worst = std::max(worst, std::abs(li2(-x) + 0.5 * L * L + li2(x / (1 + x))));
    worst = std::max(worst, std::abs(li3(-x) - li3(-1 / x) + lx * lx * lx / 6 + pi * pi / 6 * lx));
    double three = li3(-x) + li3(x / (1 + x)) + li3(1 / (1 + x)) - L * L * L / 3 + lx * L * L / 2 +
                   pi * pi / 6 * L - z3;
    worst = std::max(worst, std::abs(three));
  }
  return {"polylog identities and constants", worst < 1e-11, "max defect " + sci(worst)};
}

} // namespace

int cmd_verify(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  std::vector<Check> checks;
  auto guarded = [&](const std::string &name, const std::function<Check()> &f) {
    try {
      checks.push_back(f());
    } catch (const std::exception &e) {
      checks.push_back({name, false, std::string("error: ") + e.what()});
    }
    err << (checks.back().pass ? "PASS " : "FAIL ") << checks.back().name << ": " << checks.back().detail << '\n';
  };

  const auto ecfg = engine_config(cfg);
  const int top = cfg.max_order;
  recursion::SeriesTable table;

  guarded("polylog identities and constants", check_polylog);

  guarded("zero-momentum series", [&] {
    table = recursion::g00_series(top, ecfg);
    const double tol[4] = {1e-15, 1e-6, 1e-4, 5e-3};
    bool pass = true;
    std::string d;
    for (const auto &e : table.coefficients) {
      double ref = e.order < 4 ? closed::series_exact(e.order) : 194.612;
      double t = e.order < 4 ? tol[e.order] : 1.0;
      double dev = std::abs(e.value - ref);
      pass &= dev <= t;
      d += "c" + std::to_string(e.order) + "=" + fmt(e.value) + " ";
    }
    return Check{"zero-momentum series", pass, d};
  });

  recursion::Engine engine(ecfg);
  guarded("recursion vs closed forms", [&] {
    Uniform u(7);
    const double tol[4] = {0, 1e-8, 1e-6, 5e-5};
    bool pass = true;
    std::string d;
    for (int n = 1; n <= std::min(3, top); ++n) {
      double worst = 0;
      for (int i = 0; i < 20; ++i) {
        double a = u(0, 5), b = u(0, 5);
        worst = std::max(worst, std::abs(engine.order(n).value(a, b) - closed::coefficient(n, a, b)));
      }
      pass &= worst <= tol[n];
      d += "order " + std::to_string(n) + " " + sci(worst) + " ";
    }
    return Check{"recursion vs closed forms", pass, d};
  });

  if (top >= 3)
    guarded("order-3 diagonal", [&] {
      double worst = 0;
      for (double p : {0.0, 0.5, 1.0, 2.0, 5.0})
        worst = std::max(worst, std::abs(engine.diagonal(3, p).value - closed::gp6_diag(p)));
      return Check{"order-3 diagonal", worst <= 1e-5, "max deviation " + sci(worst)};
    });

  guarded("graph classes", [&] {
    auto c1 = ribbon::enumerate_2pt(1), c2 = ribbon::enumerate_2pt(2);
    std::string ms;
    bool pass = c1.size() == 1 && c1[0].multiplicity == 2 && c2.size() == 4;
    const int want[4] = {2, 4, 4, 4};
    for (std::size_t i = 0; i < c2.size(); ++i) {
      ms += std::to_string(c2[i].multiplicity) + (i + 1 < c2.size() ? "," : "");
      pass &= i < 4 && c2[i].multiplicity == want[i] && c2[i].gamma && int(*c2[i].gamma) == int(i) + 1;
    }
    pass &= ribbon::enumerate_2pt(2, 1, 2).empty();
    return Check{"graph classes", pass, "order 1: " + std::to_string(c1.size()) + " class; order 2 s = " + ms};
  });

  guarded("graph resummation", [&] {
    auto c1 = ribbon::enumerate_2pt(1), c2 = ribbon::enumerate_2pt(2);
    auto acfg = amplitude_config(cfg);
    Uniform u(11);
    double w1 = 0, w2 = 0, wc = 0;
    for (int i = 0; i < 5; ++i) {
      double a = u(0, 5), b = u(0, 5);
      w1 = std::max(w1, std::abs(ribbon::resum(c1, a, b, acfg) - closed::g2(a, b)));
      w2 = std::max(w2, std::abs(ribbon::resum(c2, a, b, acfg) - closed::g4(a, b)));
      for (const auto &c : c2)
        wc = std::max(wc, std::abs(ribbon::amplitude(c.representative, {a, b}, acfg) -
                                   ribbon::amplitude_closed(*c.gamma, a, b)));
    }
    return Check{"graph resummation", w1 <= 1e-9 && w2 <= 1e-7 && wc <= 1e-8,
                 "order 1 " + sci(w1) + ", order 2 " + sci(w2) + ", per class " + sci(wc)};
  });

  guarded("worked examples", [&] {
    auto acfg = amplitude_config(cfg);
    auto e1 = ribbon::example_two_boundaries(), e2 = ribbon::example_bubble(), e3 = ribbon::example_triangle();
    Uniform u(13);
    double worst = 0;
    for (int i = 0; i < 5; ++i) {
      double a = u(0, 5), b = u(0, 5), c = u(0, 5);
      worst = std::max(worst, std::abs(ribbon::amplitude(e1, {a, b}, acfg) - ribbon::example_two_boundaries_formula(a, b)));
      worst = std::max(worst, std::abs(ribbon::amplitude(e2, {a, b}, acfg) - ribbon::example_bubble_formula(a, b)));
      worst = std::max(worst, std::abs(ribbon::amplitude(e3, {a, b, c}, acfg) - ribbon::example_triangle_formula(a, b, c)));
    }
    return Check{"worked examples", worst <= 1e-9, "max deviation " + sci(worst)};
  });

  if (top >= 2)
    guarded("residual scaling", [&] {
      bool pass = true;
      std::string d;
      for (int n = 1; n <= 2; ++n) {
        double r1 = recursion::closed_equation_residual(engine, n, 0.05, 0.7, 0.3);
        double r2 = recursion::closed_equation_residual(engine, n, 0.1, 0.7, 0.3);
        double slope = std::log(r2 / r1) / std::log(2.0);
        pass &= std::abs(slope - (2 * n + 2)) <= 0.2;
        d += "n=" + std::to_string(n) + " exponent " + fmt(std::round(slope * 1000) / 1000) + " ";
      }
      return Check{"residual scaling", pass, d};
    });

  if (!cfg.skip_refined)
    guarded("grid doubling", [&] {
      // twice the panels, and twice the Gauss points per panel
      recursion::EngineConfig more_points = ecfg;
      more_points.points = 2 * ecfg.points;
      bool pass = !table.coefficients.empty();
      double worst = 0;
      for (const auto &fine : {recursion::refine(ecfg), more_points}) {
        auto refined = recursion::g00_series(top, fine);
        for (std::size_t n = 0; n < table.coefficients.size(); ++n) {
          double change = std::abs(refined.coefficients[n].value - table.coefficients[n].value);
          pass &= change <= table.coefficients[n].error;
          worst = std::max(worst, change / table.coefficients[n].error);
        }
      }
      return Check{"grid doubling", pass, "max change / error estimate " + sci(worst)};
    });

  bool all = true;
  for (const auto &c : checks)
    all &= c.pass;

  if (cfg.format == Format::json) {
    ordered_json j;
    j["meta"] = meta(cfg);
    ordered_json arr = ordered_json::array();
    for (const auto &c : checks)
      arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = arr;
    j["diagnostics"] = {{"all_passed", all}, {"colour", round12(cfg.colour)}};
    emit_json(cfg, out, j);
  } else {
    Sink s(cfg, out);
    s.stream() << "check,pass,detail\n";
    for (const auto &c : checks)
      s.stream() << c.name << ',' << (c.pass ? 1 : 0) << ",\"" << c.detail << "\"\n";
  }
  return all ? ok : failure;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Perturbative planar two-point function of the noncommutative 3-colour model", "colour3"};
  app.set_version_flag("--version", COLOUR3_VERSION);
  app.require_subcommand(1);

  // every flag is kept as text and applied through the same key=value path
  // as the config file, so flags and file share one parser
  std::map<std::string, std::string> given;
  std::vector<std::pair<std::string, std::string>> flags = {
      {"grid-size", "total grid nodes m = panels * points; sets panels = m / points"},
      {"panels", "quadrature panels"},
      {"points", "Gauss points per panel"},
      {"ratio", "geometric panel ratio (default 2^(40/panels))"},
      {"max-order", "highest order of the series (0..4)"},
      {"format", "json or csv"},
      {"out", "output path (default stdout)"},
      {"p1", "first momentum"},
      {"p2", "second momentum"},
      {"order", "coefficient order"},
      {"source", "closed, recursion or both"},
      {"scan", "eval: number of steps of a p1 scan from 0 to --p1"},
      {"colour", "colour multiplicity (3; other values are a sensitivity canary)"},
      {"skip-refined", "verify: skip the doubled-grid comparison"},
  };
  auto add_flags = [&](CLI::App *sub) {
    for (auto &[name, help] : flags)
      sub->add_option_function<std::string>(
          "--" + name, [&given, key = name](const std::string &v) { given[key] = v; }, help);
  };

  std::string command;
  for (auto [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"series", "zero-momentum coefficients c_n with error estimates"},
           {"eval", "one coefficient function at (p1, p2)"},
           {"graphs", "graph classes, symmetry factors and amplitudes"},
           {"verify", "run the verification suite"}}) {
    auto *sub = app.add_subcommand(name, help);
    add_flags(sub);
    sub->callback([&command, n = name] { command = n; });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0)
      return app.exit(e, out, err); // help or version
    err << "usage error: " << e.what() << '\n';
    return usage;
  }

  RunConfig cfg;
  try {
    if (const char *path = std::getenv("COLOUR3_CONFIG"); path && *path) {
      std::ifstream f(path);
      if (!f)
        throw UsageError(std::string("cannot read config file '") + path + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      apply_config_text(cfg, ss.str());
    }
    // points before grid-size so the panel count divides correctly
    if (auto it = given.find("points"); it != given.end())
      apply_config_text(cfg, "points=" + it->second);
    for (auto &[k, v] : given)
      if (k != "points")
        apply_config_text(cfg, k + "=" + v);
    if (command != "graphs" && command != "eval" && given.count("order"))
      throw UsageError("--order applies to eval and graphs");
    validate(cfg);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  }

  try {
    if (command == "series")
      return cmd_series(cfg, out, err);
    if (command == "eval")
      return cmd_eval(cfg, out, err);
    if (command == "graphs")
      return cmd_graphs(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const std::invalid_argument &e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
}

} // namespace colour3::cli
