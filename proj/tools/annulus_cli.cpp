// Command-line front end: exact evaluation (exact), rho sweeps (sweep)
// and Monte Carlo comparison runs (mc). Every number printed here comes
// from one library call through the C API; the CLI only formats.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "annulus/annulus.h"
#include "json.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(ann_status s) {
  switch (s) {
    case ANN_ERR_TRUNCATION:
      return 3;
    case ANN_ERR_RESOURCE:
      return 4;
    default:
      return 2;  // domain, overflow, argument
  }
}

void require_ok(ann_status s, const std::string& context) {
  if (s != ANN_OK) {
    throw CliError{exit_code_for(s),
                   context + ": " + ann_status_message(s)};
  }
}

// 17 significant digits in machine formats, 6 in human tables.
std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct ModulusDeleter {
  void operator()(ann_modulus* m) const { ann_modulus_destroy(m); }
};
struct GeometryDeleter {
  void operator()(ann_geometry* g) const { ann_geometry_destroy(g); }
};
struct DistributionDeleter {
  void operator()(ann_distribution* d) const { ann_distribution_destroy(d); }
};
struct TrialsDeleter {
  void operator()(ann_trials* t) const { ann_trials_destroy(t); }
};
struct ReportDeleter {
  void operator()(ann_report* r) const { ann_report_destroy(r); }
};

using ModulusPtr = std::unique_ptr<ann_modulus, ModulusDeleter>;
using GeometryPtr = std::unique_ptr<ann_geometry, GeometryDeleter>;
using DistributionPtr = std::unique_ptr<ann_distribution, DistributionDeleter>;
using TrialsPtr = std::unique_ptr<ann_trials, TrialsDeleter>;
using ReportPtr = std::unique_ptr<ann_report, ReportDeleter>;

ModulusPtr make_modulus(double rho, const std::string& flag) {
  ann_modulus* raw = nullptr;
  require_ok(ann_modulus_create(rho, &raw), flag);
  return ModulusPtr(raw);
}

const std::vector<std::pair<std::string, ann_form>> kForms = {
    {"x1", ANN_FORM_X1},   {"x2", ANN_FORM_X2},
    {"x3a", ANN_FORM_X3A}, {"x3b", ANN_FORM_X3B},
    {"loopgas", ANN_FORM_LOOPGAS}, {"auto", ANN_FORM_AUTO}};

std::vector<std::pair<std::string, ann_form>> resolve_forms(
    const std::string& name) {
  if (name == "all") {
    return {kForms.begin(), kForms.end() - 1};  // the five named forms
  }
  for (const auto& f : kForms) {
    if (f.first == name) return {f};
  }
  throw CliError{2, "--form: unknown form '" + name + "'"};
}

// Output sink: stdout by default, --output redirects to a file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw CliError{4, "--output: cannot open '" + path + "'"};
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct CommonOptions {
  double rho = 1.0;
  std::string form = "auto";
  int n_max = 3;
  double tol = ann_default_truncation().abs_tol;
  std::int64_t max_terms = ann_default_truncation().max_terms;
  std::string format = "table";
  std::string output_path;
};

ann_truncation truncation_of(const CommonOptions& opt) {
  return ann_truncation{opt.tol, opt.max_terms};
}

// ---- exact ----------------------------------------------------------

struct ExactResults {
  std::vector<std::pair<std::string, double>> crossing;  // form name, value
  std::vector<double> p;                                 // P(0..n_max)
  double tail_bound = 0.0;
  double mean_nc = 0.0;
  double o1 = 0.0;
  double z_pm = 0.0;
  double q_tilde = 0.0;
  double q = 0.0;
};

ExactResults evaluate_exact(const CommonOptions& opt) {
  ModulusPtr m = make_modulus(opt.rho, "--rho");
  const ann_truncation trunc = truncation_of(opt);

  ExactResults r;
  r.q_tilde = ann_modulus_q_tilde(m.get());
  r.q = ann_modulus_q(m.get());
  for (const auto& [name, form] : resolve_forms(opt.form)) {
    double value = 0.0;
    require_ok(ann_crossing_probability(m.get(), form, trunc, &value),
               "crossing (" + name + ")");
    r.crossing.push_back({name, value});
  }

  ann_distribution* draw = nullptr;
  require_ok(ann_distribution_create(m.get(), opt.n_max, trunc, &draw),
             "--n-max");
  DistributionPtr dist(draw);
  for (int n = 0; n <= opt.n_max; ++n) {
    r.p.push_back(ann_distribution_p(dist.get(), n));
  }
  r.tail_bound = ann_distribution_tail_bound(dist.get());

  require_ok(ann_mean_spanning_clusters(m.get(), trunc, &r.mean_nc), "E[Nc]");
  require_ok(ann_o1_crossing_probability(m.get(), trunc, &r.o1),
             "o1_crossing");
  require_ok(ann_z_plus_minus(m.get(), trunc, &r.z_pm), "Z_plus_minus");
  return r;
}

void print_exact_table(std::ostream& os, const CommonOptions& opt,
                       const ExactResults& r) {
  os << "annulus exact  rho=" << fmt(opt.rho, 6)
     << "  q_tilde=exp(-2*pi*rho)=" << fmt(r.q_tilde, 6)
     << "  q=exp(-pi/rho)=" << fmt(r.q, 6) << "\n";
  os << "observable      form      value\n";
  for (const auto& [name, value] : r.crossing) {
    os << "crossing        " << name << std::string(10 - name.size(), ' ')
       << fmt(value, 6) << "\n";
  }
  for (std::size_t n = 0; n < r.p.size(); ++n) {
    std::string label = "P(" + std::to_string(n) + ")";
    os << label << std::string(16 - label.size(), ' ') << "-         "
       << fmt(r.p[n], 6) << "\n";
  }
  os << "tail_bound      -         " << fmt(r.tail_bound, 6) << "\n";
  os << "E[Nc]           -         " << fmt(r.mean_nc, 6) << "\n";
  os << "o1_crossing     -         " << fmt(r.o1, 6) << "\n";
  os << "Z_plus_minus    -         " << fmt(r.z_pm, 6) << "\n";
}

void print_exact_csv(std::ostream& os, const CommonOptions& opt,
                     const ExactResults& r) {
  const std::string rho = fmt(opt.rho, 17);
  const std::string tol = fmt(opt.tol, 17);
  os << "# schema_version=1\n";
  os << "# rho=" << rho << ",q_tilde=exp(-2*pi*rho)=" << fmt(r.q_tilde, 17)
     << ",q=exp(-pi/rho)=" << fmt(r.q, 17) << "\n";
  os << "observable,rho,form,value,abs_tol\n";
  for (const auto& [name, value] : r.crossing) {
    os << "crossing," << rho << "," << name << "," << fmt(value, 17) << ","
       << tol << "\n";
  }
  for (std::size_t n = 0; n < r.p.size(); ++n) {
    os << "P(" << n << ")," << rho << ",," << fmt(r.p[n], 17) << "," << tol
       << "\n";
  }
  os << "tail_bound," << rho << ",," << fmt(r.tail_bound, 17) << "," << tol
     << "\n";
  os << "E[Nc]," << rho << ",," << fmt(r.mean_nc, 17) << "," << tol << "\n";
  os << "o1_crossing," << rho << ",," << fmt(r.o1, 17) << "," << tol << "\n";
  os << "Z_plus_minus," << rho << ",," << fmt(r.z_pm, 17) << "," << tol
     << "\n";
}

void print_exact_json(std::ostream& os, const CommonOptions& opt,
                      const ExactResults& r) {
  ordered_json j;
  j["schema_version"] = 1;
  j["command"] = "exact";
  j["rho"] = opt.rho;
  j["q_tilde"] = r.q_tilde;
  j["q"] = r.q;
  j["abs_tol"] = opt.tol;
  j["max_terms"] = opt.max_terms;
  ordered_json crossing;
  for (const auto& [name, value] : r.crossing) crossing[name] = value;
  j["crossing"] = crossing;
  j["distribution"] = {{"n_max", opt.n_max},
                       {"p", r.p},
                       {"tail_bound", r.tail_bound}};
  j["mean_nc"] = r.mean_nc;
  j["o1_crossing"] = r.o1;
  j["z_plus_minus"] = r.z_pm;
  os << j.dump(2) << "\n";
}

int cmd_exact(const CommonOptions& opt) {
  ExactResults r = evaluate_exact(opt);
  Sink sink(opt.output_path);
  if (opt.format == "table") {
    print_exact_table(sink.out(), opt, r);
  } else if (opt.format == "csv") {
    print_exact_csv(sink.out(), opt, r);
  } else {
    print_exact_json(sink.out(), opt, r);
  }
  return 0;
}

// ---- sweep ----------------------------------------------------------

struct SweepOptions {
  double rho_min = 0.1;
  double rho_max = 10.0;
  int points = 50;
  bool log_spacing = false;
};

int cmd_sweep(const CommonOptions& opt, const SweepOptions& sweep) {
  if (!(sweep.rho_min > 0.0)) throw CliError{2, "--rho-min: must be > 0"};
  if (!(sweep.rho_max > sweep.rho_min)) {
    throw CliError{2, "--rho-max: must exceed --rho-min"};
  }
  const ann_truncation trunc = truncation_of(opt);

  Sink sink(opt.output_path);
  std::ostream& os = sink.out();
  os << "# schema_version=1\n";
  os << "# rho_min=" << fmt(sweep.rho_min, 17) << ",rho_max="
     << fmt(sweep.rho_max, 17) << ",points=" << sweep.points << ",spacing="
     << (sweep.log_spacing ? "log" : "linear") << "\n";
  os << "# nomes per row: q_tilde=exp(-2*pi*rho), q=exp(-pi/rho)\n";
  os << "rho,crossing";
  for (int n = 1; n <= opt.n_max; ++n) os << ",p" << n;
  os << ",mean_nc\n";

  for (int i = 0; i < sweep.points; ++i) {
    // Endpoints are taken verbatim so they match single-point runs.
    double rho;
    if (i == 0) {
      rho = sweep.rho_min;
    } else if (i == sweep.points - 1) {
      rho = sweep.rho_max;
    } else {
      double t = static_cast<double>(i) / (sweep.points - 1);
      rho = sweep.log_spacing
                ? sweep.rho_min *
                      std::pow(sweep.rho_max / sweep.rho_min, t)
                : sweep.rho_min + t * (sweep.rho_max - sweep.rho_min);
    }
    ModulusPtr m = make_modulus(rho, "sweep point");
    double crossing = 0.0;
    require_ok(ann_crossing_probability(m.get(), ANN_FORM_AUTO, trunc,
                                        &crossing),
               "crossing");
    os << fmt(rho, 17) << "," << fmt(crossing, 17);
    for (int n = 1; n <= opt.n_max; ++n) {
      double p = 0.0;
      require_ok(ann_p_exact(m.get(), n, trunc, &p, nullptr),
                 "P(" + std::to_string(n) + ")");
      os << "," << fmt(p, 17);
    }
    double mean = 0.0;
    require_ok(ann_mean_spanning_clusters(m.get(), trunc, &mean), "E[Nc]");
    os << "," << fmt(mean, 17) << "\n";
  }
  return 0;
}

// ---- mc -------------------------------------------------------------

struct McOptions {
  int cols = 64;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  double confidence = 0.95;
};

int cmd_mc(const CommonOptions& opt, const McOptions& mc) {
  const ann_truncation trunc = truncation_of(opt);

  ann_geometry* graw = nullptr;
  require_ok(ann_geometry_create(opt.rho, mc.cols, &graw), "--rho/--cols");
  GeometryPtr geometry(graw);
  const double rho_eff = ann_geometry_rho_effective(geometry.get());

  ann_trials* traw = nullptr;
  require_ok(ann_run_trials(geometry.get(), mc.trials, mc.seed, mc.workers,
                            &traw),
             "--trials/--workers");
  TrialsPtr trials(traw);

  ann_report* rraw = nullptr;
  require_ok(ann_compare(trials.get(), opt.n_max, mc.confidence, trunc,
                         &rraw),
             "--n-max/--confidence");
  ReportPtr report(rraw);

  // The nome conversion at the realized modulus, for output headers.
  ModulusPtr m = make_modulus(rho_eff, "rho_effective");
  const double q_tilde = ann_modulus_q_tilde(m.get());
  const double q = ann_modulus_q(m.get());

  Sink sink(opt.output_path);
  std::ostream& os = sink.out();
  const int hist_size = ann_trials_histogram_size(trials.get());
  const int rows = ann_report_rows(report.get());

  if (opt.format == "json") {
    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "mc";
    j["rho_request"] = opt.rho;
    j["geometry"] = {{"cols", ann_geometry_cols(geometry.get())},
                     {"rows", ann_geometry_rows(geometry.get())},
                     {"cells", ann_geometry_cells(geometry.get())},
                     {"rho_effective", rho_eff}};
    j["q_tilde"] = q_tilde;
    j["q"] = q;
    j["master_seed"] = mc.seed;
    j["trials"] = ann_trials_count(trials.get());
    j["abs_tol"] = opt.tol;
    ordered_json hist;
    for (int i = 0; i < hist_size; ++i) {
      int nc = 0;
      std::uint64_t count = 0;
      require_ok(ann_trials_histogram_entry(trials.get(), i, &nc, &count),
                 "histogram");
      hist[std::to_string(nc)] = count;
    }
    j["histogram"] = hist;
    ordered_json comparison;
    comparison["confidence"] = mc.confidence;
    comparison["rho_effective"] = ann_report_rho_effective(report.get());
    ordered_json jrows = ordered_json::array();
    for (int i = 0; i < rows; ++i) {
      jrows.push_back(
          {{"name", ann_report_name(report.get(), i)},
           {"exact", ann_report_exact(report.get(), i)},
           {"estimate", ann_report_estimate(report.get(), i)},
           {"half_width", ann_report_half_width(report.get(), i)},
           {"z_score", ann_report_z_score(report.get(), i)},
           {"low_statistics",
            ann_report_low_statistics(report.get(), i) != 0}});
    }
    comparison["rows"] = jrows;
    j["comparison"] = comparison;
    os << j.dump(2) << "\n";
    return 0;
  }

  os << "annulus mc  rho_request=" << fmt(opt.rho, 6) << "  cols="
     << ann_geometry_cols(geometry.get()) << "  rows="
     << ann_geometry_rows(geometry.get()) << "  rho_effective="
     << fmt(rho_eff, 6) << "\n";
  os << "  q_tilde=exp(-2*pi*rho_eff)=" << fmt(q_tilde, 6)
     << "  q=exp(-pi/rho_eff)=" << fmt(q, 6) << "\n";
  os << "  trials=" << ann_trials_count(trials.get()) << "  master_seed="
     << ann_trials_master_seed(trials.get()) << "\n";
  os << "histogram (N_c: count):\n";
  for (int i = 0; i < hist_size; ++i) {
    int nc = 0;
    std::uint64_t count = 0;
    require_ok(ann_trials_histogram_entry(trials.get(), i, &nc, &count),
               "histogram");
    os << "  " << nc << ": " << count << "\n";
  }
  os << "comparison at rho_effective (confidence " << fmt(mc.confidence, 6)
     << "; * marks low statistics):\n";
  os << "  observable  exact        estimate     half_width   z\n";
  for (int i = 0; i < rows; ++i) {
    std::string name = ann_report_name(report.get(), i);
    os << "  " << name << std::string(12 - name.size(), ' ');
    for (double v : {ann_report_exact(report.get(), i),
                     ann_report_estimate(report.get(), i),
                     ann_report_half_width(report.get(), i)}) {
      std::string s = fmt(v, 6);
      os << s << std::string(13 - s.size(), ' ');
    }
    os << fmt(ann_report_z_score(report.get(), i), 6)
       << (ann_report_low_statistics(report.get(), i) ? " *" : "") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical percolation in an annulus: exact crossing "
               "formulas and a triangular-lattice Monte Carlo verifier"};
  app.require_subcommand(1);

  CommonOptions opt;
  SweepOptions sweep;
  McOptions mc;

  auto add_common = [&](CLI::App* sub, bool needs_rho) {
    if (needs_rho) {
      sub->add_option("--rho", opt.rho, "annulus modulus L/l")
          ->required()
          ->check(CLI::PositiveNumber);
    }
    sub->add_option("--n-max", opt.n_max, "largest N_c reported")
        ->check(CLI::Range(1, 62));
    sub->add_option("--tol", opt.tol, "series truncation tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-terms", opt.max_terms, "series term cap")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{100000000}));
    sub->add_option("--output", opt.output_path, "write to file");
  };

  CLI::App* exact = app.add_subcommand("exact", "evaluate exact formulas");
  add_common(exact, true);
  exact->add_option("--form", opt.form,
                    "x1|x2|x3a|x3b|loopgas|auto|all");
  exact->add_option("--format", opt.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  CLI::App* sw = app.add_subcommand("sweep", "CSV curve over a rho grid");
  add_common(sw, false);
  sw->add_option("--rho-min", sweep.rho_min, "grid start")->required();
  sw->add_option("--rho-max", sweep.rho_max, "grid end")->required();
  sw->add_option("--points", sweep.points, "grid size")
      ->check(CLI::Range(2, 1000000));
  sw->add_flag("--log", sweep.log_spacing, "logarithmic spacing");

  CLI::App* sim = app.add_subcommand("mc", "Monte Carlo vs exact");
  add_common(sim, true);
  sim->add_option("--cols", mc.cols, "lattice columns (even, >= 4)")
      ->check(CLI::Range(4, 1000000));
  sim->add_option("--trials", mc.trials, "number of trials")
      ->check(CLI::Range(std::uint64_t{1},
                         std::uint64_t{1} << 62));
  sim->add_option("--seed", mc.seed, "master seed");
  sim->add_option("--workers", mc.workers, "worker threads")
      ->envname("ANNULUS_WORKERS")
      ->check(CLI::Range(1, 1024));
  sim->add_option("--confidence", mc.confidence, "interval confidence");
  sim->add_option("--format", opt.format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(exact)) return cmd_exact(opt);
    if (app.got_subcommand(sw)) return cmd_sweep(opt, sweep);
    return cmd_mc(opt, mc);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 4;
  }
}
