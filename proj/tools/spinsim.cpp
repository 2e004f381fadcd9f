#include "spinsim/io.hpp"
#include "spinsim/montecarlo.hpp"
#include "spinsim/nonlocality.hpp"
#include "spinsim/protocols.hpp"
#include "spinsim/tables.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace spinsim;

namespace {

std::string spin_label(SpinValue s) { return s == large_s() ? "inf" : to_string(s); }

std::string direction_text(const UnitVector3& v) {
  return format_number(v.x()) + "," + format_number(v.y()) + "," + format_number(v.z());
}

// Rows go out either as CSV or as one JSON object per line; JSON lines also carry the
// command, version, seed and the echoed configuration.
class Emitter {
public:
  using Field = std::pair<std::string, CsvWriter::Cell>;

  Emitter(std::ostream& out, std::string format, std::string command, std::uint64_t seed,
          std::vector<std::pair<std::string, std::string>> config)
      : out_(out), csv_(out), format_(std::move(format)), command_(std::move(command)), seed_(seed),
        config_(std::move(config)) {}

  void row(const std::vector<Field>& fields) {
    if (format_ == "csv") {
      if (!header_done_) {
        std::vector<std::string> cols;
        for (const auto& f : fields) cols.push_back(f.first);
        csv_.header(cols);
        header_done_ = true;
      }
      std::vector<CsvWriter::Cell> cells;
      for (const auto& f : fields) cells.push_back(f.second);
      csv_.row(cells);
      return;
    }
    JsonRecord r;
    r.add("command", command_).add("version", std::string(kVersion)).add("seed", seed_);
    JsonRecord cfg;
    for (const auto& [k, v] : config_) cfg.add(k, v);
    r.add_raw("config", cfg.str());
    for (const auto& [k, v] : fields) {
      if (const auto* s = std::get_if<std::string>(&v))
        r.add(k, *s);
      else if (const auto* d = std::get_if<double>(&v))
        r.add(k, *d);
      else
        r.add(k, std::get<std::int64_t>(v));
    }
    out_ << r.str() << '\n';
  }

private:
  std::ostream& out_;
  CsvWriter csv_;
  std::string format_;
  std::string command_;
  std::uint64_t seed_;
  std::vector<std::pair<std::string, std::string>> config_;
  bool header_done_ = false;
};

struct Common {
  std::string format = "csv";
  std::string out;
  int workers = 0;
  std::uint64_t seed = kDefaultSeed;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed) {
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--workers", c.workers, "worker threads, 0 = available parallelism")->check(CLI::NonNegativeNumber);
  if (with_seed) cmd->add_option("--seed", c.seed, "64-bit seed");
}

// Opens --out or falls back to stdout.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

struct SimulateArgs {
  std::string protocol = "toner-bacon";
  std::string s = "1/2";
  int P = 0, n = 0;
  double gamma = std::nan("");
  std::string a = "0,0,1", b = "1,0,0";
  std::int64_t rounds = 1000000;
};

int cmd_simulate(const SimulateArgs& args, const Common& c) {
  ProtocolKind kind;
  SpinValue s = parse_spin(args.s);
  if (args.protocol == "toner-bacon") {
    kind = TonerBacon{};
  } else if (args.protocol == "binary") {
    kind = BinaryRecursive{};
  } else if (args.protocol == "padic") {
    if (args.P < 2 || args.n < 1) throw UsageError("padic needs --P >= 2 and --n >= 1");
    kind = PAdicComposite{args.P, args.n};
  } else if (args.protocol == "nonmax") {
    if (!std::isfinite(args.gamma)) throw UsageError("nonmax needs --gamma");
    kind = NonMaxEntangled{args.gamma};
  } else {
    throw UsageError("unknown protocol '" + args.protocol + "'");
  }
  s = protocol_spin(kind, s);
  const UnitVector3 a = parse_direction(args.a), b = parse_direction(args.b);
  validate(kind, s, a, b);

  const auto est = estimate(kind, s, a, b, args.rounds, c.seed, c.workers);
  const bool nonmax = std::holds_alternative<NonMaxEntangled>(kind);
  double exact_a = 0, exact_ab = 0;
  if (nonmax) {
    exact_a = a.z() * std::cos(2 * args.gamma);
    exact_ab = std::sin(2 * args.gamma) * a.dot(b);
  } else {
    exact_ab = singlet_correlation_closed_form(s, a, b);
  }
  const auto ca = compare_to_oracle(est, exact_a, 4.0, Moment::alpha);
  const auto cb = compare_to_oracle(est, 0.0, 4.0, Moment::beta);
  const auto cab = compare_to_oracle(est, exact_ab, 4.0, Moment::alphabeta);
  const bool pass = ca.pass && cb.pass && cab.pass;

  std::vector<std::pair<std::string, std::string>> config{
      {"protocol", args.protocol}, {"s", to_string(s)}, {"a", direction_text(a)}, {"b", direction_text(b)},
      {"rounds", std::to_string(args.rounds)}};
  if (std::holds_alternative<PAdicComposite>(kind)) {
    config.emplace_back("P", std::to_string(args.P));
    config.emplace_back("n", std::to_string(args.n));
  }
  if (nonmax) config.emplace_back("gamma", format_number(args.gamma));

  Output out(c.out);
  Emitter em(out.stream(), c.format, "simulate", c.seed, config);
  em.row({{"protocol", protocol_name(kind)},
          {"s", to_string(s)},
          {"n_rounds", est.n_rounds},
          {"cbits_per_round", std::int64_t(est.cbits_per_round)},
          {"mean_alpha", est.mean_alpha},
          {"stderr_alpha", est.stderr_alpha},
          {"exact_alpha", exact_a},
          {"mean_beta", est.mean_beta},
          {"stderr_beta", est.stderr_beta},
          {"exact_beta", 0.0},
          {"mean_alphabeta", est.mean_alphabeta},
          {"stderr_alphabeta", est.stderr_alphabeta},
          {"exact_alphabeta", exact_ab},
          {"z_alphabeta", cab.z_score},
          {"uniformity_p_alpha", nonmax ? std::nan("") : uniformity_test(est.marginal_hist_alpha)},
          {"uniformity_p_beta", uniformity_test(est.marginal_hist_beta)},
          {"pass", std::int64_t(pass)}});
  return pass ? 0 : 1;
}

int cmd_tables(int table, const Common& c) {
  Output out(c.out);
  Emitter em(out.stream(), c.format, "tables", c.seed, {{"table", std::to_string(table)}});
  auto spins = table_spins();
  spins.push_back(large_s());
  auto ref_or_nan = [](std::optional<double> r) { return r ? *r : std::nan(""); };
  for (const auto& s : spins) {
    const int key = s.twice_s();
    switch (table) {
    case 1: {
      const auto w = table1_windows(s);
      const auto ref = TableReference::xi_windows(key);
      for (std::size_t i = 0; i < w.size(); ++i) {
        const bool has = ref && i < ref->size();
        const double rlo = has ? (*ref)[i].lo : std::nan(""), rhi = has ? (*ref)[i].hi : std::nan("");
        em.row({{"s", spin_label(s)},
                {"window", std::int64_t(i + 1)},
                {"xi_lo", w[i].lo},
                {"xi_hi", w[i].hi},
                {"reference_lo", rlo},
                {"reference_hi", rhi},
                {"abs_diff_lo", std::abs(w[i].lo - rlo)},
                {"abs_diff_hi", std::abs(w[i].hi - rhi)}});
      }
      break;
    }
    case 2: {
      const double v = table2_eta2(s), r = ref_or_nan(TableReference::eta2(key));
      em.row({{"s", spin_label(s)}, {"eta2", v}, {"reference", r}, {"abs_diff", std::abs(v - r)}});
      break;
    }
    case 3: {
      const double v = table3_threshold(s), r = ref_or_nan(TableReference::noise_threshold(key));
      em.row({{"s", spin_label(s)}, {"f_threshold", v}, {"reference", r}, {"abs_diff", std::abs(v - r)}});
      break;
    }
    case 4: {
      const double v = table4_eta3(s, c.workers).eta3, r = ref_or_nan(TableReference::eta3(key));
      em.row({{"s", spin_label(s)}, {"eta3", v}, {"reference", r}, {"abs_diff", std::abs(v - r)}});
      break;
    }
    }
  }
  return 0;
}

int cmd_staircase(const std::string& lo, const std::string& hi, const Common& c) {
  const SpinValue a = parse_spin(lo), b = parse_spin(hi);
  if (b < a) throw UsageError("--s-max is below --s-min");
  Output out(c.out);
  Emitter em(out.stream(), c.format, "staircase", c.seed, {{"s_min", to_string(a)}, {"s_max", to_string(b)}});
  for (int t = a.twice_s(); t <= b.twice_s(); ++t) {
    const auto r = staircase_row(SpinValue(t));
    em.row({{"s", to_string(r.s)},
            {"protocol1_cbits", std::int64_t(r.protocol1_cbits)},
            {"protocol2_cbits", std::int64_t(r.protocol2_cbits)},
            {"best_P", std::int64_t(r.best_P)},
            {"best_n", std::int64_t(r.best_n)}});
  }
  return 0;
}

int cmd_nonlocality(int points, const std::vector<double>& explicit_grid, const Common& c) {
  std::vector<double> grid = explicit_grid;
  if (grid.empty()) {
    if (points < 2) throw UsageError("--points must be at least 2");
    for (int i = 0; i < points; ++i) grid.push_back(double(i) / (points - 1));
  }
  for (double x : grid)
    if (!(x >= 0 && x <= 1)) throw UsageError("cos(beta) values must lie in [0, 1]");
  std::string echo;
  for (double x : grid) echo += (echo.empty() ? "" : ",") + format_number(x);
  Output out(c.out);
  Emitter em(out.stream(), c.format, "nonlocality", c.seed, {{"cos_beta", echo}});
  for (double x : grid) {
    const double beta = std::acos(x);
    // Clip the search noise around zero so the endpoints read as exact zeros.
    auto clip = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    em.row({{"cos_beta", x},
            {"hardy_max", clip(hardy_max_at(beta).value)},
            {"cabello_max", clip(cabello_max_at(beta, c.workers).value)},
            {"cabello3_max", clip(cabello3_max_at(beta, c.workers).value)}});
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical simulation of spin-s singlet correlations and successive-measurement inequalities"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one protocol against the exact correlation");
  simulate->add_option("--protocol", sim.protocol)->check(CLI::IsMember({"toner-bacon", "binary", "padic", "nonmax"}));
  simulate->add_option("--s", sim.s, "spin, e.g. 5/2");
  simulate->add_option("--P", sim.P, "prime-power base for padic");
  simulate->add_option("--n", sim.n, "exponent for padic");
  simulate->add_option("--gamma", sim.gamma, "state angle for nonmax");
  simulate->add_option("--a", sim.a, "Alice direction x,y,z");
  simulate->add_option("--b", sim.b, "Bob direction x,y,z");
  simulate->add_option("--rounds", sim.rounds)->check(CLI::PositiveNumber);
  add_common(simulate, common, true);

  int table = 0;
  auto* tables = app.add_subcommand("tables", "Recompute a results table with reference values");
  tables->add_option("--table", table)->required()->check(CLI::Range(1, 4));
  add_common(tables, common, false);

  std::string s_min = "1/2", s_max = "6";
  auto* staircase = app.add_subcommand("staircase", "cbit cost of both recursive protocols over a range of spins");
  staircase->add_option("--s-min", s_min);
  staircase->add_option("--s-max", s_max);
  add_common(staircase, common, false);

  int points = 21;
  std::vector<double> cos_grid;
  auto* nonlocality = app.add_subcommand("nonlocality", "Hardy and Cabello maxima over cos(beta)");
  nonlocality->add_option("--points", points, "evenly spaced cos(beta) values on [0, 1]");
  nonlocality->add_option("--cos-beta", cos_grid, "explicit cos(beta) values")->delimiter(',');
  add_common(nonlocality, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return cmd_simulate(sim, common);
    if (*tables) return cmd_tables(table, common);
    if (*staircase) return cmd_staircase(s_min, s_max, common);
    if (*nonlocality) return cmd_nonlocality(points, cos_grid, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedRegime& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
