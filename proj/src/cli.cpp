#include <sepmix/cli.hpp>

#include <sepmix/chain.hpp>
#include <sepmix/combinatorics.hpp>
#include <sepmix/product_walks.hpp>
#include <sepmix/profiles.hpp>
#include <sepmix/riffle.hpp>
#include <sepmix/transpositions.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sepmix::cli {

namespace {

constexpr int kOk = 0;
constexpr int kToleranceFailure = 1;
constexpr int kUsageError = 2;
constexpr int kNumericError = 3;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Cell {
  std::string text;
  bool numeric = false;
};

Cell num(double v) { return {format_number(v), std::isfinite(v)}; }
Cell num(long v) { return {std::to_string(v), true}; }
Cell num(unsigned long long v) { return {std::to_string(v), true}; }
Cell str(std::string s) { return {std::move(s), false}; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

void write_table(const Table& table, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << "[\n";
    for (size_t r = 0; r < table.rows.size(); ++r) {
      out << "  {";
      for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ", ";
        const Cell& cell = table.rows[r][c];
        out << '"' << json_escape(table.columns[c]) << "\": ";
        if (cell.numeric)
          out << cell.text;
        else
          out << '"' << json_escape(cell.text) << '"';
      }
      out << (r + 1 < table.rows.size() ? "},\n" : "}\n");
    }
    out << "]\n";
    return;
  }
  for (size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << csv_escape(table.columns[c]);
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(row[c].text);
    out << "\n";
  }
}

// Options shared by every subcommand.
struct CommonOpts {
  std::string format = "csv";
  std::string output;
  bool strict = false;
};

struct GridOpts {
  double cmin = -2, cmax = 2, cstep = 1;
  std::vector<double> clist;
  std::vector<double> grid() const {
    if (!clist.empty()) return clist;
    if (cstep <= 0) throw validation_error("c grid: step must be positive");
    std::vector<double> g;
    for (double c = cmin; c <= cmax + 1e-12; c += cstep) g.push_back(c);
    if (g.empty()) throw validation_error("c grid: empty");
    return g;
  }
};

void attach_common(CLI::App* sub, CommonOpts& common) {
  sub->add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output", common.output, "write the table to this path");
  sub->add_flag("--strict", common.strict, "treat numeric warnings as failures");
}

void attach_grid(CLI::App* sub, GridOpts& grid) {
  sub->add_option("--cmin", grid.cmin, "leftmost c");
  sub->add_option("--cmax", grid.cmax, "rightmost c");
  sub->add_option("--cstep", grid.cstep, "c increment");
  sub->add_option("--clist", grid.clist, "explicit comma-separated c grid")
      ->delimiter(',');
}

int emit(const Table& table, const CommonOpts& common, std::ostream& out,
         std::ostream& err, int status) {
  if (common.output.empty()) {
    write_table(table, common.format, out);
    return status;
  }
  std::ofstream file(common.output);
  if (!file) {
    err << "error: cannot open output file " << common.output << "\n";
    return kUsageError;
  }
  write_table(table, common.format, file);
  return status;
}

BigRat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    return make_rat(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return BigRat(BigInt(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  size_t places = text.size() - dot - 1;
  BigInt den = 1;
  for (size_t i = 0; i < places; ++i) den *= 10;
  return make_rat(BigInt(digits), den);
}

PileSizeLaw parse_law(int n, const std::string& spec) {
  if (spec == "uniform") return PileSizeLaw::uniform(n);
  if (spec.rfind("delta:", 0) == 0)
    return PileSizeLaw::delta(n, std::stoi(spec.substr(6)));
  std::vector<BigRat> mass;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) mass.push_back(parse_rational(item));
  if (static_cast<int>(mass.size()) != n)
    throw validation_error("law: expected " + std::to_string(n) + " masses");
  return PileSizeLaw::from_masses(std::move(mass));
}

// ---------------------------------------------------------------- commands

struct RiffleExactCmd {
  int n = 4;
  std::string law = "uniform";
  long tmin = 0, tmax = 10;
  std::string mode = "exact";
  bool oracle = false;
  double tol = -1;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    auto f = parse_law(n, law);
    std::optional<chain::ChainKernel> kernel;
    if (oracle) kernel = chain::riffle_kernel(f);
    Table table;
    table.columns = {"n", "f", "t", "s"};
    if (mode == "exact") table.columns.push_back("s_exact");
    if (oracle) {
      table.columns.push_back("oracle");
      table.columns.push_back("abs_diff");
    }
    bool tol_failed = false, clamped_any = false;
    for (long t = tmin; t <= tmax; ++t) {
      std::vector<Cell> row{num(static_cast<long>(n)), str(law), num(t)};
      double value;
      std::string exact_text;
      if (mode == "exact") {
        BigRat s = riffle::exact_separation(f, static_cast<unsigned>(t));
        value = to_double(s);
        exact_text = rat_string(s);
      } else {
        auto fv = riffle::exact_separation_f(f, static_cast<unsigned>(t));
        value = fv.value;
        clamped_any |= fv.clamped;
      }
      row.push_back(num(value));
      if (mode == "exact") row.push_back(str(exact_text));
      if (oracle) {
        auto brute = chain::separation_discrete_exact(*kernel, static_cast<unsigned>(t), 0);
        row.push_back(num(to_double(brute.value)));
        double diff = std::abs(to_double(brute.value) - value);
        row.push_back(num(diff));
        if (tol >= 0 && diff > tol) tol_failed = true;
      }
      table.add(std::move(row));
    }
    if (clamped_any) err << "warning: float-mode separation was clamped to [0,1]\n";
    int status = tol_failed ? kToleranceFailure
                            : (clamped_any && common.strict ? kNumericError : kOk);
    return emit(table, common, out, err, status);
  }
};

struct RiffleMcCmd {
  int n = 52;
  std::string law = "uniform";
  std::string regime = "auto";
  GridOpts grid;
  uint64_t trials = 10000;
  uint64_t seed = 0;
  int workers = 0;
  double tol = -1;
  std::string emit_times;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    auto f = parse_law(n, law);
    std::string effective = regime;
    if (effective == "auto") effective = (law == "uniform") ? "uniform" : "concentrated";
    double q2d = to_double(riffle::q2(f));
    if (effective == "concentrated")
      err << "note: concentration diagnostic Var(K/n) ln n = "
          << format_number(riffle::variance_diagnostic(f)) << "\n";
    auto cs = grid.grid();
    if (!emit_times.empty() && cs.size() != 1)
      throw validation_error("--emit-times requires a single-point c grid");
    Table table;
    table.columns = {"n",         "c",         "t",        "c_eff",
                     "estimate",  "std_error", "reference", "abs_diff"};
    bool tol_failed = false;
    for (double c : cs) {
      long t = effective == "uniform" ? riffle::uniform_driven_time(n, c)
                                      : riffle::dense_time(n, q2d, c);
      // The reference is evaluated at the window position the integer time
      // actually realizes; at dense scales one step is a sizable part of c.
      double c_eff = effective == "uniform" ? riffle::uniform_driven_effective_c(n, t)
                                            : riffle::dense_effective_c(n, q2d, t);
      auto est = riffle::simulate_sst(f, t, trials, seed, workers);
      double ref = effective == "uniform" ? profiles::gaussian_profile(c_eff)
                                          : profiles::half_poisson(c_eff);
      double diff = std::abs(est.estimate - ref);
      if (tol >= 0 && diff > tol) tol_failed = true;
      table.add({num(static_cast<long>(n)), num(c), num(t), num(c_eff),
                 num(est.estimate), num(est.std_error), num(ref), num(diff)});
      if (!emit_times.empty()) {
        auto times = riffle::simulate_sst_times(f, t, trials, seed, workers);
        std::ofstream file(emit_times, std::ios::binary);
        if (!file) throw validation_error("cannot open " + emit_times);
        for (uint32_t v : times) {
          unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                                    static_cast<unsigned char>((v >> 8) & 0xff),
                                    static_cast<unsigned char>((v >> 16) & 0xff),
                                    static_cast<unsigned char>((v >> 24) & 0xff)};
          file.write(reinterpret_cast<char*>(bytes), 4);
        }
      }
    }
    return emit(table, common, out, err, tol_failed ? kToleranceFailure : kOk);
  }
};

struct KtopCmd {
  int n = 52, k = 1;
  std::string regime = "auto";
  GridOpts grid;
  uint64_t trials = 10000;
  uint64_t seed = 0;
  int workers = 0;
  double tol = -1;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    auto f = PileSizeLaw::delta(n, k);
    std::string effective = regime;
    if (effective == "auto")
      effective = (k * std::log(static_cast<double>(n)) / n <= 0.2) ? "sparse" : "dense";
    double q2d = to_double(riffle::q2(f));
    Table table;
    table.columns = {"n",     "k",        "regime",    "c",         "t",
                     "c_eff", "estimate", "std_error", "reference", "abs_diff"};
    bool tol_failed = false;
    for (double c : grid.grid()) {
      long t = effective == "sparse" ? riffle::sparse_time(n, k, c)
                                     : riffle::dense_time(n, q2d, c);
      double c_eff = effective == "sparse" ? riffle::sparse_effective_c(n, k, t)
                                           : riffle::dense_effective_c(n, q2d, t);
      auto est = riffle::simulate_sst(f, t, trials, seed, workers);
      double ref = effective == "sparse" ? profiles::sparse_ktop(c_eff)
                                         : profiles::half_poisson(c_eff);
      double diff = std::abs(est.estimate - ref);
      if (tol >= 0 && diff > tol) tol_failed = true;
      table.add({num(static_cast<long>(n)), num(static_cast<long>(k)), str(effective),
                 num(c), num(t), num(c_eff), num(est.estimate), num(est.std_error),
                 num(ref), num(diff)});
    }
    (void)err;
    return emit(table, common, out, err, tol_failed ? kToleranceFailure : kOk);
  }
};

struct RtProfileCmd {
  int n = 2000;
  GridOpts grid;
  uint64_t trials = 0;
  uint64_t seed = 0;
  int workers = 0;
  double tol = -1;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    Table table;
    table.columns = {"n", "c", "m", "lower_bound", "gumbel", "abs_diff", "condition"};
    if (trials > 0) {
      for (const char* col : {"p_u_ge2", "u_std_error", "sparse_ktop", "u_abs_diff"})
        table.columns.push_back(col);
    }
    bool tol_failed = false, unreliable_any = false;
    for (double c : grid.grid()) {
      long m = rt::m_time(n, c);
      auto ratio = rt::ncycle_ratio(n, m);
      if (!ratio.reliable) {
        unreliable_any = true;
        err << "warning: n-cycle sum poorly conditioned at c = " << format_number(c)
            << " (condition " << format_number(ratio.condition) << ")\n";
      }
      double lb = 1.0 - ratio.value;
      double ref = profiles::gumbel(c);
      double diff = std::abs(lb - ref);
      if (tol >= 0 && diff > tol) tol_failed = true;
      std::vector<Cell> row{num(static_cast<long>(n)), num(c),   num(m),
                            num(lb),                   num(ref), num(diff),
                            num(ratio.condition)};
      if (trials > 0) {
        auto sim = rt::simulate_touched_labels(n, m, trials, seed, workers);
        double uref = profiles::sparse_ktop(c);
        double udiff = std::abs(sim.p_ge2 - uref);
        if (tol >= 0 && udiff > tol) tol_failed = true;
        row.push_back(num(sim.p_ge2));
        row.push_back(num(sim.se_ge2));
        row.push_back(num(uref));
        row.push_back(num(udiff));
      }
      table.add(std::move(row));
    }
    int status = tol_failed ? kToleranceFailure
                            : (unreliable_any && common.strict ? kNumericError : kOk);
    return emit(table, common, out, err, status);
  }
};

struct RtExactCmd {
  int n = 4;
  long mmin = 0, mmax = 6;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    auto kernel = chain::random_transpositions_kernel(n);
    std::vector<BigRat> row_dist(kernel.size(), BigRat(0));
    row_dist[0] = 1;
    Table table;
    table.columns = {"n",      "m",          "separation", "separation_exact",
                     "oracle", "oracle_exact", "abs_diff",   "argmin_class"};
    bool mismatch = false;
    for (long m = 0; m <= mmax; ++m) {
      if (m > 0) chain::evolve_row_exact(kernel, row_dist);
      if (m < mmin) continue;
      auto small = rt::exact_separation_small(n, m);
      BigRat best = row_dist[0] / kernel.pi(0);
      for (size_t y = 1; y < row_dist.size(); ++y) {
        BigRat r = row_dist[y] / kernel.pi(y);
        if (r < best) best = r;
      }
      BigRat brute = BigRat(1) - best;
      BigRat diff = small.separation - brute;
      if (diff != 0) mismatch = true;
      table.add({num(static_cast<long>(n)), num(m), num(to_double(small.separation)),
                 str(rat_string(small.separation)), num(to_double(brute)),
                 str(rat_string(brute)), str(rat_string(diff)),
                 str(small.argmin_class.to_string())});
    }
    (void)err;
    return emit(table, common, out, err, mismatch ? kToleranceFailure : kOk);
  }
};

struct HypercubeCmd {
  int n = 1000;
  double b = 0;
  double bprime = 0;
  std::string variant = "first";
  std::vector<double> rates;
  GridOpts grid;
  CommonOpts common;

  int run_rates(std::ostream& out, std::ostream& err) const {
    walks::RateVector rv(rates);
    Table table;
    table.columns = {"n", "c", "t", "s", "gumbel", "abs_diff", "hypothesis_sup"};
    for (double c : grid.grid()) {
      auto check = walks::gumbel_profile_check(rv, c);
      table.add({num(static_cast<long>(rv.n())), num(c), num(check.time),
                 num(check.value), num(profiles::gumbel(c)),
                 num(std::abs(check.value - profiles::gumbel(c))),
                 num(check.hypothesis_sup)});
    }
    return emit(table, common, out, err, kOk);
  }

  int run(std::ostream& out, std::ostream& err) const {
    if (!rates.empty()) return run_rates(out, err);
    Table table;
    if (b <= 0) {
      table.columns = {"n", "c", "t", "s_uniform"};
      auto uniform = walks::RateVector::uniform(n);
      for (double c : grid.grid()) {
        double t = n * (std::log(static_cast<double>(n)) + c);
        table.add({num(static_cast<long>(n)), num(c), num(t),
                   num(walks::hypercube_separation(uniform, t))});
      }
      return emit(table, common, out, err, kOk);
    }
    if (variant == "first") {
      auto uniform = walks::RateVector::uniform(n);
      auto perturbed = walks::RateVector::first_coordinate_perturbed(n, b);
      double a_n = 1.0 / n - b / (n - 1.0);
      table.columns = {"n",   "c",  "t",  "s_uniform",      "tbar",          "s_perturbed",
                       "gap", "s0", "s1", "cont_bounded", "cont_vanishing"};
      for (double c : grid.grid()) {
        double t = n * (std::log(static_cast<double>(n)) + c);
        double tbar = (std::log(n - 1.0) + c) / a_n;
        double su = walks::hypercube_separation(uniform, t);
        double sp = walks::hypercube_separation(perturbed, tbar);
        auto sums = walks::perturbed_comparison_sums(2, n, b, c);
        auto cont = walks::hypercube_continuity_first_coordinate(n, b, c);
        table.add({num(static_cast<long>(n)), num(c), num(t), num(su), num(tbar),
                   num(sp), num(std::abs(su - sp)), num(sums.s0), num(sums.s1),
                   num(cont.bounded_part), num(cont.vanishing_part)});
      }
      return emit(table, common, out, err, kOk);
    }
    if (variant == "half") {
      double b2 = bprime > 0 ? bprime : b;
      table.columns = {"n",   "c",     "t_b",  "s_b",          "t_bprime",     "s_bprime",
                       "gap", "bound", "cont_bounded", "cont_vanishing"};
      for (double c : grid.grid()) {
        double big_n = n / 2.0;
        double tb = n / (1 - 2 * b) * (std::log(big_n) + c);
        double tb2 = n / (1 - 2 * b2) * (std::log(big_n) + c);
        double sb = walks::hypercube_separation(walks::RateVector::half_split(n, b), tb);
        double sb2 =
            walks::hypercube_separation(walks::RateVector::half_split(n, b2), tb2);
        auto cont = walks::hypercube_continuity_half_split(n, b, c);
        table.add({num(static_cast<long>(n)), num(c), num(tb), num(sb), num(tb2),
                   num(sb2), num(std::abs(sb - sb2)),
                   num(walks::halfsplit_comparison_bound(n, b, b2, c)),
                   num(cont.bounded_part), num(cont.vanishing_part)});
      }
      return emit(table, common, out, err, kOk);
    }
    err << "error: unknown hypercube variant\n";
    return kUsageError;
  }
};

struct ZmnCmd {
  int m = 3;
  int n = 1000;
  double b = 0;
  GridOpts grid;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    Table table;
    table.columns = {"m", "n", "c", "t", "s_uniform"};
    if (b > 0)
      for (const char* col : {"s0", "s1", "s0_plus_s1"}) table.columns.push_back(col);
    for (double c : grid.grid()) {
      double t = static_cast<double>(n) * (std::log(static_cast<double>(n)) + c);
      std::vector<Cell> row{num(static_cast<long>(m)), num(static_cast<long>(n)), num(c),
                            num(t), num(walks::zmn_separation_uniform(m, n, t))};
      if (b > 0) {
        auto sums = walks::perturbed_comparison_sums(m, n, b, c);
        row.push_back(num(sums.s0));
        row.push_back(num(sums.s1));
        row.push_back(num(sums.s0 + sums.s1));
      }
      table.add(std::move(row));
    }
    (void)err;
    return emit(table, common, out, err, kOk);
  }
};

struct BlCmd {
  long long n = 1000;
  double bound_exponent = 2.0;
  GridOpts grid;
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    Table table;
    table.columns = {"n", "c", "B", "dominating_bound", "bounded"};
    bool failed = false;
    for (double c : grid.grid()) {
      double value = walks::bl_continuity_sum(n, c);
      double bound = walks::bl_dominating_bound(n, bound_exponent);
      bool ok = std::isfinite(value) && value <= bound;
      if (!ok) failed = true;
      table.add({num(static_cast<unsigned long long>(n)), num(c), num(value), num(bound),
                 str(ok ? "yes" : "no")});
    }
    (void)err;
    return emit(table, common, out, err, failed ? kToleranceFailure : kOk);
  }
};

struct BoundsCmd {
  std::string family = "weight";
  std::vector<long long> ns{10, 14, 18, 22, 26, 30};
  double c = 0;
  int m = 3;
  double b = 0.5, bprime = 0.2;
  double eps = -1;  // <0: family default (1/n! where applicable)
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    Table table;
    table.columns = {"family", "n", "c", "value", "aux"};
    for (long long n : ns) {
      double value = 0, aux = 0;
      if (family == "weight") {
        value = rt::spectral_weight_sum(static_cast<int>(n), c, false);
      } else if (family == "biased") {
        auto bound = eps >= 0
                         ? rt::biased_comparison_bound(static_cast<int>(n), c, eps)
                         : rt::biased_comparison_bound(static_cast<int>(n), c);
        value = bound.bound;
        aux = bound.delta_max;
      } else if (family == "central") {
        double e = eps >= 0 ? eps : std::exp(-std::lgamma(static_cast<double>(n) + 1));
        value = rt::central_perturbation_bound(static_cast<int>(n), c, e);
      } else if (family == "zmn") {
        auto sums = walks::perturbed_comparison_sums(m, static_cast<int>(n), b, c);
        value = sums.s0 + sums.s1;
        aux = sums.s0;
      } else if (family == "halfsplit") {
        value = walks::halfsplit_comparison_bound(static_cast<int>(n), b, bprime, c);
      } else {
        err << "error: unknown bounds family\n";
        return kUsageError;
      }
      table.add({str(family), num(static_cast<unsigned long long>(n)), num(c), num(value),
                 num(aux)});
    }
    return emit(table, common, out, err, kOk);
  }
};

struct ConstantsCmd {
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    auto k = profiles::gaussian_window_constants();
    Table table;
    table.columns = {"name", "value", "reference", "abs_diff", "status"};
    bool failed = false;
    auto row = [&](const std::string& name, double value, double ref, double tol) {
      double diff = std::abs(value - ref);
      bool ok = diff <= tol;
      failed |= !ok;
      table.add({str(name), num(value), num(ref), num(diff), str(ok ? "pass" : "fail")});
    };
    row("a", k.a, 4.65979, 1e-4);
    row("b", k.b, 1.08247, 1e-4);
    row("mu_quadrature", k.mu_quadrature, k.mu, 1e-8);
    row("v_quadrature", k.v_quadrature, k.v, 1e-8);
    table.add({str("catalan"), num(k.catalan), str(""), str(""), str("pass")});
    (void)err;
    return emit(table, common, out, err, failed ? kToleranceFailure : kOk);
  }
};

struct SelftestCmd {
  CommonOpts common;

  int run(std::ostream& out, std::ostream& err) const {
    Table table;
    table.columns = {"check", "status", "detail"};
    bool failed = false;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
      failed |= !ok;
      table.add({str(name), str(ok ? "pass" : "fail"), str(detail)});
    };

    {
      bool ok = true;
      for (int n = 2; n <= 4 && ok; ++n) {
        auto f = PileSizeLaw::uniform(n);
        auto kernel = chain::riffle_kernel(f);
        for (unsigned t = 0; t <= 5 && ok; ++t)
          ok = riffle::exact_separation(f, t) ==
               chain::separation_discrete_exact(kernel, t, 0).value;
      }
      report("riffle_formula_vs_kernel", ok, "n <= 4, t <= 5, uniform law");
    }
    {
      bool ok = true;
      for (int n = 3; n <= 4 && ok; ++n) {
        auto kernel = chain::random_transpositions_kernel(n);
        for (long m = 0; m <= 6 && ok; ++m)
          ok = rt::exact_separation_small(n, m).separation ==
               chain::separation_discrete_exact(kernel, static_cast<unsigned>(m), 0).value;
      }
      report("transpositions_inversion_vs_kernel", ok, "n <= 4, m <= 6");
    }
    {
      auto rates = walks::RateVector::uniform(4);
      auto kernel = walks::hypercube_kernel(rates);
      double worst = 0;
      for (double t : {0.5, 2.0, 8.0})
        worst = std::max(worst, std::abs(walks::hypercube_separation(rates, t) -
                                         chain::separation_continuous(kernel, t, 0).value));
      report("hypercube_product_vs_uniformization", worst <= 1e-9,
             "max diff " + format_number(worst));
    }
    {
      auto kernel = walks::zmn_kernel(3, walks::RateVector::uniform(3));
      double worst = 0;
      for (double t : {0.5, 2.0, 4.0})
        worst = std::max(worst, std::abs(walks::zmn_separation_uniform(3, 3, t) -
                                         chain::separation_continuous(kernel, t, 0).value));
      report("zmn_closed_form_vs_uniformization", worst <= 1e-9,
             "max diff " + format_number(worst));
    }
    {
      auto kernel = walks::bl_kernel(6);
      auto spec = chain::jacobi_spectrum(kernel);
      auto closed = walks::bl_spectrum(6);
      double worst = 0;
      for (size_t j = 0; j < closed.gap.size(); ++j)
        worst = std::max(worst, std::abs(1.0 - spec.eigenvalue(j) - closed.gap[j]));
      report("bl_spectrum_vs_jacobi", worst <= 1e-10, "max gap diff " + format_number(worst));
    }
    {
      auto rates = walks::RateVector::uniform(6);
      double alpha = 0.25, worst = 0;
      for (double t : {1.0, 6.0}) {
        double lazy = 1.0;
        for (double a : rates.rates())
          lazy *= -std::expm1(-(alpha * a) * walks::lazy_time_map(t, alpha));
        worst = std::max(worst,
                         std::abs(walks::hypercube_separation(rates, t) - (1 - lazy)));
      }
      report("lazy_time_identity", worst <= 1e-12, "max diff " + format_number(worst));
    }
    {
      bool ok = true;
      std::string detail = "verified to 1e-8";
      try {
        auto k = profiles::gaussian_window_constants();
        ok = std::abs(k.a - 4.65979) <= 1e-4 && std::abs(k.b - 1.08247) <= 1e-4;
      } catch (const numeric_error& e) {
        ok = false;
        detail = e.what();
      }
      report("gaussian_window_constants", ok, detail);
    }
    (void)err;
    return emit(table, common, out, err, failed ? kToleranceFailure : kOk);
  }
};

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"separation-distance profiles for shuffles and product walks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");

  RiffleExactCmd riffle_exact;
  auto* re = app.add_subcommand("riffle-exact", "exact riffle separation table");
  re->add_option("--n", riffle_exact.n, "deck size")->required();
  re->add_option("--f", riffle_exact.law, "pile-size law: uniform, delta:k, or masses");
  re->add_option("--tmin", riffle_exact.tmin, "first time");
  re->add_option("--tmax", riffle_exact.tmax, "last time");
  re->add_option("--mode", riffle_exact.mode, "arithmetic mode")
      ->check(CLI::IsMember({"exact", "float"}));
  re->add_flag("--oracle", riffle_exact.oracle, "add brute-force kernel columns (n <= 6)");
  re->add_option("--tol", riffle_exact.tol, "fail when |oracle - s| exceeds this");
  attach_common(re, riffle_exact.common);

  RiffleMcCmd riffle_mc;
  auto* rm = app.add_subcommand("riffle-mc", "Monte Carlo riffle profile");
  rm->add_option("--n", riffle_mc.n, "deck size")->required();
  rm->add_option("--f", riffle_mc.law, "pile-size law");
  rm->add_option("--regime", riffle_mc.regime, "time scale: auto, uniform, concentrated")
      ->check(CLI::IsMember({"auto", "uniform", "concentrated"}));
  rm->add_option("--trials", riffle_mc.trials, "Monte Carlo trials");
  rm->add_option("--seed", riffle_mc.seed, "master seed");
  rm->add_option("--workers", riffle_mc.workers, "worker threads (0 = hardware)");
  rm->add_option("--tol", riffle_mc.tol, "fail when |estimate - reference| exceeds this");
  rm->add_option("--emit-times", riffle_mc.emit_times,
                 "write per-trial stopping times (little-endian u32, sentinel "
                 "0xffffffff) to this file; single c only");
  attach_grid(rm, riffle_mc.grid);
  attach_common(rm, riffle_mc.common);

  KtopCmd ktop;
  auto* kt = app.add_subcommand("ktop", "k-random-to-top profile");
  kt->add_option("--n", ktop.n, "deck size")->required();
  kt->add_option("--k", ktop.k, "cards moved per step")->required();
  kt->add_option("--regime", ktop.regime, "sparse, dense, or auto")
      ->check(CLI::IsMember({"auto", "sparse", "dense"}));
  kt->add_option("--trials", ktop.trials, "Monte Carlo trials");
  kt->add_option("--seed", ktop.seed, "master seed");
  kt->add_option("--workers", ktop.workers, "worker threads");
  kt->add_option("--tol", ktop.tol, "fail when |estimate - reference| exceeds this");
  attach_grid(kt, ktop.grid);
  attach_common(kt, ktop.common);

  RtProfileCmd rt_profile;
  auto* rp = app.add_subcommand("rt-profile", "random transpositions profile bound");
  rp->add_option("--n", rt_profile.n, "number of cards")->required();
  rp->add_option("--trials", rt_profile.trials,
                 "touched-label trials per c (0 = closed form only)");
  rp->add_option("--seed", rt_profile.seed, "master seed");
  rp->add_option("--workers", rt_profile.workers, "worker threads");
  rp->add_option("--tol", rt_profile.tol, "fail when |bound - gumbel| exceeds this");
  attach_grid(rp, rt_profile.grid);
  attach_common(rp, rt_profile.common);

  RtExactCmd rt_exact;
  auto* rx = app.add_subcommand("rt-exact", "exact small-n transposition separation");
  rx->add_option("--n", rt_exact.n, "number of cards (<= 6)")->required();
  rx->add_option("--mmin", rt_exact.mmin, "first step count");
  rx->add_option("--mmax", rt_exact.mmax, "last step count");
  attach_common(rx, rt_exact.common);

  HypercubeCmd hypercube;
  auto* hc = app.add_subcommand("hypercube", "hypercube refresh walk curves");
  hc->add_option("--n", hypercube.n, "dimension");
  hc->add_option("--b", hypercube.b, "perturbation parameter");
  hc->add_option("--bprime", hypercube.bprime, "second half-split parameter");
  hc->add_option("--variant", hypercube.variant, "first or half")
      ->check(CLI::IsMember({"first", "half"}));
  hc->add_option("--rates", hypercube.rates, "explicit ring rates")->delimiter(',');
  attach_grid(hc, hypercube.grid);
  attach_common(hc, hypercube.common);

  ZmnCmd zmn;
  auto* zm = app.add_subcommand("zmn", "coordinate refresh walk on (Z/mZ)^n");
  zm->add_option("--m", zmn.m, "alphabet size (>= 2)")->required();
  zm->add_option("--n", zmn.n, "dimension")->required();
  zm->add_option("--b", zmn.b, "first-coordinate perturbation");
  attach_grid(zm, zmn.grid);
  attach_common(zm, zmn.common);

  BlCmd bl;
  auto* bc = app.add_subcommand("bl", "Bernoulli-Laplace continuity sums");
  bc->add_option("--n", bl.n, "even number of balls")->required();
  bc->add_option("--A", bl.bound_exponent, "exponent of the dominating bound");
  attach_grid(bc, bl.grid);
  attach_common(bc, bl.common);

  BoundsCmd bounds;
  auto* bd = app.add_subcommand("bounds", "comparison-bound decay tables");
  bd->add_option("--family", bounds.family, "weight, biased, central, zmn, halfsplit")
      ->check(CLI::IsMember({"weight", "biased", "central", "zmn", "halfsplit"}));
  bd->add_option("--n-list", bounds.ns, "sizes to tabulate")->delimiter(',');
  bd->add_option("--c", bounds.c, "window position");
  bd->add_option("--m", bounds.m, "alphabet size for zmn");
  bd->add_option("--b", bounds.b, "perturbation parameter");
  bd->add_option("--bprime", bounds.bprime, "second half-split parameter");
  bd->add_option("--eps", bounds.eps, "perturbation size (default 1/n!)");
  attach_common(bd, bounds.common);

  ConstantsCmd constants;
  auto* cc = app.add_subcommand("constants", "uniformly driven shuffle constants");
  attach_common(cc, constants.common);

  SelftestCmd selftest;
  auto* st = app.add_subcommand("selftest", "run the oracle cross-check suite");
  attach_common(st, selftest.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (re->parsed()) return riffle_exact.run(out, err);
    if (rm->parsed()) return riffle_mc.run(out, err);
    if (kt->parsed()) return ktop.run(out, err);
    if (rp->parsed()) return rt_profile.run(out, err);
    if (rx->parsed()) return rt_exact.run(out, err);
    if (hc->parsed()) return hypercube.run(out, err);
    if (zm->parsed()) return zmn.run(out, err);
    if (bc->parsed()) return bl.run(out, err);
    if (bd->parsed()) return bounds.run(out, err);
    if (cc->parsed()) return constants.run(out, err);
    if (st->parsed()) return selftest.run(out, err);
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const size_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const numeric_error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericError;
  }
  err << "error: no command\n";
  return kUsageError;
}

}  // namespace sepmix::cli
