// Command-line front end: exact floor-quotient sums, limit-constant
// enclosures, error scans with slope fits, classical summatory checks,
// sawtooth-approximation certificates and exponent-pair window scans.
//
// Exit codes: 0 success, 2 domain/usage error from the library,
// 3 request refused by a resource guard.

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fqsums/arith.hpp"
#include "fqsums/constants.hpp"
#include "fqsums/csv.hpp"
#include "fqsums/expsum.hpp"
#include "fqsums/floorsum.hpp"
#include "fqsums/numeric.hpp"
#include "fqsums/scan.hpp"
#include "fqsums/vaaler.hpp"

using json = nlohmann::ordered_json;
using namespace fqsums;

namespace {

constexpr std::uint64_t kNaiveCap = 10'000'000;

struct KindOptions {
  std::string kind = "phi";
  std::string growth = "bounded";
  double subpoly_coeff = 1.0;
  double subpoly_eps = 0.0;
  bool subpoly_certified = false;
};

void add_kind_options(CLI::App* cmd, KindOptions* k) {
  cmd->add_option("--kind", k->kind,
                  "arithmetic kind: phi | sigma | psi | beta | primeconv | id | custom:<csv>")
      ->capture_default_str();
  cmd->add_option("--growth", k->growth, "custom g growth class: bounded | subpoly")
      ->capture_default_str();
  cmd->add_option("--subpoly-coeff", k->subpoly_coeff, "declared coeff in |g(n)| <= C n^eps");
  cmd->add_option("--subpoly-eps", k->subpoly_eps, "declared eps in |g(n)| <= C n^eps");
  cmd->add_flag("--subpoly-certified", k->subpoly_certified,
                "mark the declared growth bound as proved");
}

std::vector<std::int64_t> load_custom_g(const std::string& path) {
  csv::Table t = csv::read_file(path);
  if (t.header != std::vector<std::string>{"n", "g"})
    throw std::domain_error("custom g file needs header 'n,g'");
  std::vector<std::int64_t> g;
  g.reserve(t.rows.size());
  std::uint64_t expect = 1;
  for (const auto& row : t.rows) {
    if (std::stoull(row[0]) != expect)
      throw std::domain_error("custom g file must list n = 1, 2, ... without gaps");
    g.push_back(std::stoll(row[1]));
    ++expect;
  }
  if (g.empty()) throw std::domain_error("custom g file has no rows");
  return g;
}

GSpec make_spec(const KindOptions& k) {
  std::optional<SubpolyBound> declared;
  Growth growth = Growth::Bounded;
  if (k.growth == "subpoly") {
    growth = Growth::Subpolynomial;
    declared = SubpolyBound{k.subpoly_coeff, k.subpoly_eps, k.subpoly_certified};
  } else if (k.growth != "bounded") {
    throw std::domain_error("unknown growth class: " + k.growth);
  }
  if (k.kind == "phi") return GSpec::moebius();
  if (k.kind == "sigma") return GSpec::one();
  if (k.kind == "psi") return GSpec::moebius_squared();
  if (k.kind == "beta") return GSpec::liouville();
  if (k.kind == "primeconv") return GSpec::prime_indicator();
  if (k.kind == "id") return GSpec::unit();
  if (k.kind.rfind("custom:", 0) == 0)
    return GSpec::custom(load_custom_g(k.kind.substr(7)), growth, declared);
  throw std::domain_error("unknown kind: " + k.kind);
}

std::vector<std::uint64_t> parse_grid(const std::string& text) {
  // either "lo:hi:count" (geometric) or a comma list of x values
  if (text.find(':') != std::string::npos) {
    std::uint64_t lo = 0, hi = 0;
    unsigned count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':')
      throw std::domain_error("grid spec must be lo:hi:count");
    return log_spaced_grid(lo, hi, count);
  }
  std::vector<std::uint64_t> xs;
  std::istringstream is(text);
  std::string cell;
  while (std::getline(is, cell, ',')) xs.push_back(std::stoull(cell));
  if (xs.empty()) throw std::domain_error("empty grid");
  return xs;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open for writing: " + out_path);
  os << text;
}

std::string table_or_json(const csv::Table& t, const std::string& format) {
  if (format == "csv") return csv::write(t);
  if (format != "json") throw std::domain_error("format must be csv or json");
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    for (std::size_t i = 0; i < t.header.size(); ++i) row[t.header[i]] = r[i];
    rows.push_back(row);
  }
  return rows.dump(2);
}

// ---- subcommand payloads ---------------------------------------------------

int run_sum(const KindOptions& kopt, std::uint64_t x, const std::string& method, bool force,
            unsigned digits, unsigned threads, const std::string& format,
            const std::string& out) {
  GSpec spec = make_spec(kopt);
  bool want_naive = method == "naive" || method == "both";
  bool want_block = method == "block" || method == "both";
  if (!want_naive && !want_block) throw std::domain_error("method must be block, naive or both");
  if (want_naive && x > kNaiveCap && !force)
    throw refused_size_error("naive sum beyond 1e7 takes minutes and a full table; rerun with "
                             "--force or use --method block");
  std::uint64_t limit = want_naive ? x : std::max<std::uint64_t>(isqrt(x) + 1, 2);
  if (spec.kind == GKind::Custom && spec.custom_g.size() < limit)
    limit = spec.custom_g.size();
  ValueTable table = build_table(spec, limit);
  csv::Table t;
  t.header = {"kind", "x", "method", "numerator", "denominator", "decimal"};
  Rational block_value, naive_value;
  if (want_block) {
    block_value = block_sum(spec, table, x, threads);
    t.rows.push_back({kind_name(spec.kind), std::to_string(x), "block",
                      numerator(block_value).str(), denominator(block_value).str(),
                      decimal_string(block_value, digits)});
  }
  if (want_naive) {
    naive_value = naive_sum(spec, table, x);
    t.rows.push_back({kind_name(spec.kind), std::to_string(x), "naive",
                      numerator(naive_value).str(), denominator(naive_value).str(),
                      decimal_string(naive_value, digits)});
  }
  if (method == "both" && block_value != naive_value)
    throw std::runtime_error("internal disagreement: block and naive sums differ");
  emit(table_or_json(t, format), out);
  return 0;
}

int run_constant(const KindOptions& kopt, std::uint64_t M, unsigned digits, unsigned threads,
                 const std::string& out) {
  GSpec spec = make_spec(kopt);
  ValueTable table = build_table(spec, M);
  Enclosure e = enclose_constant(spec, table, M, digits, threads);
  emit(enclosure_json(e), out);
  return 0;
}

int run_error_scan(const KindOptions& kopt, const std::string& grid, std::uint64_t M,
                   unsigned digits, unsigned threads, const std::string& format,
                   const std::string& out) {
  GSpec spec = make_spec(kopt);
  auto xs = parse_grid(grid);
  ErrorScan scan = error_scan(spec, xs, M, digits, threads);
  emit(table_or_json(error_scan_csv(scan), format), out);
  std::ostream& log = std::cerr;
  if (scan.fit.defined)
    log << "fit: slope " << scan.fit.slope << ", intercept " << scan.fit.intercept
        << ", residual rms " << scan.fit.residual_rms << ", points " << scan.fit.points_used
        << "\n";
  else
    log << "fit: undefined (" << scan.fit.points_used
        << " points clear the enclosure width)\n";
  for (const auto& row : scan.rows)
    if (row.wide)
      log << "warning: enclosure too wide at x = " << row.x
          << "; raise M to sharpen E\n";
  return 0;
}

int run_fit(const std::string& in_path) {
  FitReport fit = fit_from_csv(csv::read_file(in_path));
  if (fit.defined)
    std::cout << "slope " << fit.slope << "\nintercept " << fit.intercept
              << "\nresidual_rms " << fit.residual_rms << "\npoints " << fit.points_used
              << "\n";
  else
    std::cout << "fit undefined: " << fit.points_used
              << " points clear the enclosure width\n";
  return 0;
}

int run_classic(const std::string& which, const std::string& grid, unsigned digits,
                const std::string& format, const std::string& out) {
  auto xs = parse_grid(grid);
  csv::Table t;
  t.header = {"which", "x", "exact", "main_term", "difference", "normalized"};
  for (std::uint64_t x : xs) {
    ClassicReport r;
    if (which == "divisor")
      r = classic_divisor(x);
    else if (which == "totient-summatory")
      r = classic_totient_summatory(x);
    else if (which == "totient-floor")
      r = classic_totient_floor(x);
    else
      throw std::domain_error("which must be divisor, totient-summatory or totient-floor");
    t.rows.push_back({r.which, std::to_string(x), r.exact.str(),
                      decimal_string(r.main_term, digits), decimal_string(r.difference, digits),
                      decimal_string(r.normalized, digits)});
  }
  emit(table_or_json(t, format), out);
  return 0;
}

int run_vaaler_check(const std::string& degrees_text, std::size_t grid,
                     const std::string& out) {
  std::vector<unsigned> degrees;
  std::istringstream is(degrees_text);
  std::string cell;
  while (std::getline(is, cell, ',')) degrees.push_back(static_cast<unsigned>(std::stoul(cell)));
  SawtoothCheck chk = sawtooth_check(degrees, grid);
  json j;
  j["degrees"] = chk.degrees;
  j["grid"] = chk.grid;
  j["max_excess"] = chk.max_excess;
  j["integer_gap"] = chk.integer_gap;
  j["periodicity_gap"] = chk.periodicity_gap;
  j["kernel_gap"] = chk.kernel_gap;
  j["min_weight"] = chk.min_weight;
  j["max_weight"] = chk.max_weight;
  emit(j.dump(2), out);
  return 0;
}

int run_expsum_scan(const KindOptions& kopt, std::uint64_t x, const std::string& deltas_text,
                    double kappa, double lambda, unsigned digits, unsigned threads,
                    const std::string& format, const std::string& out) {
  GSpec spec = make_spec(kopt);
  ExponentPair pair{kappa, lambda};
  std::vector<double> deltas;
  std::istringstream is(deltas_text);
  std::string cell;
  while (std::getline(is, cell, ',')) deltas.push_back(std::stod(cell));
  if (deltas.empty()) throw std::domain_error("no delta values given");
  std::uint64_t limit = std::max<std::uint64_t>(isqrt(x) + 1, 2);
  if (spec.kind == GKind::Custom && spec.custom_g.size() < limit)
    limit = spec.custom_g.size();
  ValueTable table = build_table(spec, limit);
  csv::Table t;
  t.header = {"x", "D", "delta", "frak_value", "term1", "term2", "term3", "ratio"};
  double max_ratio = 0;
  for (double delta : deltas) {
    RatioScan scan = ratio_scan(spec, table, x, pair, delta, {}, digits, threads);
    for (const auto& row : scan.rows) {
      std::ostringstream dbuf, dl;
      dbuf << row.D;
      dl << row.delta;
      auto num = [](double v) {
        std::ostringstream o;
        o.precision(17);
        o << v;
        return o.str();
      };
      t.rows.push_back({std::to_string(row.x), dbuf.str(), dl.str(), row.value, num(row.term1),
                        num(row.term2), num(row.term3), num(row.ratio)});
    }
    max_ratio = std::max(max_ratio, scan.max_ratio);
  }
  emit(table_or_json(t, format), out);
  std::cerr << "max ratio " << max_ratio << "\n";
  return 0;
}

int run_table(const KindOptions& kopt, std::uint64_t M, const std::string& out,
              const std::string& format, const std::string& in) {
  if (!in.empty()) {
    ValueTable t = format == "csv" ? load_table_csv(in) : load_table_binary(in);
    std::cout << "limit " << t.limit << "\nprimes " << t.primes.size() << "\n";
    return 0;
  }
  if (out.empty()) throw std::domain_error("table needs --out (dump) or --in (inspect)");
  GSpec spec = make_spec(kopt);
  ValueTable t = build_table(spec, M);
  if (format == "csv")
    dump_table_csv(t, out);
  else if (format == "bin")
    dump_table_binary(t, out);
  else
    throw std::domain_error("table format must be bin or csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact floor-quotient sums, limit constants and their error scans"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned digits = kDefaultDigits;
  unsigned threads = 1;
  std::string format = "csv";
  std::string out;
  app.add_option("--precision", digits, "decimal digits for rendered values")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker threads for the exact reductions")
      ->capture_default_str();
  app.add_option("--format", format, "output format: csv | json")->capture_default_str();
  app.add_option("--out", out, "write the main payload to a file instead of stdout");

  // sum
  auto* sum_cmd = app.add_subcommand("sum", "evaluate S_f(x) exactly");
  KindOptions sum_kind;
  std::uint64_t sum_x = 0;
  std::string sum_method = "block";
  bool sum_force = false;
  add_kind_options(sum_cmd, &sum_kind);
  sum_cmd->add_option("--x", sum_x, "upper limit x")->required();
  sum_cmd->add_option("--method", sum_method, "block | naive | both")->capture_default_str();
  sum_cmd->add_flag("--force", sum_force, "run oversized naive sums anyway");

  // constant
  auto* const_cmd = app.add_subcommand("constant", "certified enclosure of the limit constant");
  KindOptions const_kind;
  std::uint64_t const_M = 1'000'000;
  add_kind_options(const_cmd, &const_kind);
  const_cmd->add_option("--M", const_M, "truncation point of the partial sum")
      ->capture_default_str();

  // error-scan
  auto* scan_cmd = app.add_subcommand("error-scan", "tabulate E(x) = S_f(x) - C_f x");
  KindOptions scan_kind;
  std::string scan_grid = "1000:1000000:10";
  std::uint64_t scan_M = 1'000'000;
  add_kind_options(scan_cmd, &scan_kind);
  scan_cmd->add_option("--grid", scan_grid, "x grid: lo:hi:count (geometric) or x1,x2,...")
      ->capture_default_str();
  scan_cmd->add_option("--M", scan_M, "truncation for the constant enclosure")
      ->capture_default_str();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "re-fit the error exponent from a scan CSV");
  std::string fit_in;
  fit_cmd->add_option("--in", fit_in, "error-scan CSV file")->required();

  // classic
  auto* classic_cmd = app.add_subcommand("classic", "classical summatory cross-checks");
  std::string classic_which = "divisor";
  std::string classic_grid = "100:100000000:20";
  classic_cmd
      ->add_option("--which", classic_which, "divisor | totient-summatory | totient-floor")
      ->capture_default_str();
  classic_cmd->add_option("--grid", classic_grid, "x grid: lo:hi:count or x1,x2,...")
      ->capture_default_str();

  // vaaler-check
  auto* vaaler_cmd = app.add_subcommand("vaaler-check", "sawtooth approximation certificate");
  std::string vaaler_degrees = "1,5,10,100";
  std::size_t vaaler_grid = 10000;
  vaaler_cmd->add_option("--degrees", vaaler_degrees, "comma list of degrees H")
      ->capture_default_str();
  vaaler_cmd->add_option("--grid", vaaler_grid, "points per period")->capture_default_str();

  // expsum-scan
  auto* exp_cmd = app.add_subcommand("expsum-scan", "window sums against exponent-pair bounds");
  KindOptions exp_kind;
  std::uint64_t exp_x = 1'000'000;
  std::string exp_deltas = "0,1";
  double exp_kappa = 0.5, exp_lambda = 0.5;
  add_kind_options(exp_cmd, &exp_kind);
  exp_cmd->add_option("--x", exp_x, "scan point x")->capture_default_str();
  exp_cmd->add_option("--delta", exp_deltas, "comma list of shifts delta")
      ->capture_default_str();
  exp_cmd->add_option("--kappa", exp_kappa, "exponent pair kappa")->capture_default_str();
  exp_cmd->add_option("--lambda", exp_lambda, "exponent pair lambda")->capture_default_str();

  // table
  auto* table_cmd = app.add_subcommand("table", "dump or inspect a value table");
  KindOptions table_kind;
  std::uint64_t table_M = 1000;
  std::string table_in;
  std::string table_format = "bin";
  add_kind_options(table_cmd, &table_kind);
  table_cmd->add_option("--M", table_M, "table limit")->capture_default_str();
  table_cmd->add_option("--in", table_in, "inspect an existing table file");
  table_cmd->add_option("--table-format", table_format, "bin | csv")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sum_cmd)
      return run_sum(sum_kind, sum_x, sum_method, sum_force, digits, threads, format, out);
    if (*const_cmd) return run_constant(const_kind, const_M, digits, threads, out);
    if (*scan_cmd)
      return run_error_scan(scan_kind, scan_grid, scan_M, digits, threads, format, out);
    if (*fit_cmd) return run_fit(fit_in);
    if (*classic_cmd) return run_classic(classic_which, classic_grid, digits, format, out);
    if (*vaaler_cmd) return run_vaaler_check(vaaler_degrees, vaaler_grid, out);
    if (*exp_cmd)
      return run_expsum_scan(exp_kind, exp_x, exp_deltas, exp_kappa, exp_lambda, digits,
                             threads, format, out);
    if (*table_cmd) return run_table(table_kind, table_M, out, table_format, table_in);
  } catch (const refused_size_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
