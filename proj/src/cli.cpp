#include "bucketree/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bucketree/enumerate.hpp"
#include "bucketree/error.hpp"
#include "bucketree/evolve.hpp"
#include "bucketree/rng.hpp"
#include "bucketree/stats.hpp"
#include "bucketree/urn.hpp"
#include "bucketree/verify.hpp"

namespace bucketree::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  for (const auto& tok : split_commas(text)) out.push_back(parse_rational(tok));
  return out;
}

double rounded(double x) { return std::stod(format_decimal(x)); }

// Options shared by every subcommand.
struct ModelOptions {
  std::string family;
  int b = 0;
  std::string d;
  std::string alpha;
  std::string psi;
  std::string phi;
  std::string format = "csv";
  int max_size = 0;
};

void add_model_options(CLI::App* app, ModelOptions& o) {
  app->add_option("--family", o.family, "bucket-recursive | bdary | balpha")
      ->check(CLI::IsMember({"bucket-recursive", "bdary", "balpha"}));
  app->add_option("--b", o.b, "bucket size")->check(CLI::PositiveNumber);
  app->add_option("--d", o.d, "d for bdary (rational)");
  app->add_option("--alpha", o.alpha, "alpha for balpha (rational)");
  app->add_option("--psi", o.psi, "psi_1..psi_{b-1}, comma separated");
  app->add_option("--phi", o.phi, "phi list or rule exp:c | binom:D | negbinom:r | seq:c");
  app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--max-size", o.max_size, "override the exhaustive size ceiling")
      ->check(CLI::NonNegativeNumber);
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<FamilySpec> family_of(const ModelOptions& o) {
  if (o.family.empty()) {
    if (!o.d.empty() || !o.alpha.empty()) throw UsageError("--d/--alpha need --family");
    return std::nullopt;
  }
  if (!o.psi.empty() || !o.phi.empty()) {
    throw UsageError("give either --family or explicit --psi/--phi weights, not both");
  }
  if (o.b == 0) throw UsageError("--family needs --b");
  return parse_family(o.family, o.b,
                      o.d.empty() ? std::nullopt : std::optional<std::string>(o.d),
                      o.alpha.empty() ? std::nullopt : std::optional<std::string>(o.alpha));
}

FamilySpec require_family(const ModelOptions& o) {
  auto f = family_of(o);
  if (!f) throw UsageError("this command needs --family");
  return *f;
}

WeightModel model_of(const ModelOptions& o) {
  if (auto f = family_of(o)) return weights_of(*f);
  if (o.phi.empty()) throw UsageError("give --family or explicit weights via --phi");
  return parse_weights(o.psi.empty() ? std::nullopt : std::optional<std::string>(o.psi), o.phi,
                       o.b == 0 ? std::nullopt : std::optional<int>(o.b));
}

int limit_or(const ModelOptions& o, int fallback) { return o.max_size > 0 ? o.max_size : fallback; }

// ------------------------------------------------------------ enumerate

int run_enumerate(const ModelOptions& o, int n, const std::string& shapes_path, std::ostream& out) {
  const auto spec = family_of(o);
  const WeightModel m = model_of(o);
  const int limit = limit_or(o, kDefaultMaxEnumerationSize);
  if (n < 1) throw UsageError("--n must be at least 1");
  if (n > limit) {
    throw ResourceLimit("enumeration up to n = " + std::to_string(n) + " exceeds the ceiling " +
                        std::to_string(limit) + " (raise --max-size)");
  }
  const auto totals = total_weights(m, n, limit);
  bool pass = true;
  json rows = json::array();
  if (o.format == "csv") out << "n,T_n,closed_form,match\n";
  for (int k = 1; k <= n; ++k) {
    const Rational& t = totals[static_cast<std::size_t>(k)];
    std::optional<Rational> closed;
    if (spec) closed = closed_form_Tn(*spec, k);
    const bool match = !closed || *closed == t;
    pass = pass && match;
    if (o.format == "csv") {
      out << k << ',' << to_string(t) << ',' << (closed ? to_string(*closed) : "") << ','
          << (closed ? (match ? "true" : "false") : "") << '\n';
    } else {
      json row = {{"n", k}, {"T_n", to_string(t)}};
      row["closed_form"] = closed ? json(to_string(*closed)) : json(nullptr);
      row["match"] = closed ? json(match) : json(nullptr);
      rows.push_back(row);
    }
  }
  if (o.format == "json") {
    out << json{{"command", "enumerate"}, {"model", m.describe()}, {"rows", rows}, {"pass", pass}}
               .dump(2)
        << '\n';
  }
  if (!shapes_path.empty()) {
    json sizes = json::array();
    for (int k = 1; k <= n; ++k) {
      json shapes = json::array();
      for (const auto& s : enumerate_shapes(m.bucket_size(), k, limit)) shapes.push_back(to_json(s));
      sizes.push_back({{"n", k}, {"shapes", shapes}});
    }
    std::ofstream f(shapes_path);
    if (!f) throw UsageError("cannot write " + shapes_path);
    f << json{{"b", m.bucket_size()}, {"sizes", sizes}}.dump(2) << '\n';
  }
  return pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------ sample

int run_sample(const ModelOptions& o, int n, std::uint64_t count, std::uint64_t seed,
               bool aggregate, std::ostream& out) {
  const FamilySpec spec = require_family(o);
  if (n < 1) throw UsageError("--n must be at least 1");
  CounterRng rng(seed);
  if (aggregate) {
    std::map<std::string, std::uint64_t> freq;
    for (std::uint64_t i = 0; i < count; ++i) ++freq[canonical_encode(sample_tree(spec, n, rng))];
    if (o.format == "csv") {
      out << "tree,count,frequency\n";
      for (const auto& [key, c] : freq) {
        out << '"' << key << "\"," << c << ','
            << format_decimal(static_cast<double>(c) / static_cast<double>(count)) << '\n';
      }
    } else {
      json rows = json::array();
      for (const auto& [key, c] : freq) {
        rows.push_back({{"tree", key},
                        {"count", c},
                        {"frequency", rounded(static_cast<double>(c) / static_cast<double>(count))}});
      }
      out << json{{"command", "sample"}, {"family", spec.describe()}, {"n", n}, {"seed", seed},
                  {"count", count}, {"frequencies", rows}}
                 .dump(2)
          << '\n';
    }
    return kExitOk;
  }
  if (o.format == "csv") {
    for (std::uint64_t i = 0; i < count; ++i) out << canonical_encode(sample_tree(spec, n, rng)) << '\n';
  } else {
    json trees = json::array();
    for (std::uint64_t i = 0; i < count; ++i) trees.push_back(to_json(sample_tree(spec, n, rng)));
    out << json{{"command", "sample"}, {"family", spec.describe()}, {"n", n}, {"seed", seed},
                {"trees", trees}}
               .dump(2)
        << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------ verify

struct VerifyOptions {
  std::string check = "all";
  int n = 6;
  std::string a = "2";
  std::string s = "1/2";
  int probe = 12;
};

json verify_balance(const WeightModel& m, int n, int limit, bool& pass) {
  json rows = json::array();
  bool ok = true;
  for (int k = 1; k <= n; ++k) {
    const BalanceReport r = check_balance(m, k, limit);
    json vals = json::array();
    for (const auto& e : r.values) vals.push_back({{"shape", e.shape}, {"value", to_string(e.value)}});
    rows.push_back({{"n", k},
                    {"pass", r.pass},
                    {"C_n", r.constant ? json(to_string(*r.constant)) : json(nullptr)},
                    {"values", vals}});
    ok = ok && r.pass;
  }
  pass = ok;
  return {{"check", "balance"}, {"pass", ok}, {"rows", rows}};
}

json verify_ratio(const WeightModel& m, int n, int limit, bool& pass) {
  if (n < 3) throw UsageError("--check ratio needs --n >= 3");
  const AffineRatioReport r = check_affine_ratio(m, n, limit);
  json totals = json::array();
  for (std::size_t k = 1; k < r.totals.size(); ++k) totals.push_back(to_string(r.totals[k]));
  pass = r.pass;
  json j = {{"check", "ratio"}, {"pass", r.pass},     {"c1", to_string(r.c1)},
            {"c2", to_string(r.c2)}, {"totals", totals}, {"message", r.message}};
  j["first_failing_n"] = r.first_failing_n ? json(*r.first_failing_n) : json(nullptr);
  return j;
}

json verify_scaling(const WeightModel& m, const VerifyOptions& v, int limit, bool& pass) {
  const Rational a = parse_rational(v.a);
  const Rational s = parse_rational(v.s);
  if (a <= 0 || s <= 0) throw UsageError("--a and --s must be positive");
  json rows = json::array();
  bool ok = true;
  for (int k = 1; k <= v.n; ++k) {
    const LawComparison c = check_scaling(m, a, s, k, limit);
    json row = {{"n", k}, {"pass", c.pass}, {"shapes_compared", c.shapes_compared}};
    row["first_mismatch"] = c.first_mismatch ? json(*c.first_mismatch) : json(nullptr);
    rows.push_back(row);
    ok = ok && c.pass;
  }
  pass = ok;
  return {{"check", "scaling"}, {"a", to_string(a)}, {"s", to_string(s)}, {"pass", ok}, {"rows", rows}};
}

json verify_classify(const WeightModel& m, const std::optional<FamilySpec>& given, int probe,
                     bool& pass) {
  const Classification c = classify_family(m, probe);
  json beta = json::array();
  json gamma = json::array();
  for (const auto& x : c.beta) beta.push_back(to_string(x));
  for (const auto& x : c.gamma) gamma.push_back(to_string(x));
  pass = c.grown && (!given || (c.family && *c.family == *given));
  json j = {{"check", "classify"}, {"pass", pass}, {"grown", c.grown}, {"beta", beta},
            {"gamma", gamma},      {"reason", c.reason}};
  j["family"] = c.family ? json(c.family->describe()) : json(nullptr);
  j["a"] = c.grown ? json(to_string(c.a)) : json(nullptr);
  j["s"] = c.grown ? json(to_string(c.s)) : json(nullptr);
  j["gamma_difference_sign"] =
      c.gamma_difference_sign ? json(*c.gamma_difference_sign) : json(nullptr);
  return j;
}

json verify_ode(const WeightModel& m, int n, bool& pass) {
  const OdeReport r = check_ode_recurrence(m, n);
  pass = r.pass;
  json j = {{"check", "ode"}, {"pass", r.pass}, {"checked", r.checked}, {"message", r.message}};
  j["first_failing_n"] = r.first_failing_n ? json(*r.first_failing_n) : json(nullptr);
  j["failing_initial_k"] = r.failing_initial_k ? json(*r.failing_initial_k) : json(nullptr);
  return j;
}

json distribution_rows(const char* name, const FamilySpec& spec, int n, int limit, bool preserve,
                       bool& pass) {
  json rows = json::array();
  bool ok = true;
  for (int k = 1; k <= n; ++k) {
    const DistributionCheck c =
        preserve ? check_preservation(spec, k, limit) : check_distribution_equivalence(spec, k, limit);
    json row = {{"n", k}, {"pass", c.pass}, {"trees_compared", c.trees_compared},
                {"message", c.message}};
    row["first_mismatch"] = c.first_mismatch ? json(*c.first_mismatch) : json(nullptr);
    rows.push_back(row);
    ok = ok && c.pass;
  }
  pass = ok;
  return {{"check", name}, {"pass", ok}, {"rows", rows}};
}

int run_verify(const ModelOptions& o, const VerifyOptions& v, std::ostream& out) {
  const auto spec = family_of(o);
  const WeightModel m = model_of(o);
  const int enum_limit = limit_or(o, kDefaultMaxEnumerationSize);
  const int exact_limit = limit_or(o, kDefaultMaxExactSize);
  if (v.n < 1) throw UsageError("--n must be at least 1");
  json checks = json::array();
  bool all_pass = true;
  bool p = false;
  auto record = [&](json j) {
    checks.push_back(std::move(j));
    all_pass = all_pass && p;
  };
  const bool all = v.check == "all";
  if (all || v.check == "balance") record(verify_balance(m, v.n, enum_limit, p));
  if (all || v.check == "ratio") record(verify_ratio(m, std::max(v.n, 3), enum_limit, p));
  if (all || v.check == "scaling") record(verify_scaling(m, v, enum_limit, p));
  if (all || v.check == "classify") record(verify_classify(m, spec, v.probe, p));
  if (all || v.check == "ode") record(verify_ode(m, v.n, p));
  if (v.check == "preserve" || v.check == "equivalence" || (all && spec)) {
    if (!spec) throw UsageError("--check " + v.check + " needs --family");
    if (all || v.check == "equivalence") {
      record(distribution_rows("equivalence", *spec, v.n, exact_limit, false, p));
    }
    if (all || v.check == "preserve") {
      record(distribution_rows("preserve", *spec, v.n, exact_limit, true, p));
    }
  }
  out << json{{"command", "verify"}, {"model", m.describe()}, {"n", v.n}, {"pass", all_pass},
              {"checks", checks}}
             .dump(2)
      << '\n';
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------ descend

template <class Value>
void emit_histogram(const ModelOptions& o, const FamilySpec& spec, int n, int j,
                    const std::string& mode, const char* column,
                    const std::map<int, Value>& hist, std::ostream& out,
                    const std::function<json(const Value&)>& as_json,
                    const std::function<std::string(const Value&)>& as_text) {
  if (o.format == "csv") {
    out << "Y," << column << '\n';
    for (const auto& [y, v] : hist) out << y << ',' << as_text(v) << '\n';
    return;
  }
  json rows = json::array();
  for (const auto& [y, v] : hist) rows.push_back({{"Y", y}, {column, as_json(v)}});
  out << json{{"command", "descend"}, {"family", spec.describe()}, {"n", n}, {"j", j},
              {"mode", mode}, {"histogram", rows}}
             .dump(2)
      << '\n';
}

int run_descend(const ModelOptions& o, int n, int j, std::uint64_t count, std::uint64_t seed,
                const std::string& mode, std::ostream& out) {
  const FamilySpec spec = require_family(o);
  if (j < 1 || j > n) throw UsageError("descend needs 1 <= j <= n");
  if (mode == "exact") {
    const auto law = descendants_law_from_urn(spec, n, j, limit_or(o, kDefaultMaxExactSize));
    emit_histogram<Rational>(
        o, spec, n, j, mode, "probability", law, out,
        [](const Rational& p) { return json(to_string(p)); },
        [](const Rational& p) { return to_string(p); });
    return kExitOk;
  }
  CounterRng rng(seed);
  std::map<int, std::uint64_t> hist;
  for (std::uint64_t i = 0; i < count; ++i) {
    const DescendantSample s = mode == "urn" ? descendants_via_urn(spec, n, j, rng)
                                             : descendants_direct(spec, n, j, rng);
    ++hist[s.Y];
  }
  emit_histogram<std::uint64_t>(
      o, spec, n, j, mode, "count", hist, out, [](const std::uint64_t& c) { return json(c); },
      [](const std::uint64_t& c) { return std::to_string(c); });
  return kExitOk;
}

// ------------------------------------------------------------ stats

struct StatsOptions {
  std::string test = "gof";
  int n = 5;
  int j = 4;
  int K = 1;
  std::uint64_t samples = 100000;
  double level = 0.01;
  int seeds = 3;
  std::vector<int> grid{50, 200, 2000};
  double z = 4.0;
  std::int64_t horizon = 100000;
  std::uint64_t trajectories = 10000;
  double skew_bound = 0.1;
  double kurtosis_bound = 0.2;
};

int run_stats(const ModelOptions& o, const StatsOptions& st, std::uint64_t seed, int threads,
              std::ostream& out) {
  const FamilySpec spec = require_family(o);
  const bool csv = o.format == "csv";
  if (st.test == "gof") {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < st.seeds; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
    const MultiSeedGof g = sampler_gof_multi_seed(spec, st.n, st.samples, seeds, st.level);
    if (csv) {
      out << "seed,statistic,df,p_value,pass\n";
      for (std::size_t i = 0; i < g.runs.size(); ++i) {
        const auto& r = g.runs[i];
        out << seeds[i] << ',' << format_decimal(r.statistic) << ',' << r.degrees_of_freedom << ','
            << format_decimal(r.p_value) << ',' << (r.pass ? "true" : "false") << '\n';
      }
    } else {
      json runs = json::array();
      for (std::size_t i = 0; i < g.runs.size(); ++i) {
        const auto& r = g.runs[i];
        runs.push_back({{"seed", seeds[i]},
                        {"statistic", rounded(r.statistic)},
                        {"df", r.degrees_of_freedom},
                        {"p_value", rounded(r.p_value)},
                        {"pass", r.pass}});
      }
      out << json{{"command", "stats"}, {"test", "gof"}, {"family", spec.describe()},
                  {"n", st.n}, {"samples", st.samples}, {"level", st.level},
                  {"failures", g.failures}, {"pass", g.pass}, {"runs", runs}}
                 .dump(2)
          << '\n';
    }
    return g.pass ? kExitOk : kExitCheckFailed;
  }
  if (st.test == "beta") {
    const BetaConvergenceReport r =
        check_beta_convergence(spec, st.j, st.K, st.grid, st.samples, seed, st.z, threads);
    if (csv) {
      out << "n,mean,limit_mean,finite_n_mean,mean_se,mean_within,second,limit_second,"
             "finite_n_second,second_se,second_within,ks_distance\n";
      for (const auto& row : r.rows) {
        out << row.n << ',' << format_decimal(row.mean) << ',' << format_decimal(row.limit_mean)
            << ',' << format_decimal(row.finite_n_mean) << ',' << format_decimal(row.mean_se)
            << ',' << (row.mean_within ? "true" : "false") << ',' << format_decimal(row.second)
            << ',' << format_decimal(row.limit_second) << ','
            << format_decimal(row.finite_n_second) << ',' << format_decimal(row.second_se) << ','
            << (row.second_within ? "true" : "false") << ',' << format_decimal(row.ks_distance)
            << '\n';
      }
    } else {
      json rows = json::array();
      for (const auto& row : r.rows) {
        rows.push_back({{"n", row.n},
                        {"mean", rounded(row.mean)},
                        {"limit_mean", rounded(row.limit_mean)},
                        {"finite_n_mean", rounded(row.finite_n_mean)},
                        {"mean_se", rounded(row.mean_se)},
                        {"mean_within", row.mean_within},
                        {"second", rounded(row.second)},
                        {"limit_second", rounded(row.limit_second)},
                        {"finite_n_second", rounded(row.finite_n_second)},
                        {"second_se", rounded(row.second_se)},
                        {"second_within", row.second_within},
                        {"ks_distance", rounded(row.ks_distance)}});
      }
      out << json{{"command", "stats"}, {"test", "beta"}, {"cell", r.cell},
                  {"beta_a", to_string(r.a)}, {"beta_b", to_string(r.b2)},
                  {"samples", r.samples}, {"attempts", r.attempts}, {"trend", r.trend},
                  {"pass", r.pass}, {"rows", rows}}
                 .dump(2)
          << '\n';
    }
    return r.pass ? kExitOk : kExitCheckFailed;
  }
  const SecondOrderReport r =
      second_order_diagnostic(spec, st.j, st.K, st.n, st.horizon, st.trajectories, seed,
                              st.skew_bound, st.kurtosis_bound, threads);
  const std::vector<std::pair<const char*, double>> fields{
      {"raw_mean", r.raw_mean},
      {"raw_variance", r.raw_variance},
      {"raw_skewness", r.raw_skewness},
      {"raw_excess_kurtosis", r.raw_excess_kurtosis},
      {"std_mean", r.std_mean},
      {"std_variance", r.std_variance},
      {"std_skewness", r.std_skewness},
      {"std_excess_kurtosis", r.std_excess_kurtosis},
      {"variance_slope", r.variance_slope}};
  if (csv) {
    out << "quantity,value\n";
    for (const auto& [k, x] : fields) out << k << ',' << format_decimal(x) << '\n';
    out << "pass," << (r.pass ? "true" : "false") << '\n';
  } else {
    json j = {{"command", "stats"}, {"test", "second-order"}, {"cell", r.cell},
              {"n", r.n}, {"horizon", r.horizon}, {"trajectories", r.trajectories},
              {"skew_bound", r.skew_bound}, {"kurtosis_bound", r.kurtosis_bound},
              {"heuristic", true}, {"pass", r.pass}};
    for (const auto& [k, x] : fields) j[k] = rounded(x);
    out << j.dump(2) << '\n';
  }
  return r.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

// ------------------------------------------------------------ public helpers

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string(kSeedEnvVar) + " is not an unsigned integer");
  }
  return kDefaultSeed;
}

std::string format_decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

FamilySpec parse_family(const std::string& name, int b, const std::optional<std::string>& d,
                        const std::optional<std::string>& alpha) {
  if (name == "bucket-recursive") {
    if (d || alpha) throw InvalidArgument("bucket-recursive takes no --d/--alpha");
    return FamilySpec::bucket_recursive(b);
  }
  if (name == "bdary") {
    if (!d || alpha) throw InvalidArgument("bdary needs --d (and no --alpha)");
    return FamilySpec::bd_ary(b, parse_rational(*d));
  }
  if (name == "balpha") {
    if (!alpha || d) throw InvalidArgument("balpha needs --alpha (and no --d)");
    return FamilySpec::b_alpha_port(b, parse_rational(*alpha));
  }
  throw InvalidArgument("unknown family '" + name + "'");
}

DegreeWeights parse_phi(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    auto values = parse_list(text);
    if (values.empty()) throw InvalidArgument("empty phi list");
    return DegreeWeights::explicit_list(std::move(values));
  }
  const std::string rule = text.substr(0, colon);
  const Rational arg = parse_rational(text.substr(colon + 1));
  if (rule == "exp") return DegreeWeights::exponential(1, arg);
  if (rule == "binom") {
    if (!is_integer(arg) || arg < 0 || !arg.get_num().fits_sint_p()) {
      throw InvalidArgument("binom:D needs a non-negative integer D");
    }
    return DegreeWeights::binomial(1, 1, static_cast<int>(arg.get_num().get_si()));
  }
  if (rule == "negbinom") return DegreeWeights::negative_binomial(1, 1, arg);
  if (rule == "seq") return DegreeWeights::negative_binomial(1, arg, 1);
  throw InvalidArgument("unknown phi rule '" + rule + "' (exp, binom, negbinom, seq)");
}

WeightModel parse_weights(const std::optional<std::string>& psi, const std::string& phi,
                          std::optional<int> b) {
  std::vector<Rational> psi_values = psi ? parse_list(*psi) : std::vector<Rational>{};
  const int bucket = b ? *b : static_cast<int>(psi_values.size()) + 1;
  return WeightModel(bucket, std::move(psi_values), parse_phi(phi));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bucket increasing trees: enumeration, sampling, verification, urn statistics",
               "bucketree"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bucketree 1.0.0");

  ModelOptions mo;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  auto seed_option = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed (default $BUCKETREE_SEED or built-in)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  int n = 6;
  std::string shapes_path;
  auto* enumerate = app.add_subcommand("enumerate", "exact total weights T_1..T_n");
  add_model_options(enumerate, mo);
  enumerate->add_option("--n", n, "largest size");
  enumerate->add_option("--shapes-json", shapes_path, "write all shapes up to --n as JSON");

  std::uint64_t count = 1;
  bool aggregate = false;
  auto* sample = app.add_subcommand("sample", "random trees from the evolution process");
  add_model_options(sample, mo);
  sample->add_option("--n", n, "tree size");
  sample->add_option("--count", count, "number of trees");
  sample->add_flag("--aggregate", aggregate, "print a frequency table instead of trees");
  seed_option(sample);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "exact property checks (JSON report)");
  add_model_options(verify, mo);
  verify->add_option("--check", vo.check)
      ->check(CLI::IsMember(
          {"balance", "ratio", "scaling", "classify", "ode", "preserve", "equivalence", "all"}));
  verify->add_option("--n", vo.n, "largest size checked");
  verify->add_option("--a", vo.a, "scaling factor a (rational)");
  verify->add_option("--s", vo.s, "scaling factor s (rational)");
  verify->add_option("--probe", vo.probe, "phi_0..phi_probe used by classify");

  int j = 1;
  std::string mode = "urn";
  auto* descend = app.add_subcommand("descend", "histogram of the descendants count Y_{n,j}");
  add_model_options(descend, mo);
  descend->add_option("--n", n, "tree size");
  descend->add_option("--j", j, "label");
  descend->add_option("--count", count, "number of samples");
  descend->add_option("--mode", mode)->check(CLI::IsMember({"urn", "direct", "exact"}));
  seed_option(descend);

  StatsOptions so;
  bool stats_n_given = false;
  auto* stats = app.add_subcommand("stats", "statistical checks");
  add_model_options(stats, mo);
  stats->add_option("--test", so.test)->check(CLI::IsMember({"gof", "beta", "second-order"}));
  stats->add_option("--n", so.n, "tree size (gof) or statistic size (second-order)")
      ->each([&](const std::string&) { stats_n_given = true; });
  stats->add_option("--j", so.j, "label");
  stats->add_option("--K", so.K, "conditioned initial bucket size");
  stats->add_option("--samples", so.samples, "sample count (gof, beta)");
  stats->add_option("--level", so.level, "significance level");
  stats->add_option("--seeds", so.seeds, "independent seeds for gof")->check(CLI::PositiveNumber);
  stats->add_option("--grid", so.grid, "sizes for beta convergence")->delimiter(',');
  stats->add_option("--z", so.z, "standard-error multiplier");
  stats->add_option("--horizon", so.horizon, "long horizon N* for second-order");
  stats->add_option("--trajectories", so.trajectories, "trajectories for second-order");
  stats->add_option("--skew-bound", so.skew_bound);
  stats->add_option("--kurtosis-bound", so.kurtosis_bound);
  stats->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  seed_option(stats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (*enumerate) return run_enumerate(mo, n, shapes_path, out);
    if (*sample) return run_sample(mo, n, count, seed, aggregate, out);
    if (*verify) return run_verify(mo, vo, out);
    if (*descend) return run_descend(mo, n, j, count, seed, mode, out);
    if (*stats) {
      if (so.test == "second-order" && !stats_n_given) so.n = 1000;
      return run_stats(mo, so, seed, threads, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DecodeError& e) {
    err << "decode error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bucketree::cli
