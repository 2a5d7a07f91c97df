#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_out.hpp"
#include "lpcond/berry_esseen.hpp"
#include "lpcond/conditional_engine.hpp"
#include "lpcond/displacement_law.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/fourier_llt.hpp"
#include "lpcond/large_deviations.hpp"
#include "lpcond/models.hpp"
#include "lpcond/probing.hpp"
#include "lpcond/rng.hpp"

namespace lpcond::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

struct Common {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string config;

  std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

// Model and grid settings. Flags override the --config document.
struct ModelFlags {
  std::string kind;
  std::optional<std::int64_t> n, m, N, y;
  std::optional<double> parameter, lambda;
  std::optional<std::int64_t> s_points, t_points;
  std::optional<double> eta0;
};

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw InputError("not an integer: '" + item + "'");
    }
    if (used != item.size()) throw InputError("not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw InputError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

// Fills unset flags from the config document {kind, params{}, N, m, y, grids{}}.
void merge_config(const json& doc, ModelFlags& f, json& grids) {
  auto take_int = [](const json& obj, const char* key, std::optional<std::int64_t>& slot) {
    if (!slot && obj.contains(key)) slot = obj.at(key).get<std::int64_t>();
  };
  auto take_double = [](const json& obj, const char* key, std::optional<double>& slot) {
    if (!slot && obj.contains(key)) slot = obj.at(key).get<double>();
  };
  if (f.kind.empty() && doc.contains("kind")) f.kind = doc.at("kind").get<std::string>();
  take_int(doc, "N", f.N);
  take_int(doc, "m", f.m);
  take_int(doc, "y", f.y);
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    take_int(p, "n", f.n);
    take_int(p, "m", f.m);
    take_int(p, "N", f.N);
    for (const char* key : {"parameter", "mu", "p"}) take_double(p, key, f.parameter);
    if (f.kind != "random_forest") take_double(p, "lambda", f.parameter);
    take_double(p, "lambda", f.lambda);
  }
  if (doc.contains("grids")) {
    grids = doc.at("grids");
    take_int(grids, "s_points", f.s_points);
    take_int(grids, "t_points", f.t_points);
    take_double(grids, "eta0", f.eta0);
  }
}

void add_model_flags(CLI::App& cmd, ModelFlags& f) {
  cmd.add_option("--model", f.kind, "hashing, occupancy, bose_einstein, branching or random_forest");
  cmd.add_option("--n", f.n, "balls (hashing, bose_einstein) or total progeny (branching)");
  cmd.add_option("--m", f.m, "urns (hashing), balls (occupancy) or vertices (random_forest)");
  cmd.add_option("--N", f.N, "urns (occupancy, bose_einstein) or trees (random_forest)");
  cmd.add_option("--param", f.parameter, "override mu, lambda or p");
  cmd.add_option("--lambda", f.lambda, "random_forest: solve mu e^{-mu} = lambda");
  cmd.add_option("--y", f.y, "k in Y = 1{X = k}");
  cmd.add_option("--eta0", f.eta0, "t range of the CF grid");
  cmd.add_option("--grid-s", f.s_points, "s points of the CF grid");
  cmd.add_option("--grid-t", f.t_points, "t points of the CF grid");
}

struct Resolved {
  BuiltModel built;
  ModelKind kind;
  GridSpec grid;
  json grids = json::object();
};

Resolved resolve_model(ModelFlags f, const Common& common) {
  json grids = json::object();
  if (!common.config.empty()) merge_config(read_json_file(common.config), f, grids);
  if (f.kind.empty()) throw InputError("no model given (--model or config 'kind')");
  ModelConfig c;
  c.kind = parse_model_kind(f.kind);
  c.n = f.n.value_or(0);
  c.m = f.m.value_or(0);
  c.N = f.N.value_or(0);
  c.parameter = f.parameter;
  c.lambda = f.lambda;
  c.y_point = f.y;
  if (!common.config.empty()) {
    const json doc = read_json_file(common.config);
    if (doc.contains("params") && doc.at("params").contains("offspring")) {
      const auto probs = doc.at("params").at("offspring").get<std::vector<double>>();
      c.offspring = Pmf::from_dense(0, probs);
    }
  }
  Resolved r{build_model(c), c.kind, GridSpec{}, grids};
  if (f.s_points) r.grid.s_points = *f.s_points;
  if (f.t_points) r.grid.t_points = *f.t_points;
  if (f.eta0) r.grid.eta0 = *f.eta0;
  return r;
}

json model_header(const Resolved& r) {
  return json{{"kind", to_string(r.kind)},
              {"label", r.built.model.label()},
              {"parameter", r.built.parameter},
              {"N", r.built.cond.N},
              {"m", r.built.cond.m}};
}

json moments_json(const Moments& m) {
  return json{{"mean_x", m.mean_x}, {"sigma_x", m.sigma_x}, {"rho_x", m.rho_x}, {"mean_y", m.mean_y},
              {"sigma_y", m.sigma_y}, {"rho_y", m.rho_y}, {"cov_xy", m.cov_xy}, {"r", m.r},
              {"tau", m.tau}};
}

json grid_json(const GridSpec& g) {
  return json{{"s_points", g.s_points}, {"t_points", g.t_points}, {"eta0", g.eta0},
              {"s_range", json::array({-std::numbers::pi, std::numbers::pi})}};
}

json bounds_json(const Bounds& b) {
  return json{{"c1_lower", b.c1_lower}, {"c1", b.c1}, {"c2", b.c2}, {"c3_lower", b.c3_lower},
              {"c3", b.c3}, {"c4", b.c4}, {"c5", b.c5}, {"c5_lower", b.c5_lower},
              {"c6", b.c6}, {"eta0", b.eta0}};
}

json constants_json(const ConstantSet& k) {
  return json{{"bounds", bounds_json(k.bounds)},
              {"eta", k.eta},
              {"epsilon", k.epsilon},
              {"C0", k.C0},
              {"C1", k.C1},
              {"C2", k.C2},
              {"C3", k.C3},
              {"C", k.C},
              {"c7", k.c7},
              {"c8_second", k.c8_second},
              {"c8_third", k.c8_third},
              {"c8", k.c8},
              {"N0", k.N0},
              {"N0_tilde", k.N0_tilde}};
}

Bounds bounds_from_json(const json& doc) {
  auto get = [&](std::initializer_list<const char*> keys) -> double {
    for (const char* key : keys) {
      if (doc.contains(key)) return doc.at(key).get<double>();
    }
    throw InputError(std::string("bounds file lacks '") + *keys.begin() + "'");
  };
  Bounds b;
  b.c1_lower = get({"c1_lower", "c~1"});
  b.c1 = get({"c1"});
  b.c2 = get({"c2"});
  b.c3_lower = get({"c3_lower", "c~3"});
  b.c3 = get({"c3"});
  b.c4 = get({"c4"});
  b.c5 = get({"c5"});
  b.c5_lower = get({"c5_lower", "c~5"});
  b.c6 = get({"c6"});
  b.eta0 = doc.contains("eta0") ? doc.at("eta0").get<double>() : 1.0;
  return b;
}

// Where reports go: the --output file, or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {
    if (!path_.empty()) {
      file_.open(path_, std::ios::binary);
      if (!file_) throw InputError("cannot write " + path_);
    }
  }
  std::ostream& stream() { return path_.empty() ? fallback_ : file_; }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ofstream file_;
};

// ---- subcommands -----------------------------------------------------------

struct SimulateFlags {
  std::int64_t m = 0;
  std::string seq;
  std::optional<std::int64_t> n;
};

int do_simulate(const SimulateFlags& f, const Common& common, std::ostream& out) {
  HashSequence seq;
  seq.m = f.m;
  std::uint64_t seed = 0;
  if (!f.seq.empty()) {
    seq.addresses = parse_int_list(f.seq);
  } else if (f.n) {
    seed = common.resolved_seed();
    RngStream rng(seed, 0);
    if (f.m < 1) throw InputError("--m must be >= 1");
    for (std::int64_t i = 0; i < *f.n; ++i) {
      seq.addresses.push_back(1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(f.m))));
    }
  } else {
    throw InputError("simulate needs --seq or --n");
  }
  const InsertTrace trace = insert_trace(seq);
  const BlockDecomposition blocks = block_decomposition(seq);
  json doc{{"schema", kSchemaVersion},
           {"m", seq.m},
           {"n", seq.n()},
           {"addresses", seq.addresses},
           {"displacements", trace.displacements},
           {"final_urns", trace.final_urns},
           {"total", trace.total}};
  if (f.seq.empty()) doc["seed"] = seed;
  json list = json::array();
  for (const Block& b : blocks.blocks) {
    list.push_back(json{{"length", b.length}, {"displacement", b.disp_sum}, {"urns", b.urns}});
  }
  doc["blocks"] = list;
  Sink sink(common.output, out);
  sink.stream() << dump_json(doc);
  return 0;
}

struct EnumerateFlags {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::string cache_dir;
};

int do_enumerate(const EnumerateFlags& f, const Common& common, std::ostream& out) {
  Pmf law;
  std::filesystem::path cache;
  if (!f.cache_dir.empty()) {
    cache = std::filesystem::path(f.cache_dir) / ("d_" + std::to_string(f.m) + "_" + std::to_string(f.n) + ".csv");
  }
  if (!cache.empty() && std::filesystem::exists(cache)) {
    std::ifstream in(cache);
    law = read_pmf_csv(in);
  } else {
    law = exact_displacement_pmf(f.m, f.n, common.threads);
    if (!cache.empty()) {
      std::filesystem::create_directories(cache.parent_path());
      std::ofstream file(cache, std::ios::binary);
      if (!file) throw InputError("cannot write " + cache.string());
      write_pmf_csv(file, law);
    }
  }
  Sink sink(common.output, out);
  write_pmf_csv(sink.stream(), law);
  return 0;
}

struct ConditionalFlags {
  ModelFlags model;
  bool exact = false;
  std::int64_t target = 10000;
  std::int64_t budget = 0;
  std::int64_t chunk = 1 << 14;
  std::string meta;
};

int do_conditional(const ConditionalFlags& f, const Common& common, std::ostream& out) {
  const Resolved r = resolve_model(f.model, common);
  const ModelSpec& model = r.built.model;
  const ConditioningSpec& cond = r.built.cond;
  Sink sink(common.output, out);
  if (f.exact) {
    write_pmf_csv(sink.stream(), exact_conditional_law(model, cond));
    return 0;
  }
  RejectionOptions opt;
  opt.target = f.target;
  opt.budget = f.budget;
  opt.seed = common.resolved_seed();
  opt.threads = common.threads;
  opt.chunk_attempts = f.chunk;
  const SampleBatch batch = rejection_sample(model, cond, opt);
  write_batch_csv(sink.stream(), batch);

  std::string meta_path = f.meta;
  if (meta_path.empty() && !common.output.empty()) meta_path = common.output + ".json";
  if (!meta_path.empty()) {
    json doc{{"schema", kSchemaVersion},
             {"model", model_header(r)},
             {"attempts", batch.attempts},
             {"accepted", batch.accepted},
             {"seed", batch.seed},
             {"chunk_attempts", batch.chunk_attempts},
             {"partial", batch.partial}};
    if (batch.accepted > 0) {
      const AcceptanceAudit a = acceptance_audit(batch, model, cond);
      doc["acceptance"] = json{{"rate", a.rate},
                               {"rate_se", a.rate_se},
                               {"p_exact", a.p_exact ? json(*a.p_exact) : json(nullptr)},
                               {"sigma_x", a.sigma_x},
                               {"rate_times_2pi_sigma_sqrtN", a.rate_times_2pi_sigma_sqrtN},
                               {"rate_times_sigma_sqrt2piN", a.rate_times_sigma_sqrt2piN}};
    }
    std::ofstream file(meta_path, std::ios::binary);
    if (!file) throw InputError("cannot write " + meta_path);
    file << dump_json(doc);
  }
  return batch.partial ? 3 : 0;
}

struct LltFlags {
  ModelFlags model;
  std::string psi_t;
};

int do_llt(const LltFlags& f, const Common& common, std::ostream& out) {
  const Resolved r = resolve_model(f.model, common);
  const ModelSpec& model = r.built.model;
  const ConditioningSpec& cond = r.built.cond;
  const LltReport llt = llt_check(model, cond);
  const auto psi0 = psi_quadrature(model, cond, 0.0, 1e-10, common.threads);
  const EnvelopeReport env = cf_envelope_check(y_prime_transform(model), r.grid);
  const double n = static_cast<double>(cond.N);
  json doc{{"schema", kSchemaVersion},
           {"model", model_header(r)},
           {"p_exact", llt.p_exact},
           {"p_gaussian", llt.p_gaussian},
           {"ratio", llt.ratio},
           {"v_n", llt.v},
           {"sigma_x", llt.sigma_x},
           {"psi0", json{{"re", psi0.real()}, {"im", psi0.imag()}}},
           {"psi0_scaled", psi0.real() * llt.sigma_x * std::sqrt(n) * std::exp(llt.v * llt.v / 2.0)},
           {"sqrt_2pi", std::sqrt(2.0 * std::numbers::pi)},
           {"c5_hat", env.c5_hat},
           {"c5_is_grid_minimum", true},
           {"c5_positive", env.positive},
           {"c5_at", json{{"s", env.s_at_min}, {"t", env.t_at_min}}},
           {"grid_spec", grid_json(env.grid)}};
  std::vector<double> ts = parse_double_list(f.psi_t);
  if (ts.empty() && r.grids.contains("psi_t")) ts = r.grids.at("psi_t").get<std::vector<double>>();
  if (!ts.empty()) {
    json list = json::array();
    for (double t : ts) {
      const auto v = psi_quadrature(model, cond, t, 1e-10, common.threads);
      list.push_back(json{{"t", t}, {"re", v.real()}, {"im", v.imag()}});
    }
    doc["psi"] = list;
  }
  Sink sink(common.output, out);
  sink.stream() << dump_json(doc);
  return 0;
}

struct AuditFlags {
  ModelFlags model;
  bool mc = false;
  std::int64_t mc_target = 20000;
};

int do_be_audit(const AuditFlags& f, const Common& common, std::ostream& out) {
  const Resolved r = resolve_model(f.model, common);
  const ModelSpec& model = r.built.model;
  const ConditioningSpec& cond = r.built.cond;
  const AuditReport a = hypothesis_audit(model, cond, r.grid);
  const PredictedMoments pred = predicted_moments(model, cond);
  const double n = static_cast<double>(cond.N);
  const double sd = std::sqrt(pred.variance);

  json doc{{"schema", kSchemaVersion},
           {"model", model_header(r)},
           {"moments", moments_json(a.moments)},
           {"prime_moments", moments_json(a.prime_moments)},
           {"bounds", bounds_json(a.bounds)},
           {"p_sum", a.p_sum},
           {"K", a.K},
           {"sigma_x_floor", a.sigma_x_floor},
           {"tau_floor", json{{"reading_c3", a.tau_floor_c3}, {"reading_c1", a.tau_floor_c1}}},
           {"envelope", json{{"c5_hat", a.envelope.c5_hat},
                             {"c5_is_grid_minimum", true},
                             {"positive", a.envelope.positive},
                             {"s", a.envelope.s_at_min},
                             {"t", a.envelope.t_at_min},
                             {"grid_spec", grid_json(a.envelope.grid)}}},
           {"constants", a.constants ? constants_json(*a.constants) : json(nullptr)},
           {"violations", a.violations},
           {"predicted", json{{"mean", pred.mean}, {"variance", pred.variance}}}};

  std::optional<ConditionalMoments> exact_mom;
  try {
    exact_mom = exact_conditional_moments(model, cond);
  } catch (const InfeasibleError&) {
  }
  if (exact_mom) {
    json gaps{{"exact_mean", exact_mom->mean},
              {"exact_variance", exact_mom->variance},
              {"mean_gap", std::abs(exact_mom->mean - pred.mean)},
              {"variance_gap", std::abs(exact_mom->variance - pred.variance)}};
    if (a.constants) {
      gaps["c7"] = a.constants->c7;
      gaps["c8_sqrtN"] = a.constants->c8 * std::sqrt(n);
      gaps["mean_within_c7"] = std::abs(exact_mom->mean - pred.mean) <= a.constants->c7;
      gaps["variance_within_c8_sqrtN"] = std::abs(exact_mom->variance - pred.variance) <= a.constants->c8 * std::sqrt(n);
    }
    doc["moment_gaps"] = gaps;
  }

  std::optional<KolmogorovResult> d;
  std::string source;
  if (!f.mc && sd > 0.0) {
    try {
      d = kolmogorov_distance(exact_conditional_law(model, cond), pred.mean, sd);
      source = "exact";
    } catch (const InfeasibleError&) {
    }
  }
  if (!d && sd > 0.0) {
    RejectionOptions opt;
    opt.target = f.mc_target;
    opt.seed = common.resolved_seed();
    opt.threads = common.threads;
    const SampleBatch batch = rejection_sample(model, cond, opt);
    if (batch.accepted > 0) {
      d = kolmogorov_distance(batch.values, pred.mean, sd);
      source = "mc";
      doc["mc"] = json{{"accepted", batch.accepted}, {"attempts", batch.attempts}, {"seed", batch.seed}};
    }
  }
  if (d) {
    doc["D"] = d->distance;
    doc["D_times_sqrtN"] = d->distance * std::sqrt(n);
    doc["D_at"] = d->at;
    doc["D_source"] = source;
    doc["dkw_band"] = d->band ? json(*d->band) : json(nullptr);
  }
  Sink sink(common.output, out);
  sink.stream() << dump_json(doc);
  return 0;
}

struct TailFlags {
  double mu = 0.5;
  std::string report = "y";
  std::string l_grid = "1,2,5,10,20,50,100,200,500,1000";
  std::string u_grid = "1,2,3,5,10,20,30,45,55,100,1000,10000";
  std::int64_t a_max = 15;
  std::int64_t N = 40;
  std::optional<std::int64_t> m;
  double y = 0.5;
  std::int64_t attempts = 1000000;
};

std::string csv_number(double x) { return std::isfinite(x) ? format_double(x) : ""; }

int do_ld_tails(const TailFlags& f, const Common& common, std::ostream& out) {
  Sink sink(common.output, out);
  std::ostream& os = sink.stream();
  if (f.report == "exponents") {
    const Exponents e = exponents(f.mu);
    os << dump_json(json{{"schema", kSchemaVersion},
                         {"mu", f.mu},
                         {"kappa", e.kappa},
                         {"alpha_proof", e.alpha_proof},
                         {"alpha_stated", e.alpha_stated},
                         {"alpha_stated_negative", e.alpha_stated_negative},
                         {"beta_stated", e.beta_stated},
                         {"beta_rederived", e.beta_rederived},
                         {"beta_corrected", e.beta_corrected}});
    return 0;
  }
  if (f.report == "x") {
    const double kappa = exponents(f.mu).kappa;
    os << "l,log_p,p,remainder,exponent,kappa\n";
    for (const XTailRow& row : x_tail_check(f.mu, parse_int_list(f.l_grid))) {
      os << row.l << ',' << csv_number(row.log_p) << ',' << csv_number(std::exp(row.log_p)) << ','
         << csv_number(row.remainder) << ',' << csv_number(row.exponent) << ',' << csv_number(kappa) << '\n';
    }
    return 0;
  }
  if (f.report == "y") {
    os << "u,p_exact,p_upper,p_lower,exp_exact,exp_upper,exp_lower,kappa_sqrt2,n_u,lower_l,lower_k,"
          "p_exact_remainder\n";
    for (const YTailRow& row : y_tail_bracket(f.mu, parse_double_list(f.u_grid))) {
      os << csv_number(row.u) << ',' << (row.p_exact ? csv_number(*row.p_exact) : "") << ','
         << csv_number(std::exp(row.log_upper)) << ',' << csv_number(std::exp(row.lower.log_bound)) << ','
         << csv_number(row.exp_exact) << ',' << csv_number(row.exp_upper) << ',' << csv_number(row.exp_lower)
         << ',' << csv_number(row.kappa_sqrt2) << ',' << row.n_u << ',' << row.lower.l << ',' << row.lower.k
         << ',' << (row.p_exact ? csv_number(row.p_exact_remainder) : "") << '\n';
    }
    return 0;
  }
  if (f.report == "hash-bound") {
    os << "a,l,k,achieved,bound,p_at_achieved,p_at_a,holds_at_achieved,holds_at_a\n";
    for (std::int64_t a = 1; a <= f.a_max; ++a) {
      const HashLowerBound b = hash_lower_bound(static_cast<double>(a));
      const Pmf d = displacement_law(b.l);
      double at_achieved = 0.0;
      double at_a = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.support[i] >= b.achieved) at_achieved += d.probs[i];
        if (d.support[i] >= a) at_a += d.probs[i];
      }
      const double bound = std::exp(b.log_bound);
      os << a << ',' << b.l << ',' << b.k << ',' << b.achieved << ',' << csv_number(bound) << ','
         << csv_number(at_achieved) << ',' << csv_number(at_a) << ',' << (at_achieved >= bound ? 1 : 0) << ','
         << (at_a >= bound ? 1 : 0) << '\n';
    }
    return 0;
  }
  if (f.report == "mc") {
    const std::int64_t m = f.m.value_or(static_cast<std::int64_t>(std::llround(static_cast<double>(f.N) / (1.0 - f.mu))));
    const ConditioningSpec cond{f.N, m};
    const TailMcReport r =
        tail_mc_decomposition(hashing_model(f.mu), cond, f.y, f.mu, common.resolved_seed(), f.attempts, common.threads);
    auto interval = [](const Interval& i) { return json::array({i.lo, i.hi}); };
    os << dump_json(json{{"schema", kSchemaVersion},
                         {"mu", f.mu},
                         {"y", r.y},
                         {"N", r.N},
                         {"m", r.m},
                         {"seed", common.resolved_seed()},
                         {"attempts", r.attempts},
                         {"accepted", r.accepted},
                         {"conditional_mean", r.conditional_mean},
                         {"t_max", r.t_max},
                         {"exceedances", r.exceedances},
                         {"big_jumps", r.big_jumps},
                         {"impossible", r.impossible},
                         {"p_hat", r.p_hat},
                         {"p_interval", interval(r.p_interval)},
                         {"big_jump_fraction", r.big_jump_fraction},
                         {"big_jump_interval", interval(r.big_jump_interval)},
                         {"normalized", r.normalized},
                         {"normalized_interval", interval(r.normalized_interval)},
                         {"bracket_low", r.bracket_low},
                         {"bracket_high", r.bracket_high}});
    return 0;
  }
  throw InputError("unknown --report '" + f.report + "' (x, y, hash-bound, exponents, mc)");
}

int do_constants(const std::string& bounds_path, const Common& common, std::ostream& out) {
  const ConstantSet k = constant_set(bounds_from_json(read_json_file(bounds_path)));
  json doc = constants_json(k);
  doc["schema"] = kSchemaVersion;
  Sink sink(common.output, out);
  sink.stream() << dump_json(doc);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear probing and conditioned sums of lattice random variables"};
  app.name("lpcond");
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--threads", common.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_option("--seed", common.seed, "master seed (default $LPCOND_SEED or 20240611)");
    cmd->add_option("-o,--output", common.output, "write the report to this file");
    cmd->add_option("--config", common.config, "model config JSON {kind, params{}, N, m, y, grids{}}");
  };

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "insert one hash sequence with linear probing");
  simulate->add_option("--m", sim.m, "table size")->required();
  simulate->add_option("--seq", sim.seq, "comma-separated addresses in 1..m");
  simulate->add_option("--n", sim.n, "draw n uniform addresses instead of --seq");
  add_common(simulate);

  EnumerateFlags en;
  auto* enumerate = app.add_subcommand("enumerate", "exact law of the total displacement d_{m,n}");
  enumerate->add_option("--m", en.m, "table size")->required();
  enumerate->add_option("--n", en.n, "number of balls")->required();
  enumerate->add_option("--cache-dir", en.cache_dir, "read or write d_{m}_{n}.csv here");
  add_common(enumerate);

  ConditionalFlags cf;
  auto* conditional = app.add_subcommand("conditional", "law of T given S = m, exact or by rejection");
  add_model_flags(*conditional, cf.model);
  conditional->add_flag("--exact", cf.exact, "exact dynamic programme instead of sampling");
  conditional->add_option("--target", cf.target, "accepted samples wanted");
  conditional->add_option("--budget", cf.budget, "attempt cap (0: 10^4 x target)");
  conditional->add_option("--chunk", cf.chunk, "attempts per random stream");
  conditional->add_option("--meta", cf.meta, "JSON metadata path (default <output>.json)");
  add_common(conditional);

  LltFlags lf;
  auto* llt = app.add_subcommand("llt", "local limit report and CF envelope");
  add_model_flags(*llt, lf.model);
  llt->add_option("--psi-t", lf.psi_t, "comma-separated t values for psi(t)");
  add_common(llt);

  AuditFlags af;
  auto* audit = app.add_subcommand("be-audit", "hypothesis audit, constants and Kolmogorov distance");
  add_model_flags(*audit, af.model);
  audit->add_flag("--mc", af.mc, "estimate D by sampling even when the exact law is affordable");
  audit->add_option("--mc-target", af.mc_target, "accepted samples for the sampled D");
  add_common(audit);

  TailFlags tf;
  auto* tails = app.add_subcommand("ld-tails", "tail exponents, brackets and the tail Monte Carlo");
  tails->add_option("--mu", tf.mu, "Borel parameter");
  tails->add_option("--report", tf.report, "x, y, hash-bound, exponents or mc");
  tails->add_option("--l-grid", tf.l_grid, "x report: thresholds l");
  tails->add_option("--u-grid", tf.u_grid, "y report: thresholds u");
  tails->add_option("--a-max", tf.a_max, "hash-bound report: largest a");
  tails->add_option("--N", tf.N, "mc report: summands");
  tails->add_option("--m", tf.m, "mc report: conditioning value (default N / (1 - mu))");
  tails->add_option("--y", tf.y, "mc report: excess per summand");
  tails->add_option("--attempts", tf.attempts, "mc report: attempts");
  add_common(tails);

  std::string bounds_path;
  auto* constants = app.add_subcommand("constants", "explicit constants from a bounds file");
  constants->add_option("--bounds", bounds_path, "JSON with c1_lower, c1, c2, c3_lower, c3, c4, c5, c5_lower, c6, eta0")
      ->required();
  add_common(constants);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code;
  }

  try {
    if (*simulate) return do_simulate(sim, common, out);
    if (*enumerate) return do_enumerate(en, common, out);
    if (*conditional) return do_conditional(cf, common, out);
    if (*llt) return do_llt(lf, common, out);
    if (*audit) return do_be_audit(af, common, out);
    if (*tails) return do_ld_tails(tf, common, out);
    if (*constants) return do_constants(bounds_path, common, out);
  } catch (const json::exception& e) {
    err << "lpcond: bad JSON value: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "lpcond: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace lpcond::cli
