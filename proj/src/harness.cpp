#include "agora/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "agora/models.hpp"
#include "agora/parallel.hpp"
#include "agora/tau.hpp"
#include "agora/trainer.hpp"

namespace agora {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("expected object: " + path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown config field: " + path + "." + it.key());
  }
}

const json& need(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("missing config field: " + path + "." + key);
  return *it;
}

double as_num(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError("expected number: " + where);
  return v.get<double>();
}

long as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError("expected integer: " + where);
  return v.get<long>();
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError("expected boolean: " + where);
  return v.get<bool>();
}

std::string as_str(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError("expected string: " + where);
  return v.get<std::string>();
}

std::string atom_value_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ConfigError("expected scalar: " + where);
}

ManifoldSpec parse_manifold(const json& j, const std::string& path) {
  check_keys(j, path, {"shape", "size", "positive_fraction", "mu_cap"});
  const std::string shape = as_str(need(j, path, "shape"), path + ".shape");
  const double size = as_num(need(j, path, "size"), path + ".size");
  double p = 0.5;
  if (j.contains("positive_fraction"))
    p = as_num(j["positive_fraction"], path + ".positive_fraction");
  try {
    if (shape == "circle") {
      if (j.contains("mu_cap"))
        throw ConfigError("mu_cap only valid for segment manifolds: " + path + ".mu_cap");
      return ManifoldSpec::circle(size, p);
    }
    if (shape == "sphere") {
      if (j.contains("mu_cap"))
        throw ConfigError("mu_cap only valid for segment manifolds: " + path + ".mu_cap");
      return ManifoldSpec::sphere(size, p);
    }
    if (shape == "segment") {
      double cap = 1e6;
      if (j.contains("mu_cap")) cap = as_num(j["mu_cap"], path + ".mu_cap");
      return ManifoldSpec::segment(size, p, cap);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(e.what()) + ": " + path);
  }
  throw ConfigError("unknown manifold shape: " + path + ".shape");
}

HyperparamSpace parse_theta(const json& j, const std::string& path) {
  HyperparamSpace space;
  if (j.is_array()) {
    int id = 0;
    for (const auto& el : j) {
      const std::string where = path + "[" + std::to_string(id) + "]";
      if (!el.is_object()) throw ConfigError("expected object: " + where);
      HyperparamSet s;
      s.id = id++;
      for (auto it = el.begin(); it != el.end(); ++it)
        s.atoms.push_back({it.key(), atom_value_string(it.value(), where + "." + it.key())});
      space.sets.push_back(std::move(s));
    }
    return space;
  }
  if (j.is_object()) {
    check_keys(j, path, {"grid"});
    const json& grid = need(j, path, "grid");
    if (!grid.is_object() || grid.empty())
      throw ConfigError("expected nonempty object: " + path + ".grid");
    std::vector<std::string> keys;
    std::vector<std::vector<std::string>> values;
    for (auto it = grid.begin(); it != grid.end(); ++it) {
      const std::string where = path + ".grid." + it.key();
      if (!it.value().is_array() || it.value().empty())
        throw ConfigError("expected nonempty array: " + where);
      keys.push_back(it.key());
      std::vector<std::string> vs;
      for (const auto& v : it.value()) vs.push_back(atom_value_string(v, where));
      values.push_back(std::move(vs));
    }
    // cartesian product, last key fastest
    std::vector<std::size_t> idx(keys.size(), 0);
    int id = 0;
    for (;;) {
      HyperparamSet s;
      s.id = id++;
      for (std::size_t i = 0; i < keys.size(); ++i)
        s.atoms.push_back({keys[i], values[i][idx[i]]});
      space.sets.push_back(std::move(s));
      std::size_t pos = keys.size();
      while (pos > 0) {
        --pos;
        if (++idx[pos] < values[pos].size()) break;
        idx[pos] = 0;
        if (pos == 0) return space;
      }
    }
  }
  throw ConfigError("expected array or grid object: " + path);
}

long ceil_fraction(double frac, long trials) {
  return static_cast<long>(std::ceil(frac * static_cast<double>(trials) - 1e-9));
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"manifold", "data", "tau", "socrates", "timaeus", "theta", "m_source",
              "master_seed", "workers"});
  ExperimentConfig c;
  c.manifold = parse_manifold(need(j, "config", "manifold"), "manifold");

  {
    const json& d = need(j, "config", "data");
    check_keys(d, "data",
               {"d_size", "e_size", "d_representative", "d_region", "e_margin"});
    c.data.d_size = as_int(need(d, "data", "d_size"), "data.d_size");
    c.data.e_size = as_int(need(d, "data", "e_size"), "data.e_size");
    if (d.contains("d_representative"))
      c.data.d_representative = as_bool(d["d_representative"], "data.d_representative");
    if (d.contains("d_region")) {
      const json& r = d["d_region"];
      if (!r.is_array() || r.size() != 2)
        throw ConfigError("expected [lo, hi]: data.d_region");
      c.data.d_region_lo = as_num(r[0], "data.d_region[0]");
      c.data.d_region_hi = as_num(r[1], "data.d_region[1]");
    }
    if (d.contains("e_margin")) c.data.e_margin = as_num(d["e_margin"], "data.e_margin");
    if (c.data.d_size < 1) throw ConfigError("d_size must be at least 1: data.d_size");
    if (c.data.e_size < 1) throw ConfigError("e_size must be at least 1: data.e_size");
    if (c.data.e_margin < 0.0)
      throw ConfigError("e_margin must be nonnegative: data.e_margin");
  }

  {
    const json& t = need(j, "config", "tau");
    check_keys(t, "tau", {"rho", "mode", "max_rejections"});
    c.rho = as_num(need(t, "tau", "rho"), "tau.rho");
    if (t.contains("mode")) {
      try {
        c.tau_mode = tau_mode_from_string(as_str(t["mode"], "tau.mode"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + ": tau.mode");
      }
    }
    if (t.contains("max_rejections"))
      c.tau_max_rejections =
          static_cast<int>(as_int(t["max_rejections"], "tau.max_rejections"));
    if (!(c.rho > 0.0)) throw ConfigError("rho must be positive: tau.rho");
    if (c.tau_max_rejections < 1)
      throw ConfigError("max_rejections must be at least 1: tau.max_rejections");
  }

  if (j.contains("socrates")) {
    const json& s = j["socrates"];
    check_keys(s, "socrates", {"noise_rate"});
    if (s.contains("noise_rate"))
      c.socrates_noise = as_num(s["noise_rate"], "socrates.noise_rate");
    if (!(c.socrates_noise >= 0.0 && c.socrates_noise <= 1.0 / 3.0))
      throw ConfigError("noise_rate violates 0 ≤ q ≤ 1/3: socrates.noise_rate");
  }

  {
    const json& t = need(j, "config", "timaeus");
    check_keys(t, "timaeus", {"kind", "match_radius", "hidden"});
    try {
      c.timaeus.kind = classifier_kind_from_string(as_str(need(t, "timaeus", "kind"),
                                                          "timaeus.kind"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(e.what()) + ": timaeus.kind");
    }
    if (t.contains("match_radius"))
      c.timaeus.match_radius = as_num(t["match_radius"], "timaeus.match_radius");
    if (t.contains("hidden"))
      c.timaeus.hidden = static_cast<int>(as_int(t["hidden"], "timaeus.hidden"));
    if (c.timaeus.hidden < 1)
      throw ConfigError("hidden must be at least 1: timaeus.hidden");
  }

  c.theta = parse_theta(need(j, "config", "theta"), "theta");

  if (j.contains("m_source")) {
    try {
      c.m_source = m_source_from_string(as_str(j["m_source"], "m_source"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(e.what()) + ": m_source");
    }
  }
  if (j.contains("master_seed")) {
    const json& v = j["master_seed"];
    if (!v.is_number_integer())
      throw ConfigError("expected nonnegative integer: master_seed");
    if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
      throw ConfigError("expected nonnegative integer: master_seed");
    c.master_seed = v.get<std::uint64_t>();
  }
  if (j.contains("workers")) {
    c.workers = static_cast<int>(as_int(j["workers"], "workers"));
    if (c.workers < 1) throw ConfigError("workers must be at least 1: workers");
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

double boundary_distance(const ManifoldSpec& spec,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  constexpr double kTwoPi = 6.28318530717958647692528676655900577;
  switch (spec.shape) {
    case ManifoldShape::circle: {
      const double R = spec.extent;
      Eigen::Vector2d b0(R, 0.0);
      const double a = kTwoPi * spec.positive_fraction;
      Eigen::Vector2d b1(R * std::cos(a), R * std::sin(a));
      return std::min((x.head(2) - b0).norm(), (x.head(2) - b1).norm());
    }
    case ManifoldShape::sphere: {
      const double R = spec.extent;
      const double z_cut = R * (1.0 - 2.0 * spec.positive_fraction);
      const double r_cut = std::sqrt(std::max(0.0, R * R - z_cut * z_cut));
      const double rxy = std::hypot(x[0], x[1]);
      return std::hypot(rxy - r_cut, x[2] - z_cut);
    }
    case ManifoldShape::segment:
      return std::abs(x[0] - spec.positive_fraction * spec.extent);
  }
  throw std::logic_error("unreachable");
}

AgoraInput build_input(const ExperimentConfig& c) {
  const ManifoldSpec& spec = c.manifold;
  const RngStream root = RngStream::root(c.master_seed);

  Dataset D;
  {
    Rng rng = root.child("dataset").child("D").engine();
    D = c.data.d_representative
            ? sample_manifold(spec, c.data.d_size, rng, "D")
            : sample_manifold_region(spec, c.data.d_size, c.data.d_region_lo,
                                     c.data.d_region_hi, rng, "D");
  }

  Dataset E;
  {
    Rng rng = root.child("dataset").child("E").engine();
    const CoordSet d_coords(D);
    CoordSet e_coords;
    E.id = "E";
    for (long i = 0; i < c.data.e_size; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 100000; ++attempt) {
        Eigen::VectorXd x = sample_manifold_point(spec, rng);
        if (c.data.e_margin > 0.0 && boundary_distance(spec, x) <= c.data.e_margin)
          continue;
        if (d_coords.contains(x) || e_coords.contains(x)) continue;
        e_coords.insert(x);
        LabeledPoint p;
        p.y = spec.label(x);
        p.x = std::move(x);
        E.points.push_back(std::move(p));
        placed = true;
        break;
      }
      if (!placed)
        throw ConfigError("e_margin leaves no room to sample E: data.e_margin");
    }
  }

  TauFunction tau(c.rho, c.tau_mode, spec, c.tau_max_rejections);

  ClassifierHandle timaeus;
  switch (c.timaeus.kind) {
    case ClassifierKind::ball_memory:
      timaeus = ClassifierHandle(std::make_shared<BallMemoryClassifier>(
          c.timaeus.match_radius.value_or(c.rho / 4.0), 0.5, spec.ambient_dim));
      break;
    case ClassifierKind::random:
      timaeus = ClassifierHandle(std::make_shared<RandomClassifier>(0.5, spec.ambient_dim));
      break;
    case ClassifierKind::logistic:
      timaeus = ClassifierHandle(
          std::make_shared<LogisticModel>(LogisticModel::zeros(spec.ambient_dim)));
      break;
    case ClassifierKind::mlp:
      timaeus = ClassifierHandle(std::make_shared<MlpModel>(
          MlpModel::init(spec.ambient_dim, c.timaeus.hidden, 0)));
      break;
    case ClassifierKind::oracle:
    case ClassifierKind::noisy_oracle:
      timaeus = ClassifierHandle(std::make_shared<OracleSocrates>(spec, 0.0));
      break;
  }

  AgoraInput input{
      std::move(timaeus),
      ClassifierHandle(std::make_shared<OracleSocrates>(spec, c.socrates_noise)),
      std::move(D),
      std::move(E),
      c.theta,
      std::move(tau),
      c.m_source,
      c.master_seed,
      c.workers};
  validate_agora_input(input);
  return input;
}

RunOutput execute_run(const ExperimentConfig& c) {
  const AgoraInput input = build_input(c);
  RunOutput out;
  out.result = run_agora(input);
  out.enum_acc = enumerate_baseline(input).second;
  out.ratio = out.enum_acc > 0.0 ? out.result.best_acc / out.enum_acc
                                 : std::numeric_limits<double>::quiet_NaN();
  long theta_size = 1;
  for (const auto& s : input.Theta.sets)
    theta_size = std::max(theta_size, static_cast<long>(s.atoms.size()));
  out.pred = runtime_bound_poly(static_cast<long>(input.Theta.size()), theta_size,
                                static_cast<long>(input.D.size()),
                                static_cast<long>(input.E.size()), 1.0,
                                [](double n) { return n; });
  out.check = check_trace_against_bounds(out.result.trace, out.pred, 1.0);
  return out;
}

json summary_json(const RunOutput& out) {
  json j;
  j["best_accuracy"] = out.result.best_acc;
  j["enum_accuracy"] = out.enum_acc;
  if (out.ratio == out.ratio)
    j["ratio"] = out.ratio;
  else
    j["ratio"] = nullptr;
  j["iterations"] = out.result.trace.iterations.size();
  j["total_train_steps"] = out.result.trace.total_train_steps;
  j["total_socrates_calls"] = out.result.trace.total_socrates_calls;
  json checks;
  checks["socrates_le_theta_e"] = out.check.socrates_le_theta_e;
  checks["m_schedule_ok"] = out.check.m_schedule_ok;
  checks["runtime_bound_total"] = out.pred.total;
  checks["measured_total"] = out.check.measured_total;
  checks["measured_over_bound"] =
      out.pred.total > 0.0 ? out.check.measured_total / out.pred.total : 0.0;
  j["bound_checks"] = std::move(checks);
  return j;
}

json bounds_report_json(const BoundsReport& r) {
  json j;
  j["rho"] = r.rho;
  j["delta"] = r.delta;
  j["beta"] = r.beta_q;
  j["lambda_rho"] = r.lambda_rho;
  j["n_min"] = r.n_min;
  j["epsilon_min"] = r.epsilon_min;
  j["d_min"] = r.d_min;
  j["kappa_min"] = r.kappa_min;
  return j;
}

json runtime_prediction_json(const RuntimePrediction& p) {
  json j;
  j["total"] = p.total;
  j["train_term"] = p.train_term;
  j["sort_select_term"] = p.sort_select_term;
  j["socrates_term"] = p.socrates_term;
  j["theta_count"] = p.theta_count;
  j["theta_size"] = p.theta_size;
  j["d_size"] = p.d_size;
  j["e_size"] = p.e_size;
  j["s_bar"] = p.s_bar;
  j["t_f"] = p.t_f;
  return j;
}

int cli_run(const std::string& config_path, const std::string& out_path,
            std::optional<std::uint64_t> seed_override,
            std::optional<int> workers_override) {
  std::optional<AgoraInput> input;
  try {
    ExperimentConfig cfg = load_config_file(config_path);
    if (seed_override) cfg.master_seed = *seed_override;
    if (workers_override) cfg.workers = *workers_override;
    input = build_input(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    RunOutput out;
    out.result = run_agora(*input);
    out.enum_acc = enumerate_baseline(*input).second;
    out.ratio = out.enum_acc > 0.0 ? out.result.best_acc / out.enum_acc
                                   : std::numeric_limits<double>::quiet_NaN();
    long theta_size = 1;
    for (const auto& s : input->Theta.sets)
      theta_size = std::max(theta_size, static_cast<long>(s.atoms.size()));
    out.pred = runtime_bound_poly(static_cast<long>(input->Theta.size()), theta_size,
                                  static_cast<long>(input->D.size()),
                                  static_cast<long>(input->E.size()), 1.0,
                                  [](double n) { return n; });
    out.check = check_trace_against_bounds(out.result.trace, out.pred, 1.0);

    std::ofstream csv(out_path);
    if (!csv) throw std::runtime_error("cannot open for writing: " + out_path);
    write_trace_csv(out.result.trace, csv);
    if (!csv) throw std::runtime_error("write failed: " + out_path);

    std::string summary_path = out_path;
    if (summary_path.size() > 4 &&
        summary_path.compare(summary_path.size() - 4, 4, ".csv") == 0)
      summary_path.resize(summary_path.size() - 4);
    summary_path += ".summary.json";
    const json summary = summary_json(out);
    std::ofstream sj(summary_path);
    if (!sj) throw std::runtime_error("cannot open for writing: " + summary_path);
    sj << summary.dump(2) << "\n";
    if (!sj) throw std::runtime_error("write failed: " + summary_path);

    std::cout << summary.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int cli_bounds(const BoundsArgs& args) {
  try {
    ManifoldSpec spec = ManifoldSpec::circle(1.0);
    if (args.manifold == "circle")
      spec = ManifoldSpec::circle(args.radius, args.positive_fraction);
    else if (args.manifold == "sphere")
      spec = ManifoldSpec::sphere(args.radius, args.positive_fraction);
    else if (args.manifold == "segment")
      spec = ManifoldSpec::segment(args.radius, args.positive_fraction, args.mu_cap);
    else
      throw std::invalid_argument("unknown manifold shape: " + args.manifold);

    const BoundsReport report = make_bounds_report(spec, args.rho, args.delta,
                                                   args.e_size, args.c_frac,
                                                   args.size_delta);
    std::cout << bounds_report_json(report).dump(2) << "\n";

    if (args.theta_count) {
      RuntimePrediction pred =
          args.f_bar ? runtime_bound_sgd(*args.theta_count, args.theta_size,
                                         args.e_size, args.s_bar, *args.f_bar,
                                         args.batch_max, args.L, args.G, args.zeta)
                     : runtime_bound_poly(*args.theta_count, args.theta_size,
                                          args.d_size, args.e_size, args.s_bar,
                                          [](double n) { return n; });
      std::cout << runtime_prediction_json(pred).dump(2) << "\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int cli_datagen(const DatagenArgs& args) {
  Dataset d;
  try {
    ManifoldSpec spec = ManifoldSpec::circle(1.0);
    if (args.manifold == "circle")
      spec = ManifoldSpec::circle(args.radius, args.positive_fraction);
    else if (args.manifold == "sphere")
      spec = ManifoldSpec::sphere(args.radius, args.positive_fraction);
    else if (args.manifold == "segment")
      spec = ManifoldSpec::segment(args.radius, args.positive_fraction, args.mu_cap);
    else
      throw std::invalid_argument("unknown manifold shape: " + args.manifold);

    Rng rng = RngStream::root(args.seed).child("dataset").engine();
    d = args.region ? sample_manifold_region(spec, args.n, args.region->first,
                                             args.region->second, rng, "datagen")
                    : sample_manifold(spec, args.n, rng, "datagen");
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    write_dataset_csv_file(d, args.out);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

bool SuiteResult::pass() const {
  for (const auto& c : claims)
    if (!c.pass) return false;
  return true;
}

std::vector<std::string> suite_names() {
  return {"lemma5", "theorem2", "corollary1", "lemma3", "lemma4", "thm1", "runtime"};
}

ExperimentConfig idealized_config(std::uint64_t seed, double noise_rate) {
  ExperimentConfig c;
  c.manifold = ManifoldSpec::circle(1.0, 0.5);
  // Dense enough that D's memory entries cover most of E up front: the
  // uncovered-point count is what noisy labeling can permanently poison.
  c.data.d_size = 350;
  c.data.e_size = 200;
  c.data.d_representative = true;
  c.data.e_margin = 0.2 / 4.0;  // no eval point within a tau step of the boundary
  c.rho = 0.2;
  c.tau_mode = TauMode::faithful;
  c.socrates_noise = noise_rate;
  c.timaeus.kind = ClassifierKind::ball_memory;
  for (int i = 0; i < 5; ++i) {
    HyperparamSet s;
    s.id = i;
    s.atoms.push_back({"probe", "p" + std::to_string(i)});
    c.theta.sets.push_back(std::move(s));
  }
  c.master_seed = seed;
  c.workers = 1;
  return c;
}

ExperimentConfig minimal_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.manifold = ManifoldSpec::segment(1.0, 0.5);
  c.data.d_size = 48;
  c.data.e_size = 48;
  c.rho = 0.2;
  c.tau_mode = TauMode::faithful;
  c.timaeus.kind = ClassifierKind::logistic;
  HyperparamSet s;
  s.id = 0;
  s.atoms = {{"eta", "0.5"}, {"batch_size", "8"}, {"seed", "11"}, {"epochs", "40"}};
  c.theta.sets.push_back(std::move(s));
  c.master_seed = seed;
  return c;
}

namespace {

struct IdealizedOutcome {
  std::vector<double> a_star;
  std::vector<long> m_sizes;
  long socrates_calls = 0;
  long train_steps = 0;
  double best_acc = 0.0;
  double enum_acc = 0.0;
  double ratio = 0.0;
  long iterations = 0;
  double pred_total = 0.0;
};

IdealizedOutcome run_idealized(std::uint64_t seed, double noise) {
  const RunOutput out = execute_run(idealized_config(seed, noise));
  IdealizedOutcome r;
  for (const auto& rec : out.result.trace.iterations) {
    r.a_star.push_back(rec.a_star);
    r.m_sizes.push_back(rec.m_size);
  }
  r.socrates_calls = out.result.trace.total_socrates_calls;
  r.train_steps = out.result.trace.total_train_steps;
  r.best_acc = out.result.best_acc;
  r.enum_acc = out.enum_acc;
  r.ratio = out.ratio;
  r.iterations = static_cast<long>(out.result.trace.iterations.size());
  r.pred_total = out.pred.total;
  return r;
}

std::vector<IdealizedOutcome> run_idealized_batch(long trials, std::uint64_t seed,
                                                  double noise, int workers) {
  std::vector<IdealizedOutcome> out(static_cast<std::size_t>(trials));
  parallel_for(workers, out.size(), [&](std::size_t t) {
    out[t] = run_idealized(seed + t, noise);
  });
  return out;
}

std::string noise_tag(double noise) { return noise == 0.0 ? "noise_0" : "noise_1_3"; }

SuiteResult suite_lemma5(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"lemma5", {}};
  const long need_runs = ceil_fraction(0.95, trials);
  for (const double noise : {0.0, 1.0 / 3.0}) {
    const auto runs = run_idealized_batch(trials, seed, noise, workers);
    long shape_ok = 0;
    for (const auto& r : runs)
      if (r.iterations == 5) ++shape_ok;
    res.claims.push_back({noise_tag(noise) + "/iterations_eq_5", shape_ok == trials,
                          std::to_string(shape_ok) + "/" + std::to_string(trials)});
    for (int k = 1; k <= 5; ++k) {
      const double floor_k = per_iteration_floor(k);
      long ok = 0;
      for (const auto& r : runs)
        if (k <= r.iterations && r.a_star[static_cast<std::size_t>(k - 1)] >= floor_k)
          ++ok;
      res.claims.push_back(
          {noise_tag(noise) + "/k=" + std::to_string(k), ok >= need_runs,
           std::to_string(ok) + "/" + std::to_string(trials) + " runs at or above " +
               std::to_string(floor_k) + " (need " + std::to_string(need_runs) + ")"});
    }
  }
  return res;
}

SuiteResult suite_theorem2(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"theorem2", {}};
  for (const double noise : {0.0, 1.0 / 3.0}) {
    const auto runs = run_idealized_batch(trials, seed, noise, workers);
    long ok = 0;
    for (const auto& r : runs)
      if (r.best_acc >= r.enum_acc) ++ok;
    const long need_runs = noise == 0.0 ? trials : ceil_fraction(0.95, trials);
    res.claims.push_back(
        {noise_tag(noise) + "/dominates_single_shot", ok >= need_runs,
         std::to_string(ok) + "/" + std::to_string(trials) + " (need " +
             std::to_string(need_runs) + ")"});
  }
  return res;
}

SuiteResult suite_corollary1(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"corollary1", {}};
  const auto bracket = approx_ratio_bound(5);
  for (const double noise : {0.0, 1.0 / 3.0}) {
    const auto runs = run_idealized_batch(trials, seed, noise, workers);
    long ok = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : runs) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
      if (r.ratio >= bracket.first - 1e-12 && r.ratio <= bracket.second) ++ok;
    }
    std::ostringstream detail;
    detail << ok << "/" << trials << " in [" << bracket.first - 1e-12 << ", "
           << bracket.second << "], observed [" << lo << ", " << hi << "]";
    res.claims.push_back({noise_tag(noise) + "/ratio_bracket", ok == trials, detail.str()});
  }
  return res;
}

// Common-random-number evaluation: point i always uses stream child i, so
// the before/after comparison differs only through the model.
double crn_acc(const Classifier& f, const Dataset& E, const RngStream& stream) {
  long correct = 0;
  for (std::size_t i = 0; i < E.points.size(); ++i) {
    Rng rng = stream.child(static_cast<std::uint64_t>(i)).engine();
    if (f.predict(E.points[i].x, rng) == E.points[i].y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(E.size());
}

SuiteResult suite_lemma4(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"lemma4", {}};
  std::vector<int> ok(static_cast<std::size_t>(trials), 0);
  std::vector<double> delta_acc(static_cast<std::size_t>(trials), 0.0);
  parallel_for(workers, static_cast<std::size_t>(trials), [&](std::size_t t) {
    const ManifoldSpec spec = ManifoldSpec::circle(1.0, 0.5);
    const double rho = 0.2;
    const RngStream root = RngStream::root(seed + t).child("lemma4");
    Rng d_rng = root.child("D").engine();
    const Dataset D = sample_manifold(spec, 60, d_rng, "D");

    Dataset E;
    E.id = "E";
    Rng e_rng = root.child("E").engine();
    const CoordSet d_coords(D);
    while (E.points.size() < 120) {
      Eigen::VectorXd x = sample_manifold_point(spec, e_rng);
      if (boundary_distance(spec, x) <= rho / 4.0) continue;
      if (d_coords.contains(x)) continue;
      LabeledPoint p;
      p.y = spec.label(x);
      p.x = std::move(x);
      E.points.push_back(std::move(p));
    }

    const TauFunction tau(rho, TauMode::faithful, spec);
    const BallMemoryClassifier before =
        memory_train(BallMemoryClassifier(rho / 4.0, 0.5, 2), D);
    const double acc_before = crn_acc(before, E, root.child("eval"));

    const auto handle = ClassifierHandle(std::make_shared<BallMemoryClassifier>(before));
    const auto m_set = build_M(handle, E, tau, root.child("mbuild"));
    const OracleSocrates oracle(spec, 0.0);
    Dataset augment = D;
    for (const auto& x : m_set) {
      LabeledPoint p;
      p.y = model_predict(oracle, x);
      p.x = x;
      augment.points.push_back(std::move(p));
    }
    const BallMemoryClassifier after = memory_train(before, augment);
    const double acc_after = crn_acc(after, E, root.child("eval"));

    ok[t] = acc_after >= acc_before ? 1 : 0;
    delta_acc[t] = acc_after - acc_before;
  });
  long passed = 0;
  double min_delta = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < ok.size(); ++t) {
    passed += ok[t];
    min_delta = std::min(min_delta, delta_acc[t]);
  }
  std::ostringstream detail;
  detail << passed << "/" << trials << " non-decreasing, min delta " << min_delta;
  res.claims.push_back({"accuracy_non_decrease", passed == trials, detail.str()});
  return res;
}

SuiteResult suite_thm1(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"thm1", {}};
  const ManifoldSpec spec = ManifoldSpec::circle(1.0, 0.5);
  const double rho = 0.2;
  const double delta = 0.1;
  const long n = niyogi_smale_n(spec, rho, delta);
  res.claims.push_back({"n_min_value", n == 449, "n_min = " + std::to_string(n)});

  std::vector<int> ok(static_cast<std::size_t>(trials), 0);
  parallel_for(workers, static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng = RngStream::root(seed + t).child("thm1").engine();
    const Dataset d = sample_manifold(spec, n, rng, "sample");
    std::vector<Eigen::VectorXd> xs;
    xs.reserve(d.points.size());
    for (const auto& p : d.points) xs.push_back(p.x);
    ok[t] = cover_check(xs, spec, rho / 2.0, 2000).covered ? 1 : 0;
  });
  long covered = 0;
  for (int v : ok) covered += v;
  const double base = 1.0 - delta;
  const double slack = 3.0 * std::sqrt(base * (1.0 - base) / static_cast<double>(trials));
  const long need_runs = ceil_fraction(base - slack, trials);
  std::ostringstream detail;
  detail << covered << "/" << trials << " covered at rho/2 (need " << need_runs << ")";
  res.claims.push_back({"cover_rate", covered >= need_runs, detail.str()});
  return res;
}

SuiteResult suite_lemma3(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"lemma3", {}};
  const ManifoldSpec spec = ManifoldSpec::circle(1.0, 0.5);
  const double rho = 0.2;
  const double delta = 0.1;
  const long e_size = niyogi_smale_n(spec, rho, delta);
  const long kappa = kappa_bound(e_size, 0, 0.5, e_size, delta);
  res.claims.push_back(
      {"kappa_value", kappa == 17, "kappa = " + std::to_string(kappa)});

  std::vector<int> ok(static_cast<std::size_t>(trials), 0);
  parallel_for(workers, static_cast<std::size_t>(trials), [&](std::size_t t) {
    const RngStream root = RngStream::root(seed + t).child("lemma3");
    Rng rng = root.child("E").engine();
    const Dataset E = sample_manifold(spec, e_size, rng, "E");
    const TauFunction tau(rho, TauMode::faithful, spec);
    const auto tilde = generate_E_tilde(E, tau, kappa, root.child("tau"));
    ok[t] = cover_check(tilde, spec, rho / 2.0, 2000).covered ? 1 : 0;
  });
  long covered = 0;
  for (int v : ok) covered += v;
  const double base = 1.0 - delta;
  const double slack = 3.0 * std::sqrt(base * (1.0 - base) / static_cast<double>(trials));
  const long need_runs = ceil_fraction(base - slack, trials);
  std::ostringstream detail;
  detail << covered << "/" << trials << " covered at rho/2 (need " << need_runs << ")";
  res.claims.push_back({"coverage_rate", covered >= need_runs, detail.str()});
  return res;
}

SuiteResult suite_runtime(long trials, std::uint64_t seed, int workers) {
  SuiteResult res{"runtime", {}};
  // fit the constant on disjoint calibration seeds, then hold it fixed
  const long calib_trials = 10;
  const auto calib =
      run_idealized_batch(calib_trials, seed + 1000000, 0.0, workers);
  double c_raw = 0.0;
  for (const auto& r : calib)
    c_raw = std::max(c_raw, (static_cast<double>(r.train_steps + r.socrates_calls)) /
                                r.pred_total);
  const double C = std::ceil(c_raw * 1.1 * 100.0) / 100.0;

  const auto noise0 = run_idealized_batch(trials, seed, 0.0, workers);
  const auto noisy = run_idealized_batch(trials, seed, 1.0 / 3.0, workers);

  long socrates_ok = 0;
  long steps_ok = 0;
  const long theta_e = 5L * 200L;
  for (const auto* batch : {&noise0, &noisy}) {
    for (const auto& r : *batch) {
      if (r.socrates_calls <= theta_e) ++socrates_ok;
      if (static_cast<double>(r.train_steps + r.socrates_calls) <= C * r.pred_total)
        ++steps_ok;
    }
  }
  res.claims.push_back({"socrates_le_theta_e", socrates_ok == 2 * trials,
                        std::to_string(socrates_ok) + "/" + std::to_string(2 * trials) +
                            " runs with socrates_calls <= " + std::to_string(theta_e)});
  std::ostringstream cd;
  cd << steps_ok << "/" << 2 * trials << " runs within C * bound, C = " << C;
  res.claims.push_back({"steps_within_fitted_C", steps_ok == 2 * trials, cd.str()});

  // halving schedule |M^(k)| <= |E| / 2^{k-1} at the 95th percentile
  bool schedule_ok = true;
  std::ostringstream sd;
  for (int k = 1; k <= 5; ++k) {
    std::vector<double> ratio;
    for (const auto& r : noise0)
      if (k <= r.iterations)
        ratio.push_back(static_cast<double>(r.m_sizes[static_cast<std::size_t>(k - 1)]) /
                        (200.0 / std::ldexp(1.0, k - 1)));
    std::sort(ratio.begin(), ratio.end());
    const std::size_t idx =
        static_cast<std::size_t>(ceil_fraction(0.95, static_cast<long>(ratio.size()))) - 1;
    const double p95 = ratio.empty() ? 0.0 : ratio[idx];
    if (p95 > 1.0) schedule_ok = false;
    sd << "k=" << k << " p95=" << p95 << " ";
  }
  res.claims.push_back({"m_schedule_p95", schedule_ok, sd.str()});
  return res;
}

}  // namespace

SuiteResult run_suite(const std::string& name, long trials, std::uint64_t seed,
                      int workers) {
  if (workers < 1) workers = 1;
  if (name == "lemma5") return suite_lemma5(trials > 0 ? trials : 50, seed, workers);
  if (name == "theorem2") return suite_theorem2(trials > 0 ? trials : 50, seed, workers);
  if (name == "corollary1")
    return suite_corollary1(trials > 0 ? trials : 50, seed, workers);
  if (name == "lemma3") return suite_lemma3(trials > 0 ? trials : 100, seed, workers);
  if (name == "lemma4") return suite_lemma4(trials > 0 ? trials : 50, seed, workers);
  if (name == "thm1") return suite_thm1(trials > 0 ? trials : 200, seed, workers);
  if (name == "runtime") return suite_runtime(trials > 0 ? trials : 50, seed, workers);
  throw std::invalid_argument("unknown suite: " + name);
}

int cli_verify(const std::string& suite, long trials, std::uint64_t seed, int workers) {
  SuiteResult res;
  try {
    res = run_suite(suite, trials, seed, workers);
  } catch (const std::invalid_argument&) {
    std::cerr << "unknown suite: " << suite << " (valid:";
    for (const auto& n : suite_names()) std::cerr << " " << n;
    std::cerr << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  for (const auto& c : res.claims)
    std::cout << (c.pass ? "PASS " : "FAIL ") << res.suite << "/" << c.name << ": "
              << c.detail << "\n";
  std::cout << "suite " << res.suite << ": " << (res.pass() ? "PASS" : "FAIL") << "\n";
  return res.pass() ? 0 : 1;
}

int default_workers() {
  const char* env = std::getenv("AGORA_WORKERS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<int>(v);
}

}  // namespace agora
