#include "essc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "essc/metrics.hpp"
#include "essc/population.hpp"
#include "essc/rng.hpp"
#include "essc/screening.hpp"

#ifndef ESSC_VERSION
#define ESSC_VERSION "0.0.0"
#endif

namespace essc {

std::string version_string() { return std::string("essc ") + ESSC_VERSION; }

std::string method_name(Method m) {
  switch (m) {
    case Method::Essc: return "ESSC";
    case Method::KMeans: return "KMEANS";
    case Method::Sc1: return "SC1";
    case Method::Sc2: return "SC2";
    case Method::Demeaned: return "DEMEANED";
    case Method::Sign: return "SIGN";
    case Method::Oracle: return "ORACLE";
  }
  throw std::logic_error("unreachable");
}

Method parse_method(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), ::toupper);
  for (Method m : all_methods())
    if (method_name(m) == up) return m;
  throw std::invalid_argument("unknown method: " + name);
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> ms{Method::Essc,     Method::KMeans,
                                      Method::Sc1,      Method::Sc2,
                                      Method::Demeaned, Method::Sign,
                                      Method::Oracle};
  return ms;
}

void ExperimentConfig::validate() const {
  if (model < 0 || model > 5) throw std::invalid_argument("ExperimentConfig: model id must be 0..5");
  if (model == 0) {
    if (!inline_spec) throw std::invalid_argument("ExperimentConfig: inline spec required when model = 0");
    inline_spec->validate();
  } else if (grid.empty()) {
    throw std::invalid_argument("ExperimentConfig: empty grid");
  }
  if (reps < 1) throw std::invalid_argument("ExperimentConfig: reps must be positive");
  if (methods.empty()) throw std::invalid_argument("ExperimentConfig: no methods requested");
}

namespace {

std::vector<int> run_method(Method m, const Dataset& data, const MixtureSpec& spec,
                            const std::optional<ThresholdSchedule>& th,
                            const KMeansConfig& kcfg, std::uint64_t seed) {
  switch (m) {
    case Method::Essc:
      return essc_cluster(data.X, th, kcfg, seed).assignment;
    case Method::KMeans:
      return kmeans(data.X.values.transpose(), kcfg, seed).assignment;
    case Method::Sc1:
      return sc1(data.X, kcfg, seed).assignment;
    case Method::Sc2:
      return sc2(data.X, kcfg, seed).assignment;
    case Method::Demeaned:
      return demeaned_spectral(data.X, kcfg, seed).assignment;
    case Method::Sign:
      return sign_cluster(top2_singular(data.X).u1);
    case Method::Oracle:
      return bayes_oracle(data.X, spec.mu1, spec.mu2, spec.cov.matrix(), spec.pi);
  }
  throw std::logic_error("unreachable");
}

std::string format_cell(const CellSummary& c) {
  char buf[64];
  if (c.count == 0) {
    std::snprintf(buf, sizeof buf, "--(all %d fail)", c.failures);
  } else if (c.stderr_) {
    std::snprintf(buf, sizeof buf, "%.3f(%.3f)", c.mean, *c.stderr_);
  } else {
    std::snprintf(buf, sizeof buf, "%.3f(--)", c.mean);
  }
  std::string s(buf);
  if (c.failures > 0 && c.count > 0) s += "!" + std::to_string(c.failures);
  return s;
}

}  // namespace

SimulationReport run_simulation(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<int> grid =
      cfg.model == 0 ? std::vector<int>{cfg.inline_spec->p} : cfg.grid;

  SimulationReport rep;
  std::ostringstream csv;
  csv << "grid_value,method,replicate,rate\n";

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const MixtureSpec spec =
        cfg.model == 0 ? *cfg.inline_spec : model_preset(cfg.model, grid[gi]);
    std::vector<CellSummary> row(cfg.methods.size());
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      row[mi].method = cfg.methods[mi];
      row[mi].grid_value = grid[gi];
    }
    for (int r = 0; r < cfg.reps; ++r) {
      const std::uint64_t rep_seed = child_seed(cfg.seed, gi, static_cast<std::uint64_t>(r));
      const Dataset data = sample_dataset(spec, rep_seed);
      for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        csv << grid[gi] << ',' << method_name(cfg.methods[mi]) << ',' << r << ',';
        try {
          const std::vector<int> a =
              run_method(cfg.methods[mi], data, spec, cfg.thresholds, cfg.kmeans,
                         child_seed(rep_seed, 0x6d657468ULL, mi));
          const double rate = misclustering_rate(a, data.truth);
          row[mi].rates.push_back(rate);
          csv << rate << '\n';
        } catch (const std::exception&) {
          ++row[mi].failures;
          csv << "NA\n";
        }
      }
    }
    for (CellSummary& c : row) {
      c.count = static_cast<int>(c.rates.size());
      if (c.count >= 2) {
        const ReplicateSummary s = summarize(c.rates);
        c.mean = s.mean;
        c.stderr_ = s.stderr_;
      } else if (c.count == 1) {
        c.mean = c.rates.front();
      }
      rep.cells.push_back(c);
    }
  }

  // aligned text table mirroring the mean(stderr) presentation
  constexpr int kWidth = 18;
  std::ostringstream txt;
  txt << version_string() << "\n";
  auto pad = [&](const std::string& s) {
    txt << s;
    for (int i = static_cast<int>(s.size()); i < kWidth; ++i) txt << ' ';
  };
  pad("value");
  for (Method m : cfg.methods) pad(method_name(m));
  txt << '\n';
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    pad(std::to_string(grid[gi]));
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      pad(format_cell(rep.cells[gi * cfg.methods.size() + mi]));
    }
    txt << '\n';
  }
  rep.text_table = txt.str();
  rep.raw_csv = csv.str();

  nlohmann::json body;
  body["version"] = version_string();
  body["model"] = cfg.model;
  body["grid"] = grid;
  body["reps"] = cfg.reps;
  body["seed"] = cfg.seed;
  if (!cfg.config_echo.empty()) body["config_echo"] = cfg.config_echo;
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  body["methods"] = methods;
  nlohmann::json cells = nlohmann::json::array();
  for (const CellSummary& c : rep.cells) {
    nlohmann::json cj;
    cj["grid_value"] = c.grid_value;
    cj["method"] = method_name(c.method);
    cj["count"] = c.count;
    cj["failures"] = c.failures;
    if (c.count >= 1) cj["mean"] = c.mean;
    if (c.stderr_) cj["stderr"] = *c.stderr_;
    cj["rates"] = c.rates;
    cells.push_back(cj);
  }
  body["cells"] = cells;
  rep.body = body;
  return rep;
}

// ---------------------------------------------------------------------------
// theory verification regimes
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd support_vec(int p, int offset, int len, double value) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  v.segment(offset, len).setConstant(value);
  return v;
}

std::vector<int> balanced_labels(int n) {
  std::vector<int> l(n, 0);
  for (int i = 0; i < n / 2; ++i) l[i] = 1;
  return l;
}

// Disjoint equal-length supports (c12 = 0), Sigma = I, sized so the noiseless
// eigenvalues are exactly d1^2 >= d2^2 under balanced classes.
MixtureSpec gap_spec(int n, int p, double d1, double d2) {
  MixtureSpec s;
  s.n = n;
  s.p = p;
  s.pi = 0.5;
  s.cov = CovarianceSpec::identity_scaled(p, 1.0);
  const int l = p / 2;
  const int n1 = n / 2;
  const int n2 = n - n1;
  s.mu1 = support_vec(p, 0, l, std::sqrt(d1 * d1 / n1 / l));
  s.mu2 = support_vec(p, p - l, l, std::sqrt(d2 * d2 / n2 / l));
  return s;
}

// Equal-norm positively correlated means: the leading population eigenvector
// is constant over samples (the flat-u1 regime) while the second separates
// the classes.
MixtureSpec flat_spec(int n, int p, double d1) {
  const int m = std::max(1, p / 4);
  const double a = d1 / std::sqrt(static_cast<double>(n) * m);
  const double b = a / 2.0;
  MixtureSpec s;
  s.n = n;
  s.p = p;
  s.pi = 0.5;
  s.cov = CovarianceSpec::identity_scaled(p, 1.0);
  s.mu1 = support_vec(p, 0, m, a) + support_vec(p, m, m, b);
  s.mu2 = support_vec(p, 0, m, a) - support_vec(p, m, m, b);
  return s;
}

Eigen::MatrixXd mean_matrix(const MixtureSpec& spec, const std::vector<int>& labels) {
  Eigen::MatrixXd M(spec.p, spec.n);
  for (int i = 0; i < spec.n; ++i) M.col(i) = labels[i] == 1 ? spec.mu1 : spec.mu2;
  return M;
}

nlohmann::json vector_stats(const std::vector<double>& v) {
  nlohmann::json j;
  if (v.empty()) return j;
  double mn = v[0], mx = v[0], sum = 0.0;
  for (double x : v) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
    sum += x;
  }
  const double mean = sum / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  j["mean"] = mean;
  j["sd"] = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
  j["min"] = mn;
  j["max"] = mx;
  return j;
}

}  // namespace

nlohmann::json verify_theory(const std::string& kind, const nlohmann::json& params) {
  const int n = params.value("n", 400);
  const int p = params.value("p", 400);
  const int reps = params.value("reps", 200);
  const std::uint64_t seed = params.value("seed", std::uint64_t{1});
  if (n < 4 || p < 4 || reps < 1) {
    throw std::invalid_argument("verify_theory: need n >= 4, p >= 4, reps >= 1");
  }

  nlohmann::json out;
  out["kind"] = kind;
  out["version"] = version_string();
  out["params"] = params;

  if (kind == "RATIO_MULT") {
    const double ratio = params.value("ratio", 4.0);
    const MixtureSpec spec = theory_preset(TheoryPresetKind::Multiplicity, ratio, n, p);
    const std::vector<int> labels = balanced_labels(n);
    const double tau = default_thresholds(n, p).tau;
    std::vector<double> ratios;
    int below = 0;
    for (int r = 0; r < reps; ++r) {
      const Dataset d = sample_dataset(spec, labels, child_seed(seed, 0, r));
      const SpectralSummary s = top2_singular(d.X);
      ratios.push_back(s.t1 / s.t2);
      if (s.t1 / s.t2 < 1.0 + tau) ++below;
    }
    out["tau"] = tau;
    out["fraction_below"] = static_cast<double>(below) / reps;
    out["ratio_stats"] = vector_stats(ratios);
    return out;
  }

  if (kind == "RATIO_GAP") {
    const double c = params.value("c", 0.5);
    const double d1s = params.value("d1_over_sigma", 5.0);
    const double gap = params.value("gap", 1.5);
    if (gap <= 1.0) throw std::invalid_argument("verify_theory: gap must exceed 1");
    const double sigma_n = std::sqrt(static_cast<double>(n + p));
    const MixtureSpec spec = gap_spec(n, p, d1s * sigma_n, d1s * sigma_n / gap);
    const std::vector<int> labels = balanced_labels(n);
    std::vector<double> ratios;
    int above = 0;
    for (int r = 0; r < reps; ++r) {
      const Dataset d = sample_dataset(spec, labels, child_seed(seed, 0, r));
      const SpectralSummary s = top2_singular(d.X);
      ratios.push_back(s.t1 / s.t2);
      if (s.t1 / s.t2 >= 1.0 + c / 2.0) ++above;
    }
    out["threshold"] = 1.0 + c / 2.0;
    out["fraction_above"] = static_cast<double>(above) / reps;
    out["ratio_stats"] = vector_stats(ratios);
    return out;
  }

  if (kind == "FLATNESS") {
    const double d1s = params.value("d1_over_sigma", 20.0);
    const double sigma_n = std::sqrt(static_cast<double>(n + p));
    const double d1 = d1s * sigma_n;
    const MixtureSpec spec = flat_spec(n, p, d1);
    const std::vector<int> labels = balanced_labels(n);
    const double bound = std::sqrt(2.0 * sigma_n / d1);
    std::vector<double> fstats;
    int within = 0;
    for (int r = 0; r < reps; ++r) {
      const Dataset d = sample_dataset(spec, labels, child_seed(seed, 0, r));
      const double f = std::abs(top2_singular(d.X).fstat);
      fstats.push_back(f);
      if (f <= bound) ++within;
    }
    out["bound"] = bound;
    out["d1"] = d1;
    out["sigma_n"] = sigma_n;
    out["fraction_within"] = static_cast<double>(within) / reps;
    out["fstat_stats"] = vector_stats(fstats);
    return out;
  }

  if (kind == "EXACT_RECOVERY") {
    const double eps = params.value("eps", 0.25);
    const MixtureSpec spec = theory_preset(TheoryPresetKind::ExactRecovery, eps, n, p);
    std::vector<double> errors;
    int exact = 0;
    for (int r = 0; r < reps; ++r) {
      const Dataset d = sample_dataset(spec, child_seed(seed, 0, r));
      const double rate = misclustering_rate(sign_cluster(top2_singular(d.X).u1), d.truth);
      errors.push_back(rate);
      if (rate == 0.0) ++exact;
    }
    out["fraction_exact"] = static_cast<double>(exact) / reps;
    out["rate_stats"] = vector_stats(errors);
    return out;
  }

  if (kind == "LOWER_BOUND") {
    const double scale = params.value("scale", 0.01);
    const MixtureSpec spec = theory_preset(TheoryPresetKind::LowerBound, scale, n, p);
    KMeansConfig kcfg;
    std::map<std::string, std::vector<double>> rates;
    for (int r = 0; r < reps; ++r) {
      const std::uint64_t rs = child_seed(seed, 0, r);
      const Dataset d = sample_dataset(spec, rs);
      for (std::size_t mi = 0; mi < all_methods().size(); ++mi) {
        const Method m = all_methods()[mi];
        const std::vector<int> a = run_method(m, d, spec, std::nullopt, kcfg,
                                              child_seed(rs, 0x6d657468ULL, mi));
        rates[method_name(m)].push_back(misclustering_rate(a, d.truth));
      }
    }
    nlohmann::json per_method;
    for (const auto& [name, v] : rates) per_method[name] = vector_stats(v);
    out["per_method"] = per_method;
    return out;
  }

  if (kind == "TSOLVER") {
    const int configs = params.value("configs", 100);
    Rng rng(child_seed(seed, 0x74736f6cULL, 0));
    int root_ok = 0, convex_ok = 0, rate_ok = 0;
    for (int c = 0; c < configs; ++c) {
      const int nn = 100 + static_cast<int>(rng.uniform_int(200));
      const int pp = 100 + static_cast<int>(rng.uniform_int(200));
      CovarianceSpec cov = rng.bernoulli(0.5)
                               ? CovarianceSpec::identity_scaled(pp, 0.5 + 1.5 * rng.uniform())
                               : CovarianceSpec::ar1(pp, 0.7 * rng.uniform());
      const Eigen::MatrixXd Sigma = cov.matrix();
      const double sigma_n = cov.spectral_norm() * std::sqrt(static_cast<double>(nn + pp));
      const double d2 = (4.0 + 4.0 * rng.uniform()) * sigma_n;
      // admissible gap: d1 - d2 must stay small relative to sqrt(d2), or the
      // determinant loses convexity near the upper end of the interval
      const double d1 = d2 + (0.2 + 0.8 * rng.uniform()) * std::sqrt(d2);

      // random orthonormal pair of direction vectors for the quadratic forms
      Eigen::VectorXd w1(pp), w2(pp);
      for (int i = 0; i < pp; ++i) w1(i) = rng.normal();
      for (int i = 0; i < pp; ++i) w2(i) = rng.normal();
      w1.normalize();
      w2 -= w1.dot(w2) * w1;
      w2.normalize();
      NoiseMoments nm;
      nm.trace = Sigma.trace();
      nm.wquad << w1.dot(Sigma * w1), w1.dot(Sigma * w2), w2.dot(Sigma * w1),
          w2.dot(Sigma * w2);
      nm.n = nn;
      TSolverConfig scfg;
      scfg.sigma_n = sigma_n;
      scfg.a_n = d2 - sigma_n;
      scfg.b_n = d1 + sigma_n;
      try {
        const auto [t1, t2] = solve_t_values(d1, d2, nm, scfg);
        if (t1 >= scfg.a_n && t1 <= scfg.b_n && t2 >= scfg.a_n && t2 <= scfg.b_n) ++root_ok;
        const double bound = 10.0 * sigma_n * sigma_n / d2;
        if (std::abs(t1 - d1) <= bound && std::abs(t2 - d2) <= bound) ++rate_ok;
        // numeric convexity of det f via second differences on a coarse grid
        bool convex = true;
        const int grid = 60;
        const double h = (scfg.b_n - scfg.a_n) / (grid - 1);
        std::vector<double> dets(grid);
        for (int i = 0; i < grid; ++i) {
          dets[i] = f_matrix(scfg.a_n + i * h, d1, d2, nm).determinant();
        }
        for (int i = 1; i + 1 < grid; ++i) {
          if (dets[i + 1] - 2.0 * dets[i] + dets[i - 1] < -1e-9 * std::abs(dets[i])) {
            convex = false;
            break;
          }
        }
        if (convex) ++convex_ok;
      } catch (const std::exception&) {
        // counted as failure in all three tallies
      }
    }
    out["configs"] = configs;
    out["roots_in_interval"] = root_ok;
    out["convex"] = convex_ok;
    out["rate_bound"] = rate_ok;
    return out;
  }

  if (kind == "FLUCTUATION") {
    std::vector<int> grid = params.value("grid", std::vector<int>{200, 400, 800});
    const double d1s = params.value("d1_over_sigma", 8.0);
    const double d2s = params.value("d2_over_sigma", 4.0);
    nlohmann::json points = nlohmann::json::array();
    std::vector<double> sds, wmeans;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const int nn = grid[gi];
      const int pp = nn;
      const double sigma_n = std::sqrt(static_cast<double>(nn + pp));
      const double d1 = d1s * sigma_n, d2 = d2s * sigma_n;
      const MixtureSpec spec = gap_spec(nn, pp, d1, d2);
      const std::vector<int> labels = balanced_labels(nn);
      NoiseMoments nm;
      nm.trace = pp;
      nm.wquad = Eigen::Matrix2d::Identity();
      nm.n = nn;
      TSolverConfig scfg;
      scfg.sigma_n = sigma_n;
      scfg.a_n = d2 - sigma_n;
      scfg.b_n = d1 + sigma_n;
      const double t1 = solve_t_values(d1, d2, nm, scfg).first;
      const Eigen::MatrixXd M = mean_matrix(spec, labels);
      std::vector<double> devs, wnorms;
      for (int r = 0; r < reps; ++r) {
        const Dataset d = sample_dataset(spec, labels, child_seed(seed, gi, r));
        devs.push_back(top2_singular(d.X).t1 - t1);
        wnorms.push_back(operator_norm(d.X.values - M));
      }
      nlohmann::json pt;
      pt["n"] = nn;
      pt["t1"] = t1;
      pt["t1_deviation"] = vector_stats(devs);
      pt["w_norm"] = vector_stats(wnorms);
      points.push_back(pt);
      sds.push_back(pt["t1_deviation"]["sd"].get<double>());
      wmeans.push_back(pt["w_norm"]["mean"].get<double>());
    }
    out["points"] = points;
    out["sd_ratio_last_first"] = sds.back() / sds.front();
    out["wnorm_ratio_last_first"] = wmeans.back() / wmeans.front();
    return out;
  }

  throw std::invalid_argument("verify_theory: unknown kind " + kind);
}

// ---------------------------------------------------------------------------
// CSV clustering pipeline
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct CsvData {
  DataMatrix X;  // p x n, samples are CSV rows
  std::optional<std::vector<int>> labels;
};

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file (header required)");
  const std::vector<std::string> header = split(line, ',');
  const bool has_label = !header.empty() && trim(header.back()) == "label";
  const int ncols = static_cast<int>(header.size());
  const int p = ncols - (has_label ? 1 : 0);
  if (p < 1) throw std::runtime_error(path + ": no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) != ncols) {
      throw std::runtime_error(path + ": parse error at line " + std::to_string(lineno) +
                               ": expected " + std::to_string(ncols) + " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<double> row(p);
    for (int j = 0; j < p; ++j) {
      try {
        std::size_t used = 0;
        row[j] = std::stod(trim(fields[j]), &used);
        if (used != trim(fields[j]).size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": parse error at line " + std::to_string(lineno) +
                                 ": non-numeric cell '" + fields[j] + "'");
      }
    }
    if (has_label) {
      const std::string v = trim(fields.back());
      if (v != "0" && v != "1") {
        throw std::runtime_error(path + ": parse error at line " + std::to_string(lineno) +
                                 ": label must be 0 or 1, got '" + v + "'");
      }
      labels.push_back(v == "1" ? 1 : 0);
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw std::invalid_argument(path + ": need at least 2 samples");
  Eigen::MatrixXd X(p, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(j, i) = rows[i][j];
  CsvData d{DataMatrix{std::move(X)}, std::nullopt};
  if (has_label) d.labels = std::move(labels);
  return d;
}

}  // namespace

ClusterCsvResult cluster_csv(const std::string& input_path,
                             const ClusterCsvOptions& opts,
                             const std::string& out_dir) {
  CsvData data = read_csv(input_path);

  if (opts.subsample_target) {
    const int n = data.X.n();
    const double keep_prob =
        std::min(1.0, static_cast<double>(*opts.subsample_target) / n);
    Rng rng(child_seed(opts.seed, 0x737562ULL, 0));
    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(keep_prob)) kept.push_back(i);
    if (static_cast<int>(kept.size()) < 2) {
      throw std::invalid_argument("cluster_csv: subsampling left fewer than 2 samples");
    }
    Eigen::MatrixXd X(data.X.p(), kept.size());
    std::vector<int> labels;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      X.col(i) = data.X.values.col(kept[i]);
      if (data.labels) labels.push_back((*data.labels)[kept[i]]);
    }
    data.X = DataMatrix{std::move(X)};
    if (data.labels) data.labels = std::move(labels);
  }

  nlohmann::json diag;
  diag["version"] = version_string();
  diag["input"] = input_path;
  diag["method"] = method_name(opts.method);
  diag["n"] = data.X.n();
  diag["p"] = data.X.p();

  if (opts.screen_keep) {
    const ScreeningResult sr = select_top(data.X, *opts.screen_keep);
    data.X = sr.reduced;
    diag["screen_keep"] = *opts.screen_keep;
    diag["kept_indices"] = sr.kept_indices;
  }

  const ThresholdSchedule th =
      opts.thresholds.value_or(default_thresholds(data.X.n(), data.X.p()));
  const SpectralSummary spec = top2_singular(data.X);
  diag["t1"] = spec.t1;
  diag["t2"] = spec.t2;
  diag["fstat"] = spec.fstat;
  diag["tau"] = th.tau;
  diag["delta"] = th.delta;

  ClusterCsvResult res;
  if (opts.method == Method::Essc) {
    const ClusterResult cr = essc_cluster(data.X, th, opts.kmeans, opts.seed);
    res.assignment = cr.assignment;
    switch (*cr.branch) {
      case Branch::Both: diag["branch"] = "BOTH"; break;
      case Branch::First: diag["branch"] = "FIRST"; break;
      case Branch::Second: diag["branch"] = "SECOND"; break;
    }
  } else {
    diag["branch"] = nullptr;
    MixtureSpec unused;  // Oracle needs true parameters; not available for CSVs
    if (opts.method == Method::Oracle) {
      throw std::invalid_argument("cluster_csv: ORACLE requires known mixture parameters");
    }
    Dataset d{data.X, std::vector<int>(data.X.n(), 0)};
    res.assignment = run_method(opts.method, d, unused, th, opts.kmeans, opts.seed);
  }

  if (data.labels) {
    diag["misclustering"] = misclustering_rate(res.assignment, *data.labels);
  }
  res.diagnostics = diag;

  if (!out_dir.empty()) {
    std::ofstream acsv(out_dir + "/assignment.csv");
    if (!acsv) throw std::runtime_error("cannot write to " + out_dir);
    acsv << "sample,assignment\n";
    for (std::size_t i = 0; i < res.assignment.size(); ++i) {
      acsv << i << ',' << res.assignment[i] << '\n';
    }
    std::ofstream djson(out_dir + "/diagnostics.json");
    djson << diag.dump(2) << '\n';
  }
  return res;
}

// ---------------------------------------------------------------------------
// plain-text key-value mixture config
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd parse_segments(const std::string& value, int p, const std::string& key) {
  // semicolon-separated "offset:len:value" segments
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  for (const std::string& seg : split(value, ';')) {
    const std::vector<std::string> parts = split(trim(seg), ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("spec file: " + key + " segment '" + seg +
                                  "' must be offset:len:value");
    }
    const int off = std::stoi(parts[0]);
    const int len = std::stoi(parts[1]);
    const double val = std::stod(parts[2]);
    if (off < 0 || len < 1 || off + len > p) {
      throw std::invalid_argument("spec file: " + key + " segment '" + seg + "' out of range");
    }
    v.segment(off, len).setConstant(val);
  }
  return v;
}

}  // namespace

MixtureSpec parse_spec_file(const std::string& path, std::string* raw_text) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line, raw;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    raw += line + "\n";
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ": line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  if (raw_text) *raw_text = raw;

  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(path + ": missing key '" + key + "'");
    return it->second;
  };

  MixtureSpec s;
  s.n = std::stoi(require("n"));
  s.p = std::stoi(require("p"));
  s.pi = kv.count("pi") ? std::stod(kv.at("pi")) : 0.5;
  const std::vector<std::string> cov = split(require("cov"), ':');
  if (cov.size() == 2 && trim(cov[0]) == "identity") {
    s.cov = CovarianceSpec::identity_scaled(s.p, std::stod(cov[1]));
  } else if (cov.size() == 2 && trim(cov[0]) == "ar1") {
    s.cov = CovarianceSpec::ar1(s.p, std::stod(cov[1]));
  } else {
    throw std::invalid_argument(path + ": cov must be identity:<scale> or ar1:<rho>");
  }
  s.mu1 = parse_segments(require("mu1"), s.p, "mu1");
  s.mu2 = parse_segments(require("mu2"), s.p, "mu2");
  s.validate();
  return s;
}

}  // namespace essc
