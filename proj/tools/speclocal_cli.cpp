// Command-line front end: builds finite tight-binding models, assembles
// spectral localizers, and reports invariants as JSON records.  Spectra go
// to CSV files (written atomically: temp file + rename).  Sweeps emit one
// JSON record per line in deterministic point order, optionally computed by
// a worker pool (SPECLOCAL_THREADS or --threads).
//
// Exit codes: 0 success, 2 a spectral gap closed (invariant undefined),
// 1 any other failure (bad config, IO, symmetry violation, ...).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <speclocal/speclocal.hpp>

using nlohmann::json;
using namespace speclocal;

namespace {

// ---- small parsing helpers ------------------------------------------------

// Complex literals in the flag grammar: "1", "-2.5", "0.9i", "-i",
// "1+2i", "1.5-0.5i".  The imaginary unit is a trailing 'i'.
cplx parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw ConfigError("empty complex literal");
  auto to_d = [](const std::string& t) {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw ConfigError("bad number: " + t);
    return v;
  };
  if (s.back() != 'i') return cplx(to_d(s), 0);
  s.pop_back();
  // split the remaining "a+b" / "a-b" / "b" at the last sign that is not
  // leading and not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto coeff = [&](std::string t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return to_d(t);
  };
  if (split == std::string::npos) return cplx(0, coeff(s));
  return cplx(to_d(s.substr(0, split)), coeff(s.substr(split)));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(cplx m) {
  if (m.imag() == 0) return format_double(m.real());
  std::string im = format_double(m.imag()) + "i";
  if (m.real() == 0) return im;
  return format_double(m.real()) + (m.imag() > 0 ? "+" : "") + im;
}

int env_threads() {
  const char* e = std::getenv("SPECLOCAL_THREADS");
  if (!e) return 1;
  int n = std::atoi(e);
  return n > 0 ? n : 1;
}

json tolerances_json() {
  return json{{"self_adjoint", tol::self_adjoint},
              {"realness", tol::realness},
              {"gap_closed", tol::gap_closed},
              {"invertible_sv", tol::invertible_sv},
              {"inertia_zero", 1e-8}};
}

const char* failure_name(const Failure& f) {
  if (dynamic_cast<const GapClosed*>(&f)) return "gap_closed";
  if (dynamic_cast<const GridTooCoarse*>(&f)) return "grid_too_coarse";
  if (dynamic_cast<const DetVanishes*>(&f)) return "det_vanishes";
  if (dynamic_cast<const MassAtTransition*>(&f)) return "mass_at_transition";
  if (dynamic_cast<const NotSelfAdjoint*>(&f)) return "not_self_adjoint";
  if (dynamic_cast<const NotSkewSymmetric*>(&f)) return "not_skew_symmetric";
  if (dynamic_cast<const OddDimension*>(&f)) return "odd_dimension";
  if (dynamic_cast<const NearSingular*>(&f)) return "near_singular";
  if (dynamic_cast<const NotChiral*>(&f)) return "not_chiral";
  if (dynamic_cast<const NotUnitary*>(&f)) return "not_unitary";
  if (dynamic_cast<const NotInvertible*>(&f)) return "not_invertible";
  if (dynamic_cast<const WidthTooLarge*>(&f)) return "width_too_large";
  if (dynamic_cast<const GradedGapClosed*>(&f)) return "graded_gap_closed";
  if (dynamic_cast<const SymmetryViolation*>(&f)) return "symmetry_violation";
  if (dynamic_cast<const ProfileUnknown*>(&f)) return "profile_unknown";
  if (dynamic_cast<const ConfigError*>(&f)) return "config_error";
  return "failure";
}

// Config-file merge: a JSON value fills a flag the command line left unset.
json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  return j;
}

template <typename T>
void take(const json& cfg, CLI::App* cmd, const std::string& key, T& var) {
  if (!cfg.contains(key)) return;
  CLI::Option* opt = cmd->get_option_no_throw("--" + key);
  if (opt && opt->count() > 0) return;  // explicit flag wins
  try {
    var = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key " + key + ": " + e.what());
  }
}

// ---- model construction ---------------------------------------------------

struct ModelParams {
  std::string name;  // ssh | dirac2 | dirac4
  cplx m = cplx(1, 0);
  double lambda = 0;
  std::uint64_t seed = 0;
};

bool model_is_chiral(const std::string& name) { return name == "ssh"; }

int model_dim(const std::string& name) {
  if (name == "ssh") return 1;
  if (name == "dirac2") return 2;
  if (name == "dirac4") return 4;
  throw ConfigError("unknown model: " + name + " (ssh, dirac2, dirac4)");
}

TranslationInvariantOperator clean_operator(const ModelParams& p) {
  int d = model_dim(p.name);
  if (p.name == "ssh") return ssh_clean(p.m);
  if (p.m.imag() != 0)
    throw ConfigError("mass must be real for " + p.name);
  return dirac_bloch_model(d, p.m.real());
}

FiniteVolumeOperator finite_model(const ModelParams& p, int rho,
                                  Boundary bd) {
  DisorderSpec dis{p.seed, p.lambda};
  if (p.name == "ssh") return ssh_chiral(p.m, dis, rho, bd);
  TranslationInvariantOperator op = clean_operator(p);
  FiniteVolumeOperator f = bd == Boundary::periodic
                               ? fold_periodic(op, rho)
                               : restrict_dirichlet(op, rho);
  if (p.lambda > 0) {
    Vec v = scalar_disorder_diagonal(dis, f.d, rho, f.L).cast<cplx>();
    f.matrix += Mat(v.asDiagonal());
  }
  return f;
}

// eta = "auto" resolves to the measured operator norm of the clean model.
double resolve_eta(const std::string& eta, const ModelParams& p) {
  if (eta == "auto") return operator_stats(clean_operator(p)).norm;
  try {
    return std::stod(eta);
  } catch (const std::exception&) {
    throw ConfigError("bad eta: " + eta + " (number or \"auto\")");
  }
}

json condition_json(const ConditionReport& r) {
  return json{{"rho_ok", r.cond_rho_ok},
              {"eta_ok", r.cond_eta_ok},
              {"eta_floor_ok", r.eta_floor_ok},
              {"rho_range_ok", r.rho_range_ok},
              {"rho_required", r.rho_required},
              {"eta_lhs", r.eta_lhs},
              {"eta_rhs", r.eta_rhs},
              {"guaranteed_gap", r.guaranteed_gap}};
}

// ---- output plumbing ------------------------------------------------------

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file: " + path);
      os = &file;
    }
  }
};

void emit(std::ostream& os, const json& rec, bool stream) {
  os << (stream ? rec.dump() : rec.dump(2)) << "\n";
}

void write_values_csv(const std::string& path, const VecR& vals) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp);
    if (!f) throw ConfigError("cannot open " + tmp);
    f.precision(17);
    f << "index,value\n";
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      f << i << "," << vals(i) << "\n";
    f.flush();
    if (!f) throw ConfigError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("rename failed: " + path);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// ---- localizer ------------------------------------------------------------

struct LocalizerFlags {
  std::string model = "ssh";
  std::string m = "1";
  std::string eta = "auto";
  std::vector<int> rho;
  double lambda = 0;
  std::uint64_t seed = 0;
  double s = 0;
  std::string boundary = "periodic";
  double kappa = 0.1;
  std::string out;
  std::string config_file;
};

json localizer_point(const ModelParams& p, int rho, const std::string& eta_req,
                     double eta, double s, const std::string& boundary,
                     double kappa, const OperatorStats* stats, int range) {
  auto t0 = std::chrono::steady_clock::now();
  const bool open = boundary == "open";
  FiniteVolumeOperator h =
      finite_model(p, rho, open ? Boundary::dirichlet : Boundary::periodic);
  if (s > 0) h = taper_matrix_elements(h, s);
  Mat loc;
  if (open)
    loc = model_is_chiral(p.name) ? odd_position_localizer(h, kappa)
                                  : even_position_localizer(h, kappa);
  else
    loc = model_is_chiral(p.name) ? odd_periodic_localizer(h, eta)
                                  : even_periodic_localizer(h, eta);
  const double gap = spectral_gap(loc);
  if (gap < 1e-8)
    throw GapClosed("localizer spectral gap at tolerance, invariant undefined");
  json cfg{{"model", p.name},
           {"m", format_complex(p.m)},
           {"rho", rho},
           {"lambda", p.lambda},
           {"seed", p.seed},
           {"s", s},
           {"boundary", boundary},
           {"tolerances", tolerances_json()},
           {"version", version_string()}};
  if (open) {
    cfg["kappa"] = kappa;
  } else {
    cfg["eta"] = eta_req;
    cfg["eta_resolved"] = eta;
  }
  json res{{"half_sig", half_signature(loc)},
           {"gap", gap},
           {"dim", loc.rows()}};
  if (!open && stats)
    res["condition"] = condition_json(
        check_theorem_conditions(*stats, rho, eta, range));
  return json{{"command", "localizer"},
              {"config", cfg},
              {"result", res},
              {"timing_ms", ms_since(t0)}};
}

int cmd_localizer(const LocalizerFlags& fl) {
  ModelParams p{fl.model, parse_complex(fl.m), fl.lambda, fl.seed};
  if (fl.rho.empty()) throw ConfigError("localizer: need at least one --rho");
  if (fl.boundary != "periodic" && fl.boundary != "open")
    throw ConfigError("boundary must be periodic or open");
  const bool open = fl.boundary == "open";
  double eta = 0;
  std::optional<OperatorStats> stats;
  int range = 0;
  if (!open) {
    eta = resolve_eta(fl.eta, p);
    TranslationInvariantOperator op = clean_operator(p);
    stats = operator_stats(op);
    range = op.range();
  }
  Sink sink(fl.out);
  const bool stream = fl.rho.size() > 1;
  for (int rho : fl.rho)
    emit(*sink.os, localizer_point(p, rho, fl.eta, eta, fl.s, fl.boundary,
                                   fl.kappa, stats ? &*stats : nullptr, range),
         stream);
  return 0;
}

// ---- spectrum -------------------------------------------------------------

struct SpectrumFlags {
  std::string model = "ssh";
  std::string m = "1";
  std::string eta = "auto";
  int rho = 0;
  double lambda = 0;
  std::uint64_t seed = 0;
  double s = 0;
  std::string out_h = "h_spectrum.csv";
  std::string out_loc = "localizer_spectrum.csv";
  std::string config_file;
};

int cmd_spectrum(const SpectrumFlags& fl) {
  auto t0 = std::chrono::steady_clock::now();
  ModelParams p{fl.model, parse_complex(fl.m), fl.lambda, fl.seed};
  if (fl.rho <= 0) throw ConfigError("spectrum: need --rho");
  const double eta = resolve_eta(fl.eta, p);
  FiniteVolumeOperator h = finite_model(p, fl.rho, Boundary::periodic);
  if (fl.s > 0) h = taper_matrix_elements(h, fl.s);
  Mat loc = model_is_chiral(p.name) ? odd_periodic_localizer(h, eta)
                                    : even_periodic_localizer(h, eta);
  Eigen::SelfAdjointEigenSolver<Mat> eh(h.matrix, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat> el(loc, Eigen::EigenvaluesOnly);
  const VecR& ev_h = eh.eigenvalues();
  const VecR& ev_l = el.eigenvalues();
  write_values_csv(fl.out_h, ev_h);
  write_values_csv(fl.out_loc, ev_l);
  auto count_near = [](const VecR& v, double c, double w) {
    long n = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v(i) - c) < w) ++n;
    return n;
  };
  json rec{
      {"command", "spectrum"},
      {"config",
       {{"model", p.name},
        {"m", format_complex(p.m)},
        {"rho", fl.rho},
        {"eta", fl.eta},
        {"eta_resolved", eta},
        {"lambda", p.lambda},
        {"seed", p.seed},
        {"s", fl.s},
        {"out_h", fl.out_h},
        {"out_loc", fl.out_loc},
        {"tolerances", tolerances_json()},
        {"version", version_string()}}},
      {"result",
       {{"h_count", ev_h.size()},
        {"loc_count", ev_l.size()},
        {"h_near_zero", count_near(ev_h, 0.0, 1e-8)},
        {"loc_near_plus2", count_near(ev_l, 2.0, 0.2)},
        {"loc_near_minus2", count_near(ev_l, -2.0, 0.2)}}},
      {"timing_ms", ms_since(t0)}};
  emit(std::cout, rec, false);
  return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepFlags {
  std::string model = "ssh";
  std::string m = "1";
  std::vector<int> rho;
  std::vector<std::string> eta{"auto"};
  std::vector<double> s{0.0};
  std::vector<std::uint64_t> seed{0};
  double lambda = 0;
  int threads = 0;
  std::string out;
  std::string config_file;
};

int cmd_sweep(const SweepFlags& fl) {
  if (fl.rho.empty()) throw ConfigError("sweep: need at least one --rho");
  ModelParams base{fl.model, parse_complex(fl.m), fl.lambda, 0};

  struct Point {
    int rho;
    std::size_t ie, is, iseed;
  };
  std::vector<Point> points;
  for (int rho : fl.rho)
    for (std::size_t ie = 0; ie < fl.eta.size(); ++ie)
      for (std::size_t is = 0; is < fl.s.size(); ++is)
        for (std::size_t iq = 0; iq < fl.seed.size(); ++iq)
          points.push_back({rho, ie, is, iq});

  Sink sink(fl.out);

  // Model-wide prep: the clean operator and its stats are shared by every
  // point (eta "auto" resolves against the clean norm). If this throws for
  // a computational reason, e.g. GapClosed on a gapless clean model, every
  // point is doomed the same way; tag each record and keep the exit code at
  // 0 so a larger scripted sweep is not torn down. Config mistakes still
  // propagate and exit 1.
  TranslationInvariantOperator op;
  OperatorStats stats;
  int range = 0;
  std::vector<double> eta_val(fl.eta.size());
  try {
    op = clean_operator(base);
    stats = operator_stats(op);
    range = op.range();
    for (std::size_t i = 0; i < fl.eta.size(); ++i)
      eta_val[i] = fl.eta[i] == "auto" ? stats.norm : resolve_eta(fl.eta[i], base);
  } catch (const ConfigError&) {
    throw;
  } catch (const Failure& e) {
    json err{{"type", failure_name(e)}, {"message", e.what()}};
    for (std::size_t i = 0; i < points.size(); ++i) {
      json rec{{"command", "sweep"}, {"error", err}, {"point", i}};
      *sink.os << rec.dump() << "\n";
    }
    return 0;
  }
  std::mutex mu;
  std::size_t flushed = 0;
  std::vector<std::optional<std::string>> done(points.size());
  auto flush_done = [&](std::size_t i, std::string line) {
    std::lock_guard<std::mutex> g(mu);
    done[i] = std::move(line);
    while (flushed < points.size() && done[flushed]) {
      *sink.os << *done[flushed] << "\n";
      done[flushed].reset();
      ++flushed;
    }
  };

  auto run_point = [&](std::size_t i) {
    const Point& pt = points[i];
    ModelParams p = base;
    p.seed = fl.seed[pt.iseed];
    json rec;
    try {
      rec = localizer_point(p, pt.rho, fl.eta[pt.ie], eta_val[pt.ie],
                            fl.s[pt.is], "periodic", 0.0, &stats, range);
      rec["command"] = "sweep";
    } catch (const Failure& e) {
      rec = json{{"command", "sweep"},
                 {"error", {{"type", failure_name(e)}, {"message", e.what()}}}};
    }
    rec["point"] = i;
    flush_done(i, rec.dump());
  };

  const int nthreads =
      std::max(1, std::min<int>(fl.threads > 0 ? fl.threads : env_threads(),
                                int(points.size())));
  if (nthreads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();)
          run_point(i);
      });
    for (auto& t : pool) t.join();
  }
  return 0;
}

// ---- z2 -------------------------------------------------------------------

struct Z2Flags {
  std::string which = "d1_diii";
  double m = 0.5;
  int rho = 0;
  std::string eta = "auto";
  double lambda = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string config_file;
};

int cmd_z2(const Z2Flags& fl) {
  auto t0 = std::chrono::steady_clock::now();
  if (fl.rho <= 0) throw ConfigError("z2: need --rho");
  DisorderSpec dis{fl.seed, fl.lambda};
  double eta = 0;
  json res;
  auto eta_or = [&](double auto_value) {
    if (fl.eta == "auto") return auto_value;
    try {
      return std::stod(fl.eta);
    } catch (const std::exception&) {
      throw ConfigError("bad eta: " + fl.eta + " (number or \"auto\")");
    }
  };
  if (fl.which == "d1_diii") {
    FiniteVolumeOperator h = diii_chain(fl.m, dis, fl.rho);
    eta = eta_or(op_norm(h.matrix));
    SkewPair pair = skew_localizer_d1_diii(chiral_block_of(h), fl.rho, eta);
    int pl = pfaffian_sign(pair.l_skew), pd = pfaffian_sign(pair.d_skew);
    res = json{{"pf_l", pl}, {"pf_d", pd}, {"index", pl * pd}};
  } else if (fl.which == "d2_aii") {
    TranslationInvariantOperator op = aii_model_clean(2, fl.m);
    eta = eta_or(operator_stats(op).norm);
    FiniteVolumeOperator h = aii_model(2, fl.m, dis, fl.rho);
    SkewPair pair = skew_localizer_d2_aii(h, aii_trs_fiber(2), eta);
    int pl = pfaffian_sign(pair.l_skew), pd = pfaffian_sign(pair.d_skew);
    res = json{{"pf_l", pl}, {"pf_d", pd}, {"index", pl * pd}};
  } else if (fl.which == "d3_aii") {
    TranslationInvariantOperator op = aii_model_clean(3, fl.m);
    eta = eta_or(operator_stats(op).norm);
    double imag_b = 0, imag_c = 0;
    SpMatR b = d3_det_block_sparse(op, dis, fl.rho, eta, aii_trs_fiber(3),
                                   false, &imag_b);
    SpMatR c = d3_det_block_sparse(op, dis, fl.rho, eta, aii_trs_fiber(3),
                                   true, &imag_c);
    int sb = sign_of_det_sparse(b), sc = sign_of_det_sparse(c);
    // for the block off-diagonal rotated pair, the determinant signs of the
    // two blocks carry the Pfaffian-sign ratio
    res = json{{"pf_l", sb},
               {"pf_d", sc},
               {"index", z2_index_d3(sb, sc)},
               {"discarded_imag", std::max(imag_b, imag_c)}};
  } else {
    throw ConfigError("unknown case: " + fl.which +
                      " (d1_diii, d2_aii, d3_aii)");
  }
  json rec{{"command", "z2"},
           {"config",
            {{"case", fl.which},
             {"m", fl.m},
             {"rho", fl.rho},
             {"eta", fl.eta},
             {"eta_resolved", eta},
             {"lambda", fl.lambda},
             {"seed", fl.seed},
             {"tolerances", tolerances_json()},
             {"version", version_string()}}},
           {"result", res},
           {"timing_ms", ms_since(t0)}};
  Sink sink(fl.out);
  emit(*sink.os, rec, false);
  return 0;
}

// ---- fuzzy ----------------------------------------------------------------

struct FuzzyFlags {
  int clock_shift = 0;
  std::string input;
  std::string out;
  std::string config_file;
};

Mat json_to_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ConfigError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (e.is_number())
        m(r, c) = cplx(e.get<double>(), 0);
      else if (e.is_array() && e.size() == 2)
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      else
        throw ConfigError("matrix entry must be a number or [re, im]");
    }
  }
  return m;
}

int cmd_fuzzy(const FuzzyFlags& fl) {
  auto t0 = std::chrono::steady_clock::now();
  FuzzyTorus torus;
  json cfg{{"tolerances", tolerances_json()}, {"version", version_string()}};
  if (fl.clock_shift > 0) {
    torus = clock_shift(fl.clock_shift);
    cfg["clock_shift"] = fl.clock_shift;
  } else if (!fl.input.empty()) {
    std::ifstream f(fl.input);
    if (!f) throw ConfigError("cannot open " + fl.input);
    json j;
    try {
      f >> j;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad JSON: ") + e.what());
    }
    if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty())
      throw ConfigError("input needs an \"ops\" array of matrices");
    std::vector<Mat> ops;
    for (const json& mj : j["ops"]) ops.push_back(json_to_matrix(mj));
    Mat graded;
    if (j.contains("graded")) graded = json_to_matrix(j["graded"]);
    torus = make_fuzzy_torus(std::move(ops), std::move(graded));
    cfg["input"] = fl.input;
  } else {
    throw ConfigError("fuzzy: need --clock-shift N or --input file.json");
  }

  bool unitary = true;
  for (const Mat& u : torus.ops) {
    Mat defect = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
    if (defect.cwiseAbs().maxCoeff() > 1e-10) unitary = false;
  }

  json sig = json::object();
  const int d = torus.d;
  for (int mask = 1; mask < (1 << d); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < d; ++j)
      if (mask & (1 << j)) idx.push_back(j + 1);
    std::string key;
    for (std::size_t i = 0; i < idx.size(); ++i)
      key += (i ? "," : "") + std::to_string(idx[i]);
    sig[key] = signature(g_operator(torus, idx));
  }

  json res{{"width", torus.width}, {"sig", sig}};
  try {
    res["gap_bound_invertible"] = gap_bound_invertible(torus);
  } catch (const WidthTooLarge&) {
    res["gap_bound_invertible"] = json();  // bound only defined for width <= 1/2
  }
  res["gap_bound_unitary"] = unitary ? json(gap_bound_unitary(torus)) : json();
  if (d == 2 && unitary)
    res["winding"] = det_path_winding(torus.ops[0], torus.ops[1]);
  json rec{{"command", "fuzzy"},
           {"config", cfg},
           {"result", res},
           {"timing_ms", ms_since(t0)}};
  Sink sink(fl.out);
  emit(*sink.os, rec, false);
  return 0;
}

// ---- degree ---------------------------------------------------------------

struct DegreeFlags {
  int d = 2;
  double m = 1;
  std::string out;
  std::string config_file;
};

int cmd_degree(const DegreeFlags& fl) {
  auto t0 = std::chrono::steady_clock::now();
  json res{{"deg_closed", degree_closed_form(fl.d, fl.m)},
           {"deg_preimage", degree_preimage(fl.d, fl.m)}};
  if (fl.d == 2) {
    res["chern_fhs"] = chern_fhs([&](double k1, double k2) {
      VecR k(2);
      k << k1, k2;
      return weyl_projection(2, fl.m, k);
    });
  }
  json rec{{"command", "degree"},
           {"config",
            {{"d", fl.d},
             {"m", fl.m},
             {"tolerances", tolerances_json()},
             {"version", version_string()}}},
           {"result", res},
           {"timing_ms", ms_since(t0)}};
  Sink sink(fl.out);
  emit(*sink.os, rec, false);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral localizer toolkit"};
  app.require_subcommand(1);

  LocalizerFlags lo;
  CLI::App* c_lo = app.add_subcommand(
      "localizer", "invariant of a periodic or open-boundary localizer");
  c_lo->add_option("--model", lo.model, "ssh, dirac2, dirac4");
  c_lo->add_option("--m", lo.m, "mass (complex literal, e.g. 0.9i)");
  c_lo->add_option("--rho", lo.rho, "box radius (repeat or comma list)")
      ->delimiter(',');
  c_lo->add_option("--eta", lo.eta, "spectral scale, number or auto");
  c_lo->add_option("--lambda", lo.lambda, "disorder amplitude in [0,1)");
  c_lo->add_option("--seed", lo.seed, "disorder seed");
  c_lo->add_option("--s", lo.s, "taper fraction, 0 disables");
  c_lo->add_option("--boundary", lo.boundary, "periodic or open");
  c_lo->add_option("--kappa", lo.kappa, "position weight (open boundary)");
  c_lo->add_option("--out", lo.out, "output file (default stdout)");
  c_lo->add_option("--config", lo.config_file, "JSON config file");

  SpectrumFlags sp;
  CLI::App* c_sp =
      app.add_subcommand("spectrum", "eigenvalues of H and localizer to CSV");
  c_sp->add_option("--model", sp.model, "ssh, dirac2, dirac4");
  c_sp->add_option("--m", sp.m, "mass (complex literal)");
  c_sp->add_option("--rho", sp.rho, "box radius");
  c_sp->add_option("--eta", sp.eta, "spectral scale, number or auto");
  c_sp->add_option("--lambda", sp.lambda, "disorder amplitude in [0,1)");
  c_sp->add_option("--seed", sp.seed, "disorder seed");
  c_sp->add_option("--s", sp.s, "taper fraction, 0 disables");
  c_sp->add_option("--out-h", sp.out_h, "CSV path for H eigenvalues");
  c_sp->add_option("--out-loc", sp.out_loc, "CSV path for localizer eigenvalues");
  c_sp->add_option("--config", sp.config_file, "JSON config file");

  SweepFlags sw;
  CLI::App* c_sw =
      app.add_subcommand("sweep", "Cartesian sweep over rho, eta, s, seed");
  c_sw->add_option("--model", sw.model, "ssh, dirac2, dirac4");
  c_sw->add_option("--m", sw.m, "mass (complex literal)");
  c_sw->add_option("--rho", sw.rho, "box radii")->delimiter(',');
  c_sw->add_option("--eta", sw.eta, "spectral scales")->delimiter(',');
  c_sw->add_option("--s", sw.s, "taper fractions")->delimiter(',');
  c_sw->add_option("--seed", sw.seed, "disorder seeds")->delimiter(',');
  c_sw->add_option("--lambda", sw.lambda, "disorder amplitude in [0,1)");
  c_sw->add_option("--threads", sw.threads,
                   "worker count (default SPECLOCAL_THREADS or 1)");
  c_sw->add_option("--out", sw.out, "output file (default stdout)");
  c_sw->add_option("--config", sw.config_file, "JSON config file");

  Z2Flags z2;
  CLI::App* c_z2 = app.add_subcommand("z2", "Pfaffian-sign Z2 index");
  c_z2->add_option("--case", z2.which, "d1_diii, d2_aii, d3_aii");
  c_z2->add_option("--m", z2.m, "mass (real)");
  c_z2->add_option("--rho", z2.rho, "box radius");
  c_z2->add_option("--eta", z2.eta, "spectral scale, number or auto");
  c_z2->add_option("--lambda", z2.lambda, "disorder amplitude in [0,1)");
  c_z2->add_option("--seed", z2.seed, "disorder seed");
  c_z2->add_option("--out", z2.out, "output file (default stdout)");
  c_z2->add_option("--config", z2.config_file, "JSON config file");

  FuzzyFlags fz;
  CLI::App* c_fz =
      app.add_subcommand("fuzzy", "width, gap bounds and signatures of a fuzzy torus");
  c_fz->add_option("--clock-shift", fz.clock_shift, "clock/shift pair size N");
  c_fz->add_option("--input", fz.input, "JSON file with ops (and graded)");
  c_fz->add_option("--out", fz.out, "output file (default stdout)");
  c_fz->add_option("--config", fz.config_file, "JSON config file");

  DegreeFlags dg;
  CLI::App* c_dg = app.add_subcommand("degree", "degree of the mass map");
  c_dg->add_option("--d", dg.d, "dimension");
  c_dg->add_option("--m", dg.m, "mass (real)");
  c_dg->add_option("--out", dg.out, "output file (default stdout)");
  c_dg->add_option("--config", dg.config_file, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_lo->parsed()) {
      json cf = load_config_file(lo.config_file);
      take(cf, c_lo, "model", lo.model);
      take(cf, c_lo, "m", lo.m);
      take(cf, c_lo, "rho", lo.rho);
      take(cf, c_lo, "eta", lo.eta);
      take(cf, c_lo, "lambda", lo.lambda);
      take(cf, c_lo, "seed", lo.seed);
      take(cf, c_lo, "s", lo.s);
      take(cf, c_lo, "boundary", lo.boundary);
      take(cf, c_lo, "kappa", lo.kappa);
      take(cf, c_lo, "out", lo.out);
      return cmd_localizer(lo);
    }
    if (c_sp->parsed()) {
      json cf = load_config_file(sp.config_file);
      take(cf, c_sp, "model", sp.model);
      take(cf, c_sp, "m", sp.m);
      take(cf, c_sp, "rho", sp.rho);
      take(cf, c_sp, "eta", sp.eta);
      take(cf, c_sp, "lambda", sp.lambda);
      take(cf, c_sp, "seed", sp.seed);
      take(cf, c_sp, "s", sp.s);
      take(cf, c_sp, "out-h", sp.out_h);
      take(cf, c_sp, "out-loc", sp.out_loc);
      return cmd_spectrum(sp);
    }
    if (c_sw->parsed()) {
      json cf = load_config_file(sw.config_file);
      take(cf, c_sw, "model", sw.model);
      take(cf, c_sw, "m", sw.m);
      take(cf, c_sw, "rho", sw.rho);
      take(cf, c_sw, "eta", sw.eta);
      take(cf, c_sw, "s", sw.s);
      take(cf, c_sw, "seed", sw.seed);
      take(cf, c_sw, "lambda", sw.lambda);
      take(cf, c_sw, "threads", sw.threads);
      take(cf, c_sw, "out", sw.out);
      return cmd_sweep(sw);
    }
    if (c_z2->parsed()) {
      json cf = load_config_file(z2.config_file);
      take(cf, c_z2, "case", z2.which);
      take(cf, c_z2, "m", z2.m);
      take(cf, c_z2, "rho", z2.rho);
      take(cf, c_z2, "eta", z2.eta);
      take(cf, c_z2, "lambda", z2.lambda);
      take(cf, c_z2, "seed", z2.seed);
      take(cf, c_z2, "out", z2.out);
      return cmd_z2(z2);
    }
    if (c_fz->parsed()) {
      json cf = load_config_file(fz.config_file);
      take(cf, c_fz, "clock-shift", fz.clock_shift);
      take(cf, c_fz, "input", fz.input);
      take(cf, c_fz, "out", fz.out);
      return cmd_fuzzy(fz);
    }
    if (c_dg->parsed()) {
      json cf = load_config_file(dg.config_file);
      take(cf, c_dg, "d", dg.d);
      take(cf, c_dg, "m", dg.m);
      take(cf, c_dg, "out", dg.out);
      return cmd_degree(dg);
    }
  } catch (const GapClosed& e) {
    std::cerr << "speclocal: " << e.what() << "\n";
    return 2;
  } catch (const Failure& e) {
    std::cerr << "speclocal: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "speclocal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
