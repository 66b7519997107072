#include "sigflip/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "sigflip/hypersurface.hpp"
#include "sigflip/parallel.hpp"
#include "sigflip/rng.hpp"

namespace sigflip {
namespace {

using nlohmann::ordered_json;

// Verdict sampling budget. 200 domain samples keep verify under a second
// per gallery item while still exercising every sector; the off-H subset
// (|f-1| >= 1e-3) is what round-trip and rescaling checks run on.
constexpr int kVerifySamples = 200;
constexpr double kOffBand = 1e-3;
constexpr int kPositivityTrials = 1000;
constexpr double kVerdictTol = 1e-9;
constexpr double kFrameTol = 1e-10;
constexpr double kFactorizationTol = 1e-10;
constexpr double kComovingTol = 1e-12;

void emit_error(const char* category, const std::string& message) {
  ordered_json err;
  err["error"]["category"] = category;
  err["error"]["message"] = message;
  std::cerr << err.dump() << "\n";
}

template <class Fn>
int run_command(Fn&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const AnalysisError& e) {
    emit_error("analysis", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path: " + out_path);
  out << text << std::flush;
  if (!out) throw ConfigError("failed writing output: " + out_path);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string point_str(const Point& p) {
  std::string s = "(";
  for (long i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += fmt17(p[i]);
  }
  return s + ")";
}

ordered_json json_vec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json timings_json(const CliOptions& opts,
                          std::chrono::steady_clock::time_point t0) {
  if (!opts.timings) return nullptr;
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  ordered_json t;
  t["total_ms"] = ms;
  return t;
}

ordered_json hpoint_json(const HPoint& h) {
  ordered_json e;
  e["grid_index"] = h.grid_index;
  e["axis"] = h.axis;
  e["point"] = json_vec(h.q);
  e["det"] = h.det_value;
  e["det_gradient"] = json_vec(h.det_gradient);
  e["radical"] = json_vec(h.radical_basis);
  e["radical_class"] = to_string(h.radical_class);
  ordered_json sig;
  sig["n_neg"] = h.induced_signature.n_neg;
  sig["n_zero"] = h.induced_signature.n_zero;
  sig["n_pos"] = h.induced_signature.n_pos;
  sig["eigenvalues"] = h.induced_signature.eigenvalues;
  sig["tol"] = h.induced_signature.tol_used;
  e["induced_signature"] = std::move(sig);
  if (h.f_value)
    e["f_value"] = *h.f_value;
  else
    e["f_value"] = nullptr;
  return e;
}

// config echo + signature grid + located points; callers append verdicts
// and timings so the key order is fixed for every command.
ordered_json assemble_report(const Config& cfg, const MetricField& gt,
                             const LocateResult& loc, int threads) {
  Chart chart = cfg.make_chart();
  ordered_json rep;
  rep["config_echo"] = config_echo(cfg);

  std::vector<std::vector<int>> indices;
  std::vector<Point> nodes = grid_points(chart, cfg.grid, &indices);
  std::vector<std::array<int, 3>> sig(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    SignatureReport r = signature_at(gt, nodes[i], cfg.tol.zero_eig);
    sig[i] = {r.n_neg, r.n_zero, r.n_pos};
  });
  ordered_json grid_arr = ordered_json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ordered_json e;
    e["index"] = indices[i];
    e["point"] = json_vec(nodes[i]);
    e["signature"] = sig[i];
    grid_arr.push_back(std::move(e));
  }
  rep["signature_grid"] = std::move(grid_arr);

  ordered_json hp = ordered_json::array();
  for (const auto& h : loc.points) hp.push_back(hpoint_json(h));
  rep["h_points"] = std::move(hp);

  ordered_json de = ordered_json::array();
  for (const auto& d : loc.degenerate_edges) {
    ordered_json e;
    e["grid_index"] = d.grid_index;
    e["axis"] = d.axis;
    de.push_back(std::move(e));
  }
  rep["degenerate_edges"] = std::move(de);
  return rep;
}

Config load_with_seed(const std::string& spec, const CliOptions& opts) {
  Config cfg = load_config(spec);
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

std::vector<Expression> parse_vector_spec(
    const std::string& spec, const std::vector<std::string>& coords) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : spec) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != coords.size())
    throw ConfigError("--vector needs " + std::to_string(coords.size()) +
                      " comma-separated components, got " +
                      std::to_string(parts.size()));
  std::vector<Expression> out;
  out.reserve(parts.size());
  for (const auto& part : parts) out.push_back(Expression::parse(part, coords));
  return out;
}

}  // namespace

int cmd_analyze(const std::string& config_spec, const std::string& out_path,
                const CliOptions& opts) {
  return run_command([&]() -> int {
    auto t0 = std::chrono::steady_clock::now();
    Config cfg = load_with_seed(config_spec, opts);
    int threads = resolve_threads(opts.threads);

    std::shared_ptr<const ScalarField> f;
    std::shared_ptr<const MetricField> gt;
    if (cfg.mode == Mode::Triple) {
      Triple t = cfg.build_triple();
      f = t.f;
      gt = transform(t);
    } else {
      gt = cfg.build_metric();
    }

    LocateResult loc =
        locate_hypersurface(*gt, cfg.grid, cfg.tol, f.get(), threads);
    ordered_json rep = assemble_report(cfg, *gt, loc, threads);
    rep["verdicts"] = nullptr;
    rep["timings"] = timings_json(opts, t0);
    write_text(out_path, rep.dump(2) + "\n");
    return 0;
  });
}

int cmd_transform(const std::string& config_spec, const std::string& out_path,
                  const CliOptions& opts) {
  return run_command([&]() -> int {
    Config cfg = load_with_seed(config_spec, opts);
    if (cfg.mode != Mode::Triple)
      throw ConfigError("transform requires a triple-mode config");
    int threads = resolve_threads(opts.threads);

    Triple t = cfg.build_triple();
    auto gt = transform(t);
    Chart chart = cfg.make_chart();
    std::vector<Point> nodes = grid_points(chart, cfg.grid);
    const int n = chart.dim();

    std::string header;
    for (int i = 0; i < n; ++i) {
      if (i) header += ",";
      header += cfg.coords[i];
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        header += ",gt_" + std::to_string(i) + std::to_string(j);
    header += ",f,det_gt\n";

    std::vector<std::string> rows(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t k) {
      const Point& p = nodes[k];
      Eigen::MatrixXd G = evaluate_metric(*gt, p);
      double fv = t.f->value(p);
      double det = metric_determinant_value(*gt, p);
      std::string line;
      for (int i = 0; i < n; ++i) {
        if (i) line += ",";
        line += fmt17(p[i]);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) line += "," + fmt17(G(i, j));
      line += "," + fmt17(fv) + "," + fmt17(det) + "\n";
      rows[k] = std::move(line);
    });

    std::string out = header;
    for (auto& r : rows) out += r;
    write_text(out_path, out);
    return 0;
  });
}

int cmd_decompose(const std::string& config_spec, const std::string& out_path,
                  const CliOptions& opts) {
  return run_command([&]() -> int {
    Config cfg = load_with_seed(config_spec, opts);
    int threads = resolve_threads(opts.threads);
    Chart chart = cfg.make_chart();
    const int n = chart.dim();

    std::shared_ptr<const MetricField> gt;
    std::shared_ptr<const VectorField> V;
    if (cfg.gallery_name) {
      // Gallery items decompose their closed-form derived metric; the item's
      // own V is the default line field.
      gt = gallery_get(*cfg.gallery_name).gt_metric;
      if (!opts.vector_spec) {
        std::vector<Expression> comps;
        for (const auto& src : cfg.v_components)
          comps.push_back(Expression::parse(src, cfg.coords));
        V = std::make_shared<ExpressionVectorField>(std::move(comps));
      }
    } else {
      if (cfg.mode != Mode::Metric)
        throw ConfigError(
            "decompose requires a metric-mode config or a gallery item");
      gt = cfg.build_metric();
    }
    if (opts.vector_spec)
      V = std::make_shared<ExpressionVectorField>(
          parse_vector_spec(*opts.vector_spec, cfg.coords));
    if (!V)
      throw ConfigError("decompose needs --vector for metric-mode configs");
    if (V->dim() != n)
      throw ConfigError("vector field dimension does not match the chart");

    // The decomposed fields extrapolate g across the |c| < eps band; f is
    // closed-form everywhere. No validation samples: sector checks are done
    // per node below so the offending point is reported.
    Triple dec = decompose_field(gt, V, {});
    std::vector<Point> nodes = grid_points(chart, cfg.grid);
    const int n_entries = n * (n + 1) / 2;

    std::string header;
    for (int i = 0; i < n; ++i) {
      if (i) header += ",";
      header += cfg.coords[i];
    }
    header += ",f";
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        header += ",g_" + std::to_string(i) + std::to_string(j);
    header += ",extrapolated\n";

    std::vector<std::string> rows(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t k) {
      const Point& p = nodes[k];
      Eigen::MatrixXd G = evaluate_metric(*gt, p);
      Eigen::VectorXd v = V->values(p);
      double c = v.dot(G * v);
      SignatureReport sig = signature_of(G, cfg.tol.zero_eig);
      if (sig.lorentzian() && c >= 0.0)
        throw NotTimelikeInLorentzSector(
            "V is not timelike in the Lorentzian sector at " + point_str(p) +
            " (gt(V,V) = " + fmt17(c) + ")");

      bool extrap = std::abs(c) < kEpsH;
      double fv = dec.f->value(p);
      std::vector<double> gvals;
      gvals.reserve(n_entries);
      try {
        Eigen::MatrixXd gm = evaluate_metric(*dec.g, p);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) gvals.push_back(gm(i, j));
      } catch (const ExtrapolationFailure&) {
        // Unrecoverable band point: the row records f (still exact) and
        // flags the g entries rather than aborting the whole sweep.
        gvals.assign(n_entries, std::numeric_limits<double>::quiet_NaN());
      }

      std::string line;
      for (int i = 0; i < n; ++i) {
        if (i) line += ",";
        line += fmt17(p[i]);
      }
      line += "," + fmt17(fv);
      for (double gv : gvals) line += "," + fmt17(gv);
      line += extrap ? ",1\n" : ",0\n";
      rows[k] = std::move(line);
    });

    std::string out = header;
    for (auto& r : rows) out += r;
    write_text(out_path, out);
    return 0;
  });
}

int exit_code_from(const VerifyVerdicts& v) { return v.all_pass() ? 0 : 1; }

int cmd_verify(const std::string& config_spec, const std::string& out_path,
               const CliOptions& opts) {
  return run_command([&]() -> int {
    auto t0 = std::chrono::steady_clock::now();
    Config cfg = load_with_seed(config_spec, opts);
    if (cfg.mode != Mode::Triple)
      throw ConfigError("verify requires a triple (triple-mode config or "
                        "gallery item)");
    int threads = resolve_threads(opts.threads);
    Chart chart = cfg.make_chart();
    Triple T = cfg.build_triple();
    auto gt = transform(T);

    Rng rng(cfg.seed);
    std::vector<Point> samples;
    samples.reserve(kVerifySamples);
    for (int i = 0; i < kVerifySamples; ++i)
      samples.push_back(rng.point_in(chart));
    // Broken triples (wrong normalization, wrong signature) surface here as
    // AnalysisError, before any verdict is attempted.
    validate_triple(T, samples);

    std::vector<Point> off_h;
    for (const auto& p : samples)
      if (std::abs(T.f->value(p) - 1.0) >= kOffBand) off_h.push_back(p);

    LocateResult loc =
        locate_hypersurface(*gt, cfg.grid, cfg.tol, T.f.get(), threads);

    VerifyVerdicts v;
    ordered_json verdicts;

    {  // d(det) and df vanish together on H
      BiconditionalReport bic =
          verify_biconditional(T, loc.points, cfg.tol.classify);
      v.biconditional = bic.pass;
      ordered_json j;
      j["pass"] = bic.pass;
      j["max_deviation"] = bic.max_deviation;
      j["points"] = static_cast<int>(bic.entries.size());
      verdicts["biconditional"] = std::move(j);
    }

    {  // det gt = (1-f) g00 det(h), co-moving triples only
      bool comoving = true;
      for (const auto& p : samples) {
        Eigen::VectorXd vv = T.V->values(p);
        for (long i = 1; i < vv.size() && comoving; ++i)
          if (std::abs(vv[i]) > kComovingTol) comoving = false;
        if (!comoving) break;
      }
      v.det_factorization_applicable = comoving;
      ordered_json j;
      if (comoving) {
        FactorizationReport fr =
            verify_det_factorization(T, samples, kFactorizationTol);
        v.det_factorization = fr.pass;
        j["pass"] = fr.pass;
        j["max_deviation"] = fr.max_rel_deviation;
        j["applicable"] = true;
        j["samples"] = fr.n_samples;
      } else {
        v.det_factorization = true;  // vacuous; gated by applicable
        j["pass"] = nullptr;
        j["max_deviation"] = nullptr;
        j["applicable"] = false;
        j["samples"] = 0;
      }
      verdicts["det_factorization"] = std::move(j);
    }

    {  // gt positive on off-radical directions at every located H point
      std::vector<PositivityResult> pos(loc.points.size());
      parallel_for(loc.points.size(), threads, [&](std::size_t i) {
        pos[i] = positivity_check(*gt, loc.points[i].q, kPositivityTrials,
                                  Rng::substream(cfg.seed, i));
      });
      bool pass = true;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (const auto& r : pos) {
        pass = pass && r.pass;
        min_ratio = std::min(min_ratio, r.min_ratio);
      }
      if (!loc.points.empty()) pass = pass && min_ratio > 0.0;
      v.positivity = pass;
      ordered_json j;
      j["pass"] = pass;
      if (loc.points.empty()) {
        j["max_deviation"] = 0.0;
        j["min_ratio"] = nullptr;
      } else {
        j["max_deviation"] = min_ratio < 0.0 ? -min_ratio : 0.0;
        j["min_ratio"] = min_ratio;
      }
      j["trials_per_point"] = kPositivityTrials;
      j["h_points"] = static_cast<int>(loc.points.size());
      verdicts["positivity"] = std::move(j);
    }

    {  // decompose(transform(T)) == T off H
      Triple rec = decompose_field(gt, T.V, off_h);
      std::vector<double> dev(off_h.size(), 0.0);
      parallel_for(off_h.size(), threads, [&](std::size_t i) {
        const Point& p = off_h[i];
        double d = std::abs(rec.f->value(p) - T.f->value(p));
        Eigen::MatrixXd a = evaluate_metric(*rec.g, p);
        Eigen::MatrixXd b = evaluate_metric(*T.g, p);
        dev[i] = std::max(d, (a - b).cwiseAbs().maxCoeff());
      });
      double worst = 0.0;
      for (double d : dev) worst = std::max(worst, d);
      v.round_trip = worst <= kVerdictTol;
      ordered_json j;
      j["pass"] = v.round_trip;
      j["max_deviation"] = worst;
      j["samples"] = static_cast<int>(off_h.size());
      verdicts["round_trip"] = std::move(j);
    }

    {  // gt(E_i,E_j) = delta, gt(V,E_j) = 0, gt(V,V) = f-1 in a g-frame
      std::vector<double> dev(samples.size(), 0.0);
      parallel_for(samples.size(), threads, [&](std::size_t i) {
        const Point& p = samples[i];
        Frame fr = orthonormal_frame(*T.g, p, T.V->values(p));
        Eigen::MatrixXd Gt = evaluate_metric(*gt, p);
        double fv = T.f->value(p);
        double d = std::abs(fr.timelike.dot(Gt * fr.timelike) - (fv - 1.0));
        for (std::size_t a = 0; a < fr.spacelike.size(); ++a) {
          d = std::max(d, std::abs(fr.timelike.dot(Gt * fr.spacelike[a])));
          for (std::size_t b = 0; b < fr.spacelike.size(); ++b) {
            double want = a == b ? 1.0 : 0.0;
            d = std::max(
                d, std::abs(fr.spacelike[a].dot(Gt * fr.spacelike[b]) - want));
          }
        }
        dev[i] = d;
      });
      double worst = 0.0;
      for (double d : dev) worst = std::max(worst, d);
      v.frame_identities = worst <= kFrameTol;
      ordered_json j;
      j["pass"] = v.frame_identities;
      j["max_deviation"] = worst;
      j["samples"] = static_cast<int>(samples.size());
      verdicts["frame_identities"] = std::move(j);
    }

    {  // decomposing against phi*V rescales f by 1 + phi^2 (f-1) and leaves
       // the derived metric unchanged
      const double phis[] = {0.5, 2.0, 3.0};
      double worst = 0.0;
      bool equiv = true;
      for (double phi : phis) {
        auto v_phi = std::make_shared<ScaledVectorField>(T.V, phi);
        Triple t_phi = decompose_field(gt, v_phi, off_h);
        std::vector<double> dev(off_h.size(), 0.0);
        parallel_for(off_h.size(), threads, [&](std::size_t i) {
          const Point& p = off_h[i];
          dev[i] = std::abs(t_phi.f->value(p) -
                            rescaling_image(T.f->value(p), phi));
        });
        for (double d : dev) worst = std::max(worst, d);
        EquivalenceVerdict eq = triples_equivalent(T, t_phi, off_h, kVerdictTol);
        equiv = equiv && eq.equivalent;
        worst = std::max(worst, eq.max_deviation);
      }
      v.rescaling = equiv && worst <= kVerdictTol;
      ordered_json j;
      j["pass"] = v.rescaling;
      j["max_deviation"] = worst;
      j["phis"] = {0.5, 2.0, 3.0};
      verdicts["rescaling"] = std::move(j);
    }

    ordered_json rep = assemble_report(cfg, *gt, loc, threads);
    rep["verdicts"] = std::move(verdicts);
    rep["timings"] = timings_json(opts, t0);
    write_text(out_path, rep.dump(2) + "\n");
    return exit_code_from(v);
  });
}

}  // namespace sigflip
