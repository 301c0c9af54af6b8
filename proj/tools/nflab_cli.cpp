// Command-line front end: JSON-lines reports on stdout, CSV grids to --out.
//
// Exit codes: 0 every check passed; 1 a check failed (or a verdict was
// Violation); 2 usage or input error (including failed preconditions);
// 3 a high-precision verdict stayed indeterminate.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nflab/constants.hpp"
#include "nflab/dsl.hpp"
#include "nflab/report.hpp"
#include "nflab/root_engine.hpp"
#include "nflab/scenario.hpp"
#include "nflab/zalcman.hpp"
#include "nflab/zerofree_form.hpp"

using namespace nflab;

namespace {

struct Emitter {
  Config cfg;
  std::string hash;
  bool deterministic{false};
  int worst{0};

  void emit(const CheckReport& rep) {
    std::cout << report_to_json(rep, hash, deterministic).dump() << "\n";
    if (rep.verdict == Verdict::Fail) worst = std::max(worst, 1);
    if (rep.verdict == Verdict::HypothesisFailed) worst = std::max(worst, 2);
    if (rep.verdict == Verdict::Indeterminate) worst = std::max(worst, 3);
  }
};

Complex parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return Complex(std::stod(s), 0.0);
  return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

WeightFn parse_weight(const std::string& spec, std::optional<double> t0) {
  if (spec == "log2") return t0 ? WeightFn::log_squared(*t0) : WeightFn::log_squared();
  if (spec.rfind("powerlog:", 0) == 0) {
    const double p = std::stod(spec.substr(9));
    return t0 ? WeightFn::power_log(p, *t0) : WeightFn::power_log(p);
  }
  throw Error(ErrorCode::InvalidArgument, "weight must be 'log2' or 'powerlog:<p>'");
}

AnalyticFn load_named(const std::string& path, const std::string& name,
                      std::map<std::string, double> overrides = {}) {
  auto sources = dsl::load_fn_file(path);
  dsl::FnSource src = dsl::find_fn(sources, name);
  for (auto& [k, v] : overrides) src.params[k] = v;
  return src.compile();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for rescaling limits and radially "
               "constrained zeros of holomorphic functions"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool deterministic = false;
  int jobs = 1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_flag("--deterministic", deterministic, "omit timing fields from reports");
  app.add_option("--jobs", jobs, "parallel checks for scenario runs");
  app.add_option("--out", out_path, "output path for CSV grids");

  // constants
  auto* c_cmd = app.add_subcommand("constants", "sharp constants and the feasibility edge");
  std::optional<double> c_value;
  bool c_bisect = false;
  double c_tol = 1e-12;
  c_cmd->add_option("--C", c_value, "test feasibility of this constant");
  c_cmd->add_flag("--bisect", c_bisect, "bisect for the critical constant");
  c_cmd->add_option("--tol", c_tol, "bisection tolerance");

  // count
  auto* count_cmd = app.add_subcommand("count", "count a-points in a disk");
  std::string fn_file, fn_name, a_str = "0", disk_str = "0,0,1";
  count_cmd->add_option("--fn", fn_file, "function-spec JSON file")->required();
  count_cmd->add_option("--name", fn_name, "function name")->required();
  count_cmd->add_option("--a", a_str, "target value (re[,im])");
  count_cmd->add_option("--disk", disk_str, "disk cx,cy,r");

  // rescale
  auto* r_cmd = app.add_subcommand("rescale", "rescaling point selection / sequences");
  std::string r_fn, r_name, r_weight = "log2", r_ks, r_param = "k", r_a = "0";
  std::optional<double> r_t0;
  double r_eps = 1.0, r_eps0 = 5.0;
  r_cmd->add_option("--fn", r_fn, "function-spec JSON file")->required();
  r_cmd->add_option("--name", r_name, "function name")->required();
  r_cmd->add_option("--a", r_a, "search center (re[,im])");
  r_cmd->add_option("--eps", r_eps, "search radius");
  r_cmd->add_option("--weight", r_weight, "log2 | powerlog:<p>");
  r_cmd->add_option("--t0", r_t0, "weight threshold override");
  r_cmd->add_option("--ks", r_ks, "run a sequence over these parameter values");
  r_cmd->add_option("--param", r_param, "parameter swept by --ks");
  r_cmd->add_option("--eps0", r_eps0, "sequence schedule scale (eps_k = eps0/sqrt k)");

  // form
  auto* f_cmd = app.add_subcommand("form", "zero-free exponential form extraction");
  std::string f_fn, f_name;
  double f_R = 2000.0;
  std::optional<double> f_B;
  f_cmd->add_option("--fn", f_fn, "function-spec JSON file")->required();
  f_cmd->add_option("--name", f_name, "function name")->required();
  f_cmd->add_option("--R", f_R, "hypothesis radius");
  f_cmd->add_option("--B", f_B, "unit-point search radius");

  // lemma7
  auto* l_cmd = app.add_subcommand("lemma7", "zero/1-point pairing verdict on a sub-disk");
  std::string l_fn, l_name;
  double l_r = 0.5;
  l_cmd->add_option("--fn", l_fn, "function-spec JSON file")->required();
  l_cmd->add_option("--name", l_name, "function name")->required();
  l_cmd->add_option("--r", l_r, "sub-disk radius");

  // pj
  auto* pj_cmd = app.add_subcommand("pj", "Poisson-Jensen identity check");
  std::string pj_fn, pj_name, pj_b = "0.5";
  double pj_r = 1.0;
  pj_cmd->add_option("--fn", pj_fn, "function-spec JSON file")->required();
  pj_cmd->add_option("--name", pj_name, "function name")->required();
  pj_cmd->add_option("--b", pj_b, "evaluation point (re[,im])");
  pj_cmd->add_option("--r", pj_r, "disk radius");

  // scenario
  auto* s_cmd = app.add_subcommand("scenario", "bundled scenario suites");
  std::string s_id = "all", s_ks;
  s_cmd->add_option("id", s_id, "scenario id or 'all'");
  s_cmd->add_option("--ks", s_ks, "override the scenario schedule");

  // grid
  auto* g_cmd = app.add_subcommand("grid", "emit |f| and f# samples as CSV");
  std::string g_fn, g_name, g_disk = "0,0,1";
  int g_nr = 64, g_ntheta = 128;
  g_cmd->add_option("--fn", g_fn, "function-spec JSON file")->required();
  g_cmd->add_option("--name", g_name, "function name")->required();
  g_cmd->add_option("--disk", g_disk, "disk cx,cy,r");
  g_cmd->add_option("--nr", g_nr, "radial samples");
  g_cmd->add_option("--ntheta", g_ntheta, "angular samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Emitter em;
  try {
    em.cfg = config_path.empty() ? Config{} : Config::load(config_path);
    em.hash = config_hash(em.cfg);
    em.deterministic = deterministic;

    if (*c_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      CheckReport rep;
      rep.id = "constants.A";
      const auto A = hempel_lai_A();
      const auto gq = gamma_quarter();
      rep.value("A", A.decimal);
      rep.value("gamma_quarter", gq.decimal);
      rep.margin("error_bound", A.error_bound);
      rep.timing_ms = ms_since(t0);
      em.emit(rep);
      if (c_value) {
        CheckReport frep;
        frep.id = "constants.feasible";
        const auto v = critical_feasible(*c_value);
        frep.value("C", std::to_string(*c_value));
        frep.value("feasible", v.feasible ? "true" : "false");
        frep.value("lhs", v.lhs.decimal);
        frep.value("rhs", v.rhs.decimal);
        frep.margin("margin", v.margin);
        frep.margin("digits", v.digits_used);
        frep.timing_ms = ms_since(t0);
        em.emit(frep);
      }
      if (c_bisect) {
        CheckReport brep;
        brep.id = "constants.bisect";
        const double cstar = max_feasible_constant(c_tol);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", cstar);
        brep.value("C_star", buf);
        brep.margin("tol", c_tol);
        brep.timing_ms = ms_since(t0);
        em.emit(brep);
      }
    } else if (*count_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      auto f = load_named(fn_file, fn_name);
      const auto d = parse_list(disk_str);
      if (d.size() != 3) throw Error(ErrorCode::InvalidArgument, "--disk wants cx,cy,r");
      const auto rc = count_a_points(f, parse_complex(a_str), Disk(Complex(d[0], d[1]), d[2]));
      CheckReport rep;
      rep.id = "count";
      rep.value("count", std::to_string(rc.count));
      rep.margin("winding_residual", rc.winding_residual);
      rep.grid["samples"] = rc.samples;
      rep.timing_ms = ms_since(t0);
      em.emit(rep);
    } else if (*r_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      const WeightFn phi = parse_weight(r_weight, r_t0);
      if (r_ks.empty()) {
        auto f = load_named(r_fn, r_name);
        const auto cert = find_rescaling(f, parse_complex(r_a), r_eps, phi);
        CheckReport rep;
        rep.id = "rescale";
        rep.margin("rho", cert.rho);
        rep.margin("s", cert.s);
        rep.margin("r", cert.r);
        rep.margin("t", cert.t);
        rep.margin("bound_margin", cert.bound_margin);
        rep.value("c", dsl::detail::lit(cert.c));
        rep.value("b", dsl::detail::lit(cert.b));
        rep.value("weight", cert.weight);
        rep.timing_ms = ms_since(t0);
        em.emit(rep);
      } else {
        const auto ks = parse_list(r_ks);
        auto family = [&](double k) {
          return load_named(r_fn, r_name, {{r_param, k}});
        };
        const auto run = run_sequence(family, parse_complex(r_a), ks, phi, r_eps0);
        for (const auto& row : run.rows) {
          CheckReport rep;
          rep.id = "rescale.k=" + std::to_string(row.k);
          rep.margin("R", row.R);
          rep.margin("rho", row.cert.rho);
          rep.margin("s", row.cert.s);
          rep.margin("bound_margin", row.cert.bound_margin);
          rep.margin("bound12_margin", row.bound12_margin);
          rep.value("c", dsl::detail::lit(row.cert.c));
          rep.value("weight", row.cert.weight);
          rep.timing_ms = ms_since(t0);
          em.emit(rep);
        }
        CheckReport summary;
        summary.id = "rescale.sequence";
        summary.margin("radii_strictly_increasing", run.radii_strictly_increasing ? 1.0 : 0.0);
        if (!run.radii_strictly_increasing) summary.fail("R_k not strictly increasing");
        summary.timing_ms = ms_since(t0);
        em.emit(summary);
      }
    } else if (*f_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      auto g = load_named(f_fn, f_name);
      ExtractOptions opts;
      if (f_B) opts.B_used = *f_B;
      else opts.B_used = em.cfg.b_used;
      const auto form = extract_form(g, f_R, opts);
      const auto bounds = verify_form_bounds(form);
      CheckReport rep;
      rep.id = "form";
      rep.value("b", dsl::detail::lit(form.b()));
      rep.value("c", dsl::detail::lit(form.c()));
      rep.margin("c_abs", bounds.c_abs);
      rep.margin("c_lower", bounds.c_lower);
      rep.margin("c_upper", bounds.c_upper);
      rep.margin("delta_margin", bounds.delta_margin);
      rep.margin("growth_margin", form.hypothesis().growth_margin);
      rep.grid["delta_radial"] = bounds.grid_radial;
      rep.grid["delta_angular"] = bounds.grid_angular;
      rep.value("B_used", std::to_string(form.B_used()));
      if (!bounds.c_bound_ok || bounds.delta_margin < 0.0)
        rep.fail("form bounds violated", Json{{"delta_margin", bounds.delta_margin}});
      rep.timing_ms = ms_since(t0);
      em.emit(rep);
    } else if (*l_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      auto f = load_named(l_fn, l_name);
      const auto rep7 = verify_axis_pairing(f, l_r);
      CheckReport rep;
      rep.id = "lemma7";
      rep.value("verdict", pairing_verdict_name(rep7.verdict));
      rep.value("hypothesis_ok", rep7.hypothesis_ok ? "true" : "false");
      rep.margin("n_zeros", static_cast<double>(rep7.n_zeros));
      rep.margin("n_ones", static_cast<double>(rep7.n_ones));
      rep.margin("min_boundary_modulus", rep7.min_boundary_modulus);
      if (rep7.verdict == PairingVerdict::Violation && rep7.hypothesis_ok)
        rep.fail("pairing violation with hypotheses satisfied");
      rep.timing_ms = ms_since(t0);
      em.emit(rep);
    } else if (*pj_cmd) {
      const auto t0 = std::chrono::steady_clock::now();
      auto f = load_named(pj_fn, pj_name);
      const auto pj = poisson_jensen_check(f, parse_complex(pj_b), pj_r);
      CheckReport rep;
      rep.id = "pj";
      rep.margin("residual", pj.residual);
      rep.margin("log_fb", pj.log_fb);
      rep.margin("boundary_integral", pj.boundary_integral);
      rep.margin("zero_sum", pj.zero_sum);
      rep.grid["boundary_samples"] = pj.boundary_samples;
      rep.tolerances["residual"] = 1e-6;
      if (pj.residual > 1e-6) rep.fail("residual above tolerance");
      rep.timing_ms = ms_since(t0);
      em.emit(rep);
    } else if (*s_cmd) {
      const std::vector<double> ks = s_ks.empty() ? std::vector<double>{} : parse_list(s_ks);
      std::vector<std::string> ids =
          s_id == "all" ? scenario::scenario_ids() : std::vector<std::string>{s_id};
      const auto t0 = std::chrono::steady_clock::now();
      if (jobs > 1 && ids.size() > 1) {
        std::vector<std::future<std::vector<CheckReport>>> futs;
        futs.reserve(ids.size());
        for (const auto& id : ids)
          futs.push_back(std::async(std::launch::async, [&, id] {
            return scenario::run_by_id(id, em.cfg, ks);
          }));
        // declaration order regardless of completion order
        for (auto& fut : futs)
          for (auto rep : fut.get()) {
            rep.timing_ms = ms_since(t0);
            em.emit(rep);
          }
      } else {
        for (const auto& id : ids)
          for (auto rep : scenario::run_by_id(id, em.cfg, ks)) {
            rep.timing_ms = ms_since(t0);
            em.emit(rep);
          }
      }
    } else if (*g_cmd) {
      auto f = load_named(g_fn, g_name);
      const auto d = parse_list(g_disk);
      if (d.size() != 3) throw Error(ErrorCode::InvalidArgument, "--disk wants cx,cy,r");
      if (out_path.empty()) throw Error(ErrorCode::InvalidArgument, "grid needs --out");
      std::ofstream out(out_path);
      if (!out) throw Error(ErrorCode::IoError, "cannot open '" + out_path + "'");
      const SphericalEvaluator sph(f);
      out << "re,im,absf,sphderiv\n";
      char line[160];
      for (int i = 0; i <= g_nr; ++i) {
        const double rad = d[2] * i / g_nr;
        const int slots = i == 0 ? 1 : g_ntheta;
        for (int j = 0; j < slots; ++j) {
          const double th = 2.0 * M_PI * j / slots;
          const Complex z = Complex(d[0], d[1]) + std::polar(rad, th);
          const double la = f.eval_scaled(z).log_abs();
          const double absf = la > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(la);
          std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(),
                        absf, sph(z));
          out << line;
        }
      }
      CheckReport rep;
      rep.id = "grid";
      rep.value("out", out_path);
      rep.grid["nr"] = g_nr;
      rep.grid["ntheta"] = g_ntheta;
      em.emit(rep);
    }
  } catch (const Error& e) {
    CheckReport rep;
    rep.id = "error";
    rep.offending = Json{{"reason", e.what()}};
    switch (e.code()) {
      case ErrorCode::Indeterminate:
        rep.verdict = Verdict::Indeterminate;
        break;
      case ErrorCode::HypothesisFailed:
      case ErrorCode::HypothesisUnchecked:
        rep.verdict = Verdict::HypothesisFailed;
        break;
      default:
        rep.verdict = Verdict::Fail;
        std::cout << report_to_json(rep, em.hash, em.deterministic).dump() << "\n";
        std::cerr << e.what() << "\n";
        return 2;
    }
    std::cout << report_to_json(rep, em.hash, em.deterministic).dump() << "\n";
    return rep.verdict == Verdict::Indeterminate ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return em.worst == 2 ? 2 : em.worst;
}
