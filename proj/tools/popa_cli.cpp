// Command-line front end: every command emits one JSON report on stdout.
// Exit codes: 0 = pass, 1 = verification failure, 2 = usage/domain error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "popa/json_io.hpp"
#include "popa/popa.hpp"
#include "popa/selftest.hpp"

namespace {

using popa::json;

std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw popa::ParseError("bad number '" + item + "' in '" + csv + "'");
    }
  }
  if (out.empty()) throw popa::ParseError("empty vector flag '" + csv + "'");
  return out;
}

std::vector<popa::Rational> parse_rationals(const std::string& csv) {
  std::vector<popa::Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(popa::parse_rational(item));
  if (out.empty()) throw popa::ParseError("empty vector flag '" + csv + "'");
  return out;
}

popa::ExtParam parse_ext(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return popa::ExtParam::inf();
  const double v = std::stod(text);
  if (v == 0.0) return popa::ExtParam::zero();
  return popa::ExtParam::fin(v);
}

json rational_vec_json(const std::vector<popa::Rational>& v) {
  json arr = json::array();
  for (const auto& c : v) arr.push_back(c.str());
  return arr;
}

struct Emitter {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t digest = 0xcbf29ce484222325ull;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void absorb(const std::string& s) { digest = fnv1a(s, digest); }

  int emit(json body, bool pass) {
    body["command"] = command;
    body["inputs_digest"] = hex64(digest);
    body["seed"] = seed;
    body["pass"] = pass;
    if (!body.contains("metrics")) body["metrics"] = json::object();
    body["wall_ms"] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    std::cout << body.dump(2) << "\n";
    return pass ? 0 : 1;
  }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("POPA_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw popa::ParseError("POPA_SEED is not an integer");
    }
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw popa::ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

int cmd_eval(Emitter& em, const std::string& rho_s, const std::string& x_s,
             const std::string& y_s, std::string op, bool rational) {
  em.absorb(rho_s + "|" + x_s + "|" + y_s + "|" + op);
  if (op.empty()) op = y_s.empty() ? "eta" : "circle";
  json body;
  if (rational) {
    const auto ctx = popa::make_ctx<popa::Rational>(parse_rationals(rho_s));
    const auto x = parse_rationals(x_s);
    if (op == "eta") body["result"] = popa::eta(ctx, x).str();
    else if (op == "member") body["result"] = popa::is_member(ctx, x);
    else if (op == "inverse") body["result"] = rational_vec_json(popa::inverse(ctx, x));
    else if (op == "circle")
      body["result"] = rational_vec_json(popa::circle(ctx, x, parse_rationals(y_s)));
    else throw popa::ParseError("unknown op '" + op + "'");
  } else {
    const auto ctx = popa::make_ctx<double>(parse_doubles(rho_s));
    const auto x = parse_doubles(x_s);
    if (op == "eta") body["result"] = popa::eta(ctx, x);
    else if (op == "member") body["result"] = popa::is_member(ctx, x);
    else if (op == "inverse") body["result"] = popa::inverse(ctx, x);
    else if (op == "circle") body["result"] = popa::circle(ctx, x, parse_doubles(y_s));
    else throw popa::ParseError("unknown op '" + op + "'");
  }
  return em.emit(std::move(body), true);
}

int cmd_witness(Emitter& em, const std::string& rho_s, const std::string& u_s,
                const std::string& v_s, bool rational) {
  em.absorb(rho_s + "|" + u_s + "|" + v_s);
  json body;
  if (rational) {
    const auto ctx = popa::make_ctx<popa::Rational>(parse_rationals(rho_s));
    const auto w = popa::sum_witness(ctx, parse_rationals(u_s), parse_rationals(v_s));
    body["witness"] = popa::witness_to_json(w);
  } else {
    const auto ctx = popa::make_ctx<double>(parse_doubles(rho_s));
    const auto w = popa::sum_witness(ctx, parse_doubles(u_s), parse_doubles(v_s));
    body["witness"] = popa::witness_to_json(w);
  }
  return em.emit(std::move(body), true);
}

int cmd_bo(Emitter& em, const std::string& rho_s, const std::string& sigma_s, double kappa,
           double t, bool verify, std::size_t pairs, double tol) {
  em.absorb(rho_s + "|" + sigma_s);
  const popa::ScalarHom hom{parse_ext(rho_s), parse_ext(sigma_s), kappa};
  json body;
  body["psi"] = popa::scalar_hom_eval(hom, t);
  bool pass = true;
  if (verify) {
    const popa::Report rep = popa::scalar_hom_residual_sweep(hom, pairs, em.seed, tol);
    body["metrics"] = popa::report_to_json(rep);
    pass = rep.pass;
  }
  return em.emit(std::move(body), pass);
}

int cmd_verify_hom(Emitter& em, const std::string& spec_path, std::size_t pairs, double tol) {
  const std::string raw = read_file(spec_path);
  em.absorb(raw);
  const popa::HomSpec spec = popa::load_homspec(spec_path);
  const auto ctx_x = popa::make_ctx<double>(spec.rho.coeffs);
  const auto ctx_y = popa::make_ctx<double>(spec.sigma.coeffs);
  const auto rep = popa::hom_residual_sweep(popa::as_callable(spec), ctx_x, ctx_y, pairs,
                                            em.seed, tol);
  json body;
  body["family"] = popa::family_name(spec.family);
  body["metrics"] = popa::report_to_json(rep);
  body["metrics"]["argmax_x"] = rep.argmax_x;
  body["metrics"]["argmax_y"] = rep.argmax_y;
  return em.emit(std::move(body), rep.pass);
}

int cmd_classify(Emitter& em, const std::string& spec_path, std::size_t probes) {
  const std::string raw = read_file(spec_path);
  em.absorb(raw);
  const popa::HomSpec spec = popa::load_homspec(spec_path);
  const auto ctx_x = popa::make_ctx<double>(spec.rho.coeffs);
  const auto ctx_y = popa::make_ctx<double>(spec.sigma.coeffs);
  popa::ClassifyOptions opt;
  opt.n_probes = probes;
  opt.seed = em.seed;
  const popa::ClassifiedHom got =
      popa::classify_hom(popa::as_callable(spec), ctx_x, ctx_y, opt);
  json body;
  body["family"] = popa::family_name(got.family);
  body["spec"] = popa::homspec_to_json(got.spec);
  json metrics;
  metrics["fit_residual"] = got.fit_residual;
  metrics["probe_residual"] = got.probe_residual;
  metrics["log"] = got.probe_log;
  body["metrics"] = metrics;
  return em.emit(std::move(body), true);
}

int cmd_grv(Emitter& em, const std::string& bundle_name, const std::string& xs,
            popa::grv::Schedule sched) {
  em.absorb(bundle_name + "|" + xs);
  popa::grv::Bundle bundle = popa::grv::builtin_bundle(bundle_name);
  bundle.problem.schedule = sched;
  json body;
  json points = json::array();
  bool pass = true;
  for (double probe : parse_doubles(xs)) {
    const double z = bundle.probe_map(probe);
    const auto est = popa::grv::kernel(bundle.problem, {z});
    const auto aux = popa::grv::auxiliary(bundle.problem, {z});
    json pt;
    pt["x"] = probe;
    pt["kernel"] = est.scalar();
    pt["kernel_exact"] = bundle.kernel_exact(z);
    pt["abs_error"] = std::fabs(est.scalar() - bundle.kernel_exact(z));
    pt["g"] = aux.scalar();
    pt["t_final"] = est.t_final;
    pt["steps"] = est.steps;
    points.push_back(pt);
    pass = pass && est.converged && pt["abs_error"].get<double>() <= 1e-4;
  }
  body["bundle"] = bundle_name;
  body["note"] = bundle.note;
  body["points"] = points;
  return em.emit(std::move(body), pass);
}

int cmd_evt_fit(Emitter& em, const std::string& csv_path) {
  const std::string raw = read_file(csv_path);
  em.absorb(raw);
  std::vector<std::pair<double, double>> samples;
  std::stringstream ss(raw);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (header) {  // one-line header
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw popa::ParseError("CSV row without comma: " + line);
    try {
      samples.emplace_back(std::stod(line.substr(0, comma)),
                           std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw popa::ParseError("bad CSV row: " + line);
    }
  }
  const auto fit = popa::evt::fit_E(samples);
  json body;
  body["kappa"] = fit.params.kappa;
  body["gamma"] = fit.params.gamma;
  body["residual"] = fit.residual;
  body["degenerate"] = fit.degenerate;
  body["metrics"]["samples"] = samples.size();
  return em.emit(std::move(body), true);
}

const char* gev_conventional_name(double gamma) {
  // Fisher-Tippett convention; sources disagree on the historical labels,
  // so the sign-based regime is always reported alongside.
  if (gamma > 1e-8) return "frechet";
  if (gamma < -1e-8) return "weibull";
  return "gumbel";
}

int cmd_haar_measure(Emitter& em, const std::string& rho_s, const std::string& lo_s,
                     const std::string& hi_s, const std::string& side_s, std::size_t n) {
  em.absorb(rho_s + "|" + lo_s + "|" + hi_s + "|" + side_s);
  const auto ctx = popa::make_ctx<double>(parse_doubles(rho_s));
  const popa::haar::Box box{parse_doubles(lo_s), parse_doubles(hi_s)};
  const auto side = side_s == "left" ? popa::haar::Side::Left : popa::haar::Side::Right;
  const auto est = popa::haar::measure_mc({ctx, box, side, n, em.seed});
  json body;
  body["estimate"] = est.value;
  body["std_error"] = est.std_error;
  body["n"] = est.n;
  return em.emit(std::move(body), true);
}

int cmd_haar_invariance(Emitter& em, const std::string& rho_s, const std::string& lo_s,
                        const std::string& hi_s, const std::string& a_s,
                        const std::string& side_s, std::size_t n) {
  em.absorb(rho_s + "|" + lo_s + "|" + hi_s + "|" + a_s + "|" + side_s);
  const auto ctx = popa::make_ctx<double>(parse_doubles(rho_s));
  const popa::haar::Box box{parse_doubles(lo_s), parse_doubles(hi_s)};
  const auto side = side_s == "left" ? popa::haar::Side::Left : popa::haar::Side::Right;
  const auto rep =
      popa::haar::invariance_check(ctx, box, parse_doubles(a_s), side, n, em.seed);
  json body;
  body["base"] = {{"estimate", rep.base.value}, {"std_error", rep.base.std_error}};
  body["translated"] = {{"estimate", rep.translated.value},
                        {"std_error", rep.translated.std_error}};
  body["deviation"] = rep.deviation;
  body["combined_se"] = rep.combined_se;
  return em.emit(std::move(body), rep.pass);
}

int cmd_selftest(Emitter& em) {
  const auto suite = popa::selftest::run_suite(em.seed);
  json body;
  json criteria = json::array();
  for (const auto& c : suite.criteria) {
    json cj;
    cj["index"] = c.index;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["metric"] = c.metric;
    cj["threshold"] = c.threshold;
    cj["details"] = c.details;
    cj["wall_ms"] = c.wall_ms;
    criteria.push_back(cj);
  }
  body["criteria"] = criteria;
  return em.emit(std::move(body), suite.pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Popa circle groups: group arithmetic, homomorphisms, kernels, measures"};
  app.require_subcommand(1);

  Emitter em;
  try {
    em.seed = default_seed();
  } catch (const popa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (int i = 1; i < argc; ++i) em.absorb(argv[i]);

  std::string rho_s, sigma_s, x_s, y_s, u_s, v_s, a_s, lo_s, hi_s, op, spec_path, csv_path;
  std::string side_s = "right", bundle;
  bool rational = false, verify = false, json_flag = false;
  double kappa = 1.0, t_arg = 1.0, gamma = 0.0, x_val = 0.0, tol = 1e-9;
  std::size_t pairs = 10000, probes = 64, n_mc = 1000000;
  popa::grv::Schedule sched;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", em.seed, "seed recorded in the report");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate group operations");
  eval->add_option("--rho", rho_s, "rho coefficients, comma separated")->required();
  eval->add_option("--x", x_s, "point x")->required();
  eval->add_option("--y", y_s, "point y (selects the circle product)");
  eval->add_option("--op", op, "eta | member | circle | inverse");
  eval->add_flag("--rational", rational, "exact rational arithmetic; entries like 3/4");
  add_seed(eval);

  CLI::App* witness = app.add_subcommand("witness", "sum witness u+v as a circle word");
  witness->add_option("--rho", rho_s)->required();
  witness->add_option("--u", u_s)->required();
  witness->add_option("--v", v_s)->required();
  witness->add_flag("--rational", rational);
  add_seed(witness);

  CLI::App* bo = app.add_subcommand("bo", "scalar homomorphism table");
  bo->add_option("--rho", rho_s, "0, positive real, or inf")->required();
  bo->add_option("--sigma", sigma_s, "0, positive real, or inf")->required();
  bo->add_option("--kappa", kappa)->required();
  bo->add_option("--t", t_arg)->required();
  bo->add_flag("--verify", verify, "sweep the homomorphy residual");
  bo->add_option("--pairs", pairs);
  bo->add_option("--tol", tol);
  add_seed(bo);

  CLI::App* vh = app.add_subcommand("verify-hom", "residual sweep for a HomSpec file");
  vh->add_option("--spec", spec_path)->required();
  vh->add_option("--pairs", pairs);
  vh->add_option("--tol", tol);
  add_seed(vh);

  CLI::App* cls = app.add_subcommand("classify", "classify a HomSpec as a black box");
  cls->add_option("--spec", spec_path)->required();
  cls->add_option("--probes", probes);
  add_seed(cls);

  CLI::App* grv_cmd = app.add_subcommand("grv", "regular-variation kernel estimates");
  grv_cmd->add_option("--bundle", bundle, "log | exp | dehaan")->required();
  grv_cmd->add_option("--x", x_s, "probe points, comma separated")->required();
  grv_cmd->add_option("--t0", sched.t0);
  grv_cmd->add_option("--ratio", sched.ratio);
  grv_cmd->add_option("--kmax", sched.k_max);
  grv_cmd->add_option("--tol", sched.tol_rel);
  grv_cmd->add_option("--streak", sched.streak);
  add_seed(grv_cmd);

  CLI::App* evt_cmd = app.add_subcommand("evt", "extreme-value kernels");
  evt_cmd->require_subcommand(1);
  CLI::App* evt_eval = evt_cmd->add_subcommand("eval", "kernel E and auxiliary A");
  evt_eval->add_option("--kappa", kappa)->required();
  evt_eval->add_option("--gamma", gamma)->required();
  evt_eval->add_option("--t", t_arg)->required();
  add_seed(evt_eval);
  CLI::App* evt_gev = evt_cmd->add_subcommand("gev", "generalised extreme-value CDF");
  evt_gev->add_option("--gamma", gamma)->required();
  evt_gev->add_option("--x", x_val)->required();
  add_seed(evt_gev);
  CLI::App* evt_fit = evt_cmd->add_subcommand("fit", "fit (kappa, gamma) from CSV (t,E)");
  evt_fit->add_option("--csv", csv_path)->required();
  add_seed(evt_fit);
  CLI::App* evt_res = evt_cmd->add_subcommand("residual", "Goldie residual sweep");
  evt_res->add_option("--kappa", kappa)->required();
  evt_res->add_option("--gamma", gamma)->required();
  evt_res->add_option("--pairs", pairs);
  add_seed(evt_res);

  CLI::App* haar_cmd = app.add_subcommand("haar", "invariant measure estimates");
  haar_cmd->require_subcommand(1);
  CLI::App* hm = haar_cmd->add_subcommand("measure", "measure of a box");
  hm->add_option("--rho", rho_s)->required();
  hm->add_option("--lo", lo_s)->required();
  hm->add_option("--hi", hi_s)->required();
  hm->add_option("--side", side_s, "right (1/eta) or left (1/eta^d)");
  hm->add_option("--n", n_mc);
  add_seed(hm);
  CLI::App* hi = haar_cmd->add_subcommand("invariance", "translate-invariance check");
  hi->add_option("--rho", rho_s)->required();
  hi->add_option("--lo", lo_s)->required();
  hi->add_option("--hi", hi_s)->required();
  hi->add_option("--a", a_s, "translation element")->required();
  hi->add_option("--side", side_s);
  hi->add_option("--n", n_mc);
  add_seed(hi);

  CLI::App* st = app.add_subcommand("selftest", "run the acceptance criteria");
  st->add_flag("--json", json_flag, "emit JSON (always on)");
  add_seed(st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (eval->parsed()) {
      em.command = "eval";
      return cmd_eval(em, rho_s, x_s, y_s, op, rational);
    }
    if (witness->parsed()) {
      em.command = "witness";
      return cmd_witness(em, rho_s, u_s, v_s, rational);
    }
    if (bo->parsed()) {
      em.command = "bo";
      return cmd_bo(em, rho_s, sigma_s, kappa, t_arg, verify, pairs, tol);
    }
    if (vh->parsed()) {
      em.command = "verify-hom";
      return cmd_verify_hom(em, spec_path, pairs, tol);
    }
    if (cls->parsed()) {
      em.command = "classify";
      return cmd_classify(em, spec_path, probes);
    }
    if (grv_cmd->parsed()) {
      em.command = "grv";
      return cmd_grv(em, bundle, x_s, sched);
    }
    if (evt_cmd->parsed()) {
      if (evt_eval->parsed()) {
        em.command = "evt eval";
        json body;
        body["E"] = popa::evt::evt_E({kappa, gamma}, t_arg);
        body["A"] = popa::evt::evt_A(gamma, t_arg);
        return em.emit(std::move(body), true);
      }
      if (evt_gev->parsed()) {
        em.command = "evt gev";
        json body;
        body["cdf"] = popa::evt::gev_cdf(gamma, x_val);
        body["regime_by_sign"] = gamma > 1e-8 ? "positive" : (gamma < -1e-8 ? "negative" : "zero");
        body["name"] = gev_conventional_name(gamma);
        return em.emit(std::move(body), true);
      }
      if (evt_fit->parsed()) {
        em.command = "evt fit";
        return cmd_evt_fit(em, csv_path);
      }
      em.command = "evt residual";
      popa::Rng rng(em.seed);
      std::vector<std::pair<double, double>> sample_pairs;
      for (std::size_t i = 0; i < pairs; ++i)
        sample_pairs.emplace_back(rng.uniform(0.25, 4.0), rng.uniform(0.25, 4.0));
      const auto rep = popa::evt::evt_goldie_residual({kappa, gamma}, sample_pairs);
      json body;
      body["metrics"] = popa::report_to_json(rep);
      return em.emit(std::move(body), rep.max_residual <= 1e-12);
    }
    if (haar_cmd->parsed()) {
      if (hm->parsed()) {
        em.command = "haar measure";
        return cmd_haar_measure(em, rho_s, lo_s, hi_s, side_s, n_mc);
      }
      em.command = "haar invariance";
      return cmd_haar_invariance(em, rho_s, lo_s, hi_s, a_s, side_s, n_mc);
    }
    if (st->parsed()) {
      em.command = "selftest";
      return cmd_selftest(em);
    }
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const popa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
