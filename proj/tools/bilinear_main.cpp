// Batch front-end: spectrum tables, hypercontractivity and cube reports,
// expansion sweeps, and the lemma verification driver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bilinear/cube.hpp"
#include "bilinear/expansion.hpp"
#include "bilinear/globalness.hpp"
#include "bilinear/io.hpp"
#include "bilinear/oracle.hpp"
#include "bilinear/operators.hpp"

using namespace bilinear;
using nlohmann::ordered_json;

namespace {

struct OutputSink {
  std::string dir;

  void emit(const std::string& name, const std::string& payload) const {
    if (dir.empty()) {
      std::cout << payload;
      return;
    }
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    f << payload;
  }
};

// builtin:sharpness[:d] | builtin:rank-threshold:r | builtin:random-boolean:density,seed
// | <path to a function file>
MapFunction resolve_function(const std::string& desc, const SpacePtr& sp, int default_d,
                             std::optional<uint64_t> seed) {
  std::string rest;
  if (desc.rfind("builtin:", 0) == 0)
    rest = desc.substr(8);
  else if (desc.rfind("random:", 0) == 0)
    rest = desc;  // bare random:density,seed shorthand
  else
    return load_map_function(desc);
  auto colon = rest.find(':');
  std::string kind = rest.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : rest.substr(colon + 1);
  if (auto eq = arg.find('='); eq != std::string::npos) arg = arg.substr(eq + 1);
  if (kind == "sharpness") {
    int d = arg.empty() ? default_d : std::stoi(arg);
    return sharpness_function(sp, d);
  }
  if (kind == "rank-threshold") {
    if (arg.empty()) throw CLI::ValidationError("rank-threshold needs a rank bound");
    return rank_threshold_indicator(sp, std::stoi(arg));
  }
  if (kind == "random-boolean" || kind == "random") {
    auto comma = arg.find(',');
    double density = std::stod(arg.substr(0, comma));
    std::optional<uint64_t> s = seed;
    if (comma != std::string::npos) s = std::stoull(arg.substr(comma + 1));
    if (!s) throw CLI::ValidationError("seeded run required: pass random:density,seed or --seed");
    return random_boolean_function(sp, density, *s);
  }
  throw CLI::ValidationError("unknown builtin: " + desc);
}

ordered_json hyp_to_json(const HypReport& r) {
  return ordered_json{{"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"ratio", r.ratio},
                      {"observed_constant", r.observed_constant},
                      {"observed_exponent", r.observed_exponent},
                      {"pass", r.pass}};
}

int run_spectrum(const std::string& fn_desc, int q, int n, int m,
                 std::optional<uint64_t> seed, const OutputSink& sink) {
  SpacePtr sp = make_space(q, n, m);
  MapFunction f = resolve_function(fn_desc, sp, 1, seed);
  Spectrum s = transform(f);
  auto mass = rank_mass(s);
  ordered_json j;
  j["q"] = q;
  j["n"] = n;
  j["m"] = m;
  j["function"] = fn_desc;
  j["norm2_sq"] = norm2_sq(f);
  j["fourier_degree"] = fourier_degree(s);
  ordered_json table = ordered_json::array();
  for (std::size_t d = 0; d < mass.size(); ++d)
    table.push_back(ordered_json{{"degree", d}, {"mass", mass[d]}});
  j["rank_mass"] = table;
  sink.emit("spectrum.json", j.dump(2) + "\n");
  return 0;
}

int run_check_hyp(const std::string& fn_desc, int q, int n, int m, int d,
                  std::optional<uint64_t> seed, const OutputSink& sink) {
  SpacePtr sp = make_space(q, n, m);
  SpaceContext ctx(sp);
  MapFunction f = resolve_function(fn_desc, sp, d, seed);
  ordered_json j;
  j["q"] = q;
  j["n"] = n;
  j["m"] = m;
  j["d"] = d;
  j["function"] = fn_desc;

  auto cert = certify_restriction_global(ctx, f, d, 1.0);
  j["globalness_level"] = cert.worst_value;
  j["worst_triple"] = ordered_json{
      {"v1", cert.worst_triple.v1.row_codes(ctx.field())},
      {"w1", cert.worst_triple.w1.row_codes(ctx.field())},
      {"t", mat_to_text(ctx.field(), cert.worst_triple.t)}};

  MapFunction trunc = degree_truncate(f, d);
  bool ran_hyp = norm2_sq(trunc) > 1e-15;
  if (ran_hyp) j["conditional_hyp"] = hyp_to_json(check_bilinear_hypercontractivity(ctx, trunc, d));
  auto gb = check_restriction_global_bonami(ctx, f, d, cert.worst_value);
  j["global_bonami"] = hyp_to_json(gb.trunc);
  j["influence_form"] = hyp_to_json(gb.influences);
  j["trunc_influence_chain_pass"] = gb.trunc_influence_pass;

  bool boolean = true;
  for (const cd& z : f.v)
    if (std::abs(z) > 1e-12 && std::abs(z - 1.0) > 1e-12) boolean = false;
  bool pass = gb.pass && (!ran_hyp || j["conditional_hyp"]["pass"].get<bool>());
  if (boolean) {
    auto ld = check_level_d(ctx, f, d, cert.worst_value);
    j["level_d"] = ordered_json{{"eps", ld.eps},
                                {"level_mass", ld.level_mass},
                                {"bound", ld.bound},
                                {"mass_profile", ld.mass_profile},
                                {"pass", ld.pass}};
    pass = pass && ld.pass;
  }
  j["pass"] = pass;
  sink.emit("check-hyp.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

int run_check_cube(const std::string& fn_desc, int p, int n, int d, double rho,
                   std::optional<uint64_t> seed, const OutputSink& sink) {
  CubeSpace sp(p, n);
  CubeFunction f(sp);
  if (fn_desc.rfind("builtin:", 0) == 0) {
    std::string rest = fn_desc.substr(8);
    if (rest.rfind("random-boolean:", 0) == 0) {
      std::string arg = rest.substr(15);
      auto comma = arg.find(',');
      double density = std::stod(arg.substr(0, comma));
      uint64_t s = comma != std::string::npos ? std::stoull(arg.substr(comma + 1))
                                              : (seed ? *seed : throw CLI::ValidationError(
                                                     "seeded run required for random fixtures"));
      std::mt19937_64 rng(s);
      std::bernoulli_distribution bit(density);
      for (auto& z : f.v) z = bit(rng) ? 1.0 : 0.0;
    } else if (rest == "dictator") {
      for (std::size_t x = 0; x < sp.size; ++x) f.v[x] = sp.digit(x, 0) == 0 ? 1.0 : 0.0;
    } else {
      throw CLI::ValidationError("unknown cube builtin: " + fn_desc);
    }
  } else {
    f = load_cube_function(fn_desc);
  }

  ordered_json j;
  j["p"] = p;
  j["n"] = n;
  j["d"] = d;
  j["rho"] = rho;
  j["function"] = fn_desc;
  bool boolean01 = true;
  for (const cd& z : f.v)
    if (std::abs(z) > 1e-12 && std::abs(z - 1.0) > 1e-12) boolean01 = false;
  bool pass = true;
  if (boolean01) {
    auto rep = check_cube_sse(f, rho, d);
    j["sse"] = ordered_json{{"epsilon", rep.epsilon},
                            {"stay_prob", rep.stay_prob},
                            {"bound", rep.bound},
                            {"pass", rep.pass},
                            {"influence_lemma_pass", rep.lemma_influence_pass},
                            {"trunc4_pass", rep.trunc4_pass},
                            {"level_pass", rep.level_pass}};
    pass = pass && rep.pass && rep.lemma_influence_pass && rep.trunc4_pass && rep.level_pass;
  }
  CubeFunction trunc = cube_truncate(f, d);
  if (cube_norm2_sq(trunc) > 1e-15) {
    auto rep = check_cube_hypercontractivity(trunc, d);
    j["hypercontractivity"] = ordered_json{{"lhs", rep.lhs},
                                           {"rhs", rep.rhs},
                                           {"ratio", rep.ratio},
                                           {"pass", rep.pass},
                                           {"inductive_pass", rep.inductive_pass},
                                           {"bonami_pass", rep.bonami_pass}};
    pass = pass && rep.pass && rep.inductive_pass && rep.bonami_pass;
  }
  j["pass"] = pass;
  sink.emit("check-cube.json", j.dump(2) + "\n");
  return pass ? 0 : 1;
}

int run_expansion(const std::string& set_desc, int q, int n, int m, int r, double c0,
                  std::optional<uint64_t> seed, const OutputSink& sink) {
  SpacePtr sp = make_space(q, n, m);
  SpaceContext ctx(sp);
  ShortcodeGraph g = make_shortcode_graph(sp);
  MapFunction s = resolve_function(set_desc, sp, 1, seed);
  auto rep = check_sse_theorem(ctx, g, s, r, c0);
  std::string set_id = set_desc;
  if (set_id.find(',') != std::string::npos) set_id = "\"" + set_id + "\"";
  std::ostringstream csv;
  csv << "q,n,m,set_id,globalness_order,globalness_level,stay_prob,bound\n";
  csv << q << "," << n << "," << m << "," << set_id << "," << (r + 1) << ","
      << rep.globalness << "," << rep.stay_prob << "," << rep.bound << "\n";
  sink.emit("expansion.csv", csv.str());
  return rep.conclusion_ok ? 0 : 1;
}

int run_verify_lemmas(int q, int n, int m, long samples, uint64_t seed, bool desk_profile,
                      const OutputSink& sink) {
  std::vector<std::tuple<int, int, int>> configs;
  if (desk_profile) {
    configs = {{2, 2, 2}, {2, 2, 3}, {2, 3, 2}, {3, 2, 2}, {2, 3, 3}};
  } else {
    configs = {{q, n, m}};
  }
  std::ostringstream lines;
  bool all_pass = true;
  auto emit = [&](const LemmaReport& rep) {
    ordered_json j{{"lemma_id", rep.lemma_id},
                   {"instances_checked", rep.instances_checked},
                   {"max_err", rep.max_err},
                   {"pass", rep.pass},
                   {"exhaustive", rep.exhaustive},
                   {"seed", rep.seed}};
    lines << j.dump() << "\n";
    all_pass = all_pass && rep.pass;
  };
  auto emit_calc = [&](const CalcReport& rep) {
    ordered_json j{{"lemma_id", rep.id},
                   {"instances_checked", rep.instances},
                   {"max_err", rep.max_err},
                   {"pass", rep.pass},
                   {"exhaustive", rep.exhaustive},
                   {"seed", rep.seed}};
    lines << j.dump() << "\n";
    all_pass = all_pass && rep.pass;
  };
  for (auto [cq, cn, cm] : configs) {
    OracleBudget b;
    b.samples = samples;
    b.seed = seed;
    emit(check_trace_lemma(cq, cn, cm, b));
    emit(check_equivalence_lemma(cq, cn, cm, b));
    emit(check_unique_triple_lemma(cq, cn, cm, b));
    emit(check_swapping_lemmas(cq, cn, cm, b));
    emit(check_trichotomy(cq, cn, cm, b));
    bool small = ipow(cq, static_cast<unsigned>(cn * cm)) <= 16;
    emit_calc(verify_derivative_composition(cq, cn, cm, small, samples, seed));
    emit_calc(verify_laplacian_restriction_sum(cq, cn, cm, small, samples, seed));
    emit_calc(verify_derivative_interchange(cq, cn, cm, small, samples, seed));
  }
  sink.emit("verify-lemmas.jsonl", lines.str());
  return all_pass ? 0 : 1;
}

int run_sharpness(int q, int n, int m, int d, const OutputSink& sink) {
  SpacePtr sp = make_space(q, n, m);
  SpaceContext ctx(sp);
  MapFunction f = sharpness_function(sp, d);
  auto hyp = check_bilinear_hypercontractivity(ctx, f, d);
  auto cert = certify_restriction_global(ctx, f, d, 1.0);
  ordered_json j;
  j["q"] = q;
  j["n"] = n;
  j["m"] = m;
  j["d"] = d;
  j["norm2_sq"] = norm2_sq(f);
  j["norm4_pow4"] = norm4_pow4(f);
  j["globalness_level"] = cert.worst_value;
  j["conditional_hyp"] = hyp_to_json(hyp);
  sink.emit("sharpness.json", j.dump(2) + "\n");
  return hyp.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic analysis on spaces of linear maps over GF(q)"};
  app.set_config("--config", "", "flat key=value config file with per-command sections");
  app.require_subcommand(1);

  int q = 2, n = 2, m = 2, d = 1, p = 2, cube_n = 3, r = 1;
  double rho = 0.5, c0 = 1.0;
  long samples = 2000;
  std::optional<uint64_t> seed;
  std::string fn_desc = "builtin:sharpness";
  std::string set_desc = "builtin:rank-threshold:1";
  std::string out_dir;

  auto add_common = [&](CLI::App* cmd, bool map_dims) {
    cmd->add_option("--out", out_dir, "directory for report files (default: stdout)");
    cmd->add_option("--seed", seed, "seed for sampled fixtures");
    if (map_dims) {
      cmd->add_option("--q", q, "field order");
      cmd->add_option("--dimv", n, "dim(V)");
      cmd->add_option("--dimw", m, "dim(W)");
    }
  };

  auto* spectrum = app.add_subcommand("spectrum", "rank-level Fourier mass table");
  add_common(spectrum, true);
  spectrum->add_option("--function", fn_desc, "file or builtin fixture");
  spectrum->add_option("--d", d, "degree parameter for builtin fixtures");

  auto* checkhyp = app.add_subcommand("check-hyp", "hypercontractivity report battery");
  add_common(checkhyp, true);
  checkhyp->add_option("--d", d, "degree / restriction order");
  checkhyp->add_option("--function", fn_desc, "file or builtin fixture");

  auto* checkcube = app.add_subcommand("check-cube", "warm-up reports on F_p^n");
  add_common(checkcube, false);
  checkcube->add_option("--p", p, "prime field size");
  checkcube->add_option("--n", cube_n, "number of coordinates");
  checkcube->add_option("--d", d, "restriction order");
  checkcube->add_option("--rho", rho, "noise rate");
  std::string cube_fn = "builtin:dictator";
  checkcube->add_option("--function", cube_fn, "file or builtin fixture");

  auto* expansion = app.add_subcommand("expansion", "shortcode-graph expansion rows");
  add_common(expansion, true);
  expansion->add_option("--r", r, "expansion parameter");
  expansion->add_option("--c0", c0, "globalness exponent knob");
  expansion->add_option("--set", set_desc, "vertex-set fixture");

  auto* verify = app.add_subcommand("verify-lemmas", "structural lemma suite");
  add_common(verify, true);
  verify->add_option("--samples", samples, "sample count when not exhaustive");
  uint64_t vseed = 1;
  verify->add_option("--vseed", vseed, "seed for sampled verification");
  bool desk = false;
  verify->add_flag("--profile-desk,--desk", desk, "run the pinned desk battery");

  auto* sharp = app.add_subcommand("sharpness", "sharpness-family report");
  add_common(sharp, true);
  sharp->add_option("--d", d, "rank class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  OutputSink sink{out_dir};
  try {
    if (spectrum->parsed()) return run_spectrum(fn_desc, q, n, m, seed, sink);
    if (checkhyp->parsed()) return run_check_hyp(fn_desc, q, n, m, d, seed, sink);
    if (checkcube->parsed()) return run_check_cube(cube_fn, p, cube_n, d, rho, seed, sink);
    if (expansion->parsed()) return run_expansion(set_desc, q, n, m, r, c0, seed, sink);
    if (verify->parsed()) return run_verify_lemmas(q, n, m, samples, vseed, desk, sink);
    if (sharp->parsed()) return run_sharpness(q, n, m, d, sink);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
