// SPDX-License-Identifier: Apache-2.0

#include "perispec_cli/dispatch.hpp"

#include <cmath>
#include <complex>
#include <random>

#include <CLI11.hpp>

#include "perispec/errors.hpp"
#include "perispec/eigenbounds.hpp"
#include "perispec/io.hpp"
#include "perispec/magic.hpp"
#include "perispec/parallel.hpp"
#include "perispec/sumrules.hpp"
#include "perispec/torus.hpp"

namespace perispec_cli {

namespace ps = perispec;
using ps::JsonValue;

namespace {

std::string fmt(double d) { return JsonValue::format_double(d); }

bool looks_like_opuc(const std::string& text) { return text.find("\"alpha\"") != std::string::npos; }

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    try {
      out.push_back(std::stod(csv.substr(pos, next - pos)));
    } catch (const std::exception&) {
      throw ps::InputError("malformed numeric list: " + csv);
    }
    pos = next + 1;
  }
  return out;
}

void cmd_disc(const std::string& text, std::ostream& out) {
  if (looks_like_opuc(text)) {
    ps::PeriodicVerblunsky v = ps::parse_periodic_verblunsky(text);
    ps::LaurentPoly d = ps::discriminant_opuc(v);
    JsonValue o = JsonValue::object();
    JsonValue coeffs = JsonValue::array();
    for (int k = d.min_exp(); k <= d.max_exp(); ++k) {
      JsonValue pair = JsonValue::array();
      pair.push_back(d.coeff(k).real());
      pair.push_back(d.coeff(k).imag());
      coeffs.push_back(std::move(pair));
    }
    o.set("coeffs", std::move(coeffs));
    o.set("min_exp", static_cast<long>(d.min_exp()));
    o.set("real_on_circle", d.real_on_circle());
    out << o.dump() << "\n";
    return;
  }
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(text);
  ps::Discriminant d = ps::discriminant_oprl(j0);
  JsonValue o = JsonValue::object();
  std::vector<double> c(d.poly.coeffs());
  c.resize(d.period + 1, 0.0);
  o.set("coeffs", ps::to_json(c));
  out << o.dump() << "\n";
}

void cmd_bands(const std::string& text, const std::string& format, double tol, std::ostream& out) {
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(text);
  ps::BandSet bs = ps::bands(ps::discriminant_oprl(j0), tol);
  if (format == "csv") {
    out << "band_lo,band_hi\n";
    for (const auto& b : bs.bands) out << fmt(b.first) << "," << fmt(b.second) << "\n";
    return;
  }
  JsonValue o = JsonValue::object();
  JsonValue bands = JsonValue::array();
  for (const auto& b : bs.bands) {
    JsonValue pair = JsonValue::array();
    pair.push_back(b.first);
    pair.push_back(b.second);
    bands.push_back(std::move(pair));
  }
  o.set("bands", std::move(bands));
  JsonValue gaps = JsonValue::array();
  for (const auto& g : bs.open_gaps) {
    JsonValue pair = JsonValue::array();
    pair.push_back(g.first);
    pair.push_back(g.second);
    gaps.push_back(std::move(pair));
  }
  o.set("open_gaps", std::move(gaps));
  o.set("closed_gaps", ps::to_json(bs.closed_gaps));
  out << o.dump() << "\n";
}

void cmd_measure(const std::string& text, int n, const std::string& format, std::ostream& out) {
  ps::JacobiSeq seq = ps::parse_jacobi_seq(text);
  ps::PointMeasure m = ps::zero_measure(seq, n);
  if (format == "csv") {
    out << "x,weight\n";
    for (std::size_t i = 0; i < m.points.size(); ++i)
      out << fmt(m.points[i]) << "," << fmt(m.weights[i]) << "\n";
    return;
  }
  JsonValue o = JsonValue::object();
  o.set("points", ps::to_json(m.points));
  o.set("weights", ps::to_json(m.weights));
  out << o.dump() << "\n";
}

void cmd_fiber(const std::string& text, double theta, std::ostream& out) {
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(text);
  auto eig = ps::herm_eigen(ps::floquet_fiber(j0, theta), false);
  JsonValue o = JsonValue::object();
  o.set("theta", theta);
  o.set("eigenvalues", ps::to_json(eig.values));
  out << o.dump() << "\n";
}

void cmd_m(const std::string& text, double re, double im, const std::vector<double>& grid,
           std::ostream& out) {
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(text);
  if (grid.size() == 3) {
    const int n = static_cast<int>(grid[2]);
    if (n < 1) throw ps::InputError("m: grid count must be >= 1");
    std::vector<std::complex<double>> vals(n);
    std::vector<double> xs(n);
    ps::parallel_for(n, [&](std::size_t i) {
      double x = grid[0] + (grid[1] - grid[0]) * (n == 1 ? 0.0 : double(i) / (n - 1));
      xs[i] = x;
      vals[i] = ps::periodic_m(j0, {x, im});
    });
    out << "E_re,E_im,m_re,m_im\n";
    for (int i = 0; i < n; ++i)
      out << fmt(xs[i]) << "," << fmt(im) << "," << fmt(vals[i].real()) << ","
          << fmt(vals[i].imag()) << "\n";
    return;
  }
  std::complex<double> e{re, im};
  std::complex<double> m = ps::periodic_m(j0, e);
  ps::MQuadratic q = ps::m_quadratic(j0, e);
  JsonValue o = JsonValue::object();
  o.set("m_re", m.real());
  o.set("m_im", m.imag());
  o.set("quadratic_residual", std::abs(q.A * m * m + q.B * m + q.C));
  out << o.dump() << "\n";
}

JsonValue residual_report_json(const ps::ResidualReport& rep) {
  JsonValue o = JsonValue::object();
  o.set("sup", rep.sup);
  o.set("hs_partial", ps::to_json(rep.hs_partial));
  o.set("block_norm_partial", ps::to_json(rep.block_norm_partial));
  JsonValue diag = JsonValue::object();
  for (const auto& [k, prof] : rep.diagonal) diag.set(std::to_string(k), ps::to_json(prof));
  o.set("diag_profiles", std::move(diag));
  o.set("first_row", rep.first_row);
  return o;
}

void cmd_magic(const std::string& seq_text, const std::string& j0_text, std::ostream& out) {
  if (looks_like_opuc(seq_text) != looks_like_opuc(j0_text))
    throw ps::InputError("magic: sequence and reference must both be OPRL or both OPUC");
  if (looks_like_opuc(seq_text)) {
    ps::VerblunskySeq seq = ps::parse_verblunsky_seq(seq_text);
    ps::PeriodicVerblunsky v0 = ps::parse_periodic_verblunsky(j0_text);
    out << residual_report_json(ps::magic_residual(seq, v0)).dump() << "\n";
    return;
  }
  ps::JacobiSeq seq = ps::parse_jacobi_seq(seq_text);
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(j0_text);
  out << residual_report_json(ps::magic_residual(seq, j0)).dump() << "\n";
}

void cmd_torus_dist(const std::string& seq_text, const std::string& sample_text, long m,
                    std::ostream& out) {
  ps::JacobiSeq seq = ps::parse_jacobi_seq(seq_text);
  ps::TorusSample sample = ps::parse_torus_sample(sample_text);
  JsonValue o = JsonValue::object();
  o.set("m", m);
  o.set("dist", ps::dist_to_sample(seq, sample, m));
  out << o.dump() << "\n";
}

void cmd_toda(const std::string& text, const std::vector<double>& times, double dt,
              std::ostream& out) {
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(text);
  ps::TorusSample s = ps::toda_sample(j0, times, dt);
  JsonValue arr = JsonValue::array();
  for (const auto& pt : s.points) arr.push_back(ps::to_json(pt));
  out << arr.dump() << "\n";
}

void cmd_blocks(const std::string& text, int to_type_target, std::ostream& out) {
  ps::BlockJacobi j = ps::parse_block_jacobi(text);
  if (to_type_target != 0) {
    out << ps::to_json(ps::to_type(j, to_type_target)).dump() << "\n";
    return;
  }
  ps::TypeFlags f = ps::classify_type(j);
  ps::NevaiDiagnostic nd = ps::nevai_diagnostic(j);
  JsonValue o = JsonValue::object();
  JsonValue types = JsonValue::object();
  types.set("type1", f.type1);
  types.set("type2", f.type2);
  types.set("type3", f.type3);
  o.set("types", std::move(types));
  JsonValue nevai = JsonValue::object();
  JsonValue from = JsonValue::array();
  for (int v : nd.from) from.push_back(static_cast<long>(v));
  nevai.set("from", std::move(from));
  nevai.set("b_tail", ps::to_json(nd.b_tail));
  nevai.set("ata_tail", ps::to_json(nd.ata_tail));
  nevai.set("a_tail", ps::to_json(nd.a_tail));
  o.set("nevai", std::move(nevai));
  out << o.dump() << "\n";
}

void cmd_sumrule(const std::string& which, const std::string& text, double quad_tol,
                 unsigned seed, std::ostream& out) {
  ps::BlockJacobi j = ps::parse_block_jacobi(text);
  JsonValue o = JsonValue::object();
  if (which == "p2") {
    ps::SumRuleReport r = ps::p2_sides(j, quad_tol);
    o.set("lhs", r.lhs);
    o.set("rhs", r.rhs);
    o.set("residual", r.residual);
    o.set("boundary_integral", r.boundary_integral);
    o.set("eigenvalue_sum", r.eigenvalue_sum);
  } else if (which == "c0") {
    ps::C0Terms t = ps::c0_terms(j, quad_tol);
    o.set("Z", t.Z);
    o.set("E0", t.E0);
    o.set("A0", t.A0);
    o.set("residual", t.residual);
  } else if (which == "steps") {
    ps::StepRuleResiduals r = ps::step_sum_rules(j, quad_tol);
    o.set("c0", r.c0);
    o.set("c1", r.c1);
    o.set("p2", r.p2);
  } else if (which == "nonlocal") {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> rad(0.1, 0.8), ang(0.0, 2.0 * M_PI);
    std::vector<std::complex<double>> zs;
    for (int k = 0; k < 10; ++k) zs.push_back(std::polar(rad(rng), ang(rng)));
    ps::NonlocalCheck r = ps::nonlocal_check(j, zs, quad_tol);
    o.set("max_residual", r.max_residual);
    o.set("skipped", static_cast<long>(r.skipped));
  } else {
    throw CLI::ValidationError("sumrule: unknown rule '" + which + "'");
  }
  out << o.dump() << "\n";
}

void cmd_bounds(const std::string& text, int n_blocks, std::ostream& out) {
  ps::BlockJacobi j = ps::parse_block_jacobi(text);
  ps::SandwichMargins sm = ps::sandwich_check(j, n_blocks);
  ps::EigenOrder eo = ps::eigen_order_check(j, n_blocks);
  ps::HtBound ht = ps::ht_bound(j);
  JsonValue o = JsonValue::object();
  JsonValue sw = JsonValue::object();
  sw.set("upper", sm.upper);
  sw.set("lower", sm.lower);
  o.set("sandwich", std::move(sw));
  o.set("ordered", eo.ordered);
  o.set("outer_plus", ps::to_json(eo.outer_plus));
  o.set("outer_minus", ps::to_json(eo.outer_minus));
  JsonValue htj = JsonValue::object();
  htj.set("lhs", ht.lhs);
  htj.set("rhs", ht.rhs);
  htj.set("blocks_used", static_cast<long>(ht.blocks_used));
  o.set("ht", std::move(htj));
  out << o.dump() << "\n";
}

void cmd_report911(const std::string& seq_text, const std::string& j0_text, int blocks,
                   int checkpoints, std::ostream& out) {
  ps::JacobiSeq seq = ps::parse_jacobi_seq(seq_text);
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(j0_text);
  ps::SquareSummabilityReport rep = ps::square_summability_report(seq, j0, blocks);
  std::vector<long> idx;
  for (int k = 1; k <= checkpoints; ++k)
    idx.push_back(static_cast<long>(static_cast<double>(blocks) * k / checkpoints) - 1);
  auto pick = [&](const std::vector<double>& v) {
    JsonValue a = JsonValue::array();
    for (long i : idx) a.push_back(v[static_cast<std::size_t>(i)]);
    return a;
  };
  JsonValue o = JsonValue::object();
  JsonValue cps = JsonValue::array();
  for (long i : idx) cps.push_back(i + 1);
  o.set("checkpoints", std::move(cps));
  o.set("hs", pick(rep.hs));
  o.set("block_l2", pick(rep.block_l2));
  o.set("abs_block_l2", pick(rep.abs_block_l2));
  o.set("g_block", pick(rep.g_block));
  o.set("dist_sq", pick(rep.dist_sq));
  o.set("tilde_dist_sq", pick(rep.tilde_dist_sq));
  o.set("prod_diff_sq", pick(rep.prod_diff_sq));
  o.set("bsum_diff_sq", pick(rep.bsum_diff_sq));
  o.set("a_shift_sq", pick(rep.a_shift_sq));
  o.set("b_shift_sq", pick(rep.b_shift_sq));
  out << o.dump() << "\n";
}

void cmd_calibrate(const std::string& j0_text, unsigned seed, double scale, std::ostream& out) {
  ps::PeriodicJacobi j0 = ps::parse_periodic_jacobi(j0_text);
  const int p = j0.period();
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Sandwich constants between the coefficient mismatch and the achieved
  // projection distance over random small perturbations.
  double cmin = 1e300, cmax = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ps::PeriodicJacobi pert = j0;
    for (int i = 0; i < p; ++i) {
      pert.a[i] += scale * gauss(rng);
      pert.b[i] += scale * gauss(rng);
    }
    double mism = ps::coeff_mismatch(pert, j0);
    if (mism < 1e-14) continue;
    ps::ProjectionResult pr = ps::project_to_torus(pert, j0);
    if (pr.distance < 1e-14) continue;
    double ratio = pr.distance / mism;
    cmin = std::min(cmin, ratio);
    cmax = std::max(cmax, ratio);
  }

  // Floor for the extreme-diagonal residual of far-from-torus perturbations
  // with a fixed window distance.
  double floor_res = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    ps::JacobiSeq seq = ps::JacobiSeq::from_periodic(j0, 1, 6 * p + 10, false);
    std::uniform_int_distribution<int> site(p, 2 * p);
    int s = site(rng);
    seq.a[s] = std::max(0.05, seq.a[s] + 0.1);
    seq.b[s] += 0.1;
    ps::ResidualReport rep = ps::magic_residual(seq, j0);
    double extreme = 0.0;
    for (double v : rep.diagonal.at(p)) extreme = std::max(extreme, v);
    for (double v : rep.diagonal.at(p - 1)) extreme = std::max(extreme, v);
    floor_res = std::min(floor_res, extreme);
  }

  JsonValue o = JsonValue::object();
  o.set("j0", ps::to_json(j0));
  o.set("seed", static_cast<long>(seed));
  o.set("perturbation_scale", scale);
  o.set("dist_over_mismatch_min", cmin);
  o.set("dist_over_mismatch_max", cmax);
  o.set("extreme_diag_floor", floor_res);
  out << o.dump() << "\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"spectral toolkit for periodic Jacobi and CMV operators"};
  app.require_subcommand(1);

  std::string in_path, j0_path, sample_path, format = "json", rule;
  double theta = 0.0, tol = 1e-12, quad_tol = 1e-9, dt = 1e-3, re = 0.0, im = 0.0;
  double calib_scale = 1e-3;
  int n = 100, n_blocks = 60, to_type_target = 0, blocks = 1000, checkpoints = 10;
  long m_index = 1;
  unsigned seed = 1;
  std::string times_csv, grid_csv;

  auto* disc = app.add_subcommand("disc", "discriminant coefficients");
  disc->add_option("--in", in_path, "operator JSON")->required();

  auto* bands_cmd = app.add_subcommand("bands", "band/gap structure");
  bands_cmd->add_option("--in", in_path)->required();
  bands_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  bands_cmd->add_option("--tol", tol);

  auto* measure = app.add_subcommand("measure", "zero-counting measure of p_n");
  measure->add_option("--in", in_path)->required();
  measure->add_option("--n", n)->required();
  measure->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* fiber = app.add_subcommand("fiber", "Floquet fiber eigenvalues");
  fiber->add_option("--in", in_path)->required();
  fiber->add_option("--theta", theta)->required();

  auto* mcmd = app.add_subcommand("m", "periodic m-function");
  mcmd->add_option("--in", in_path)->required();
  mcmd->add_option("--re", re);
  mcmd->add_option("--im", im);
  mcmd->add_option("--grid", grid_csv, "lo,hi,count real grid");

  auto* magic = app.add_subcommand("magic", "shift-identity residual report");
  magic->add_option("--in", in_path)->required();
  magic->add_option("--j0", j0_path)->required();

  auto* tdist = app.add_subcommand("torus-dist", "distance to a torus sample");
  tdist->add_option("--in", in_path)->required();
  tdist->add_option("--sample", sample_path)->required();
  tdist->add_option("--m", m_index);

  auto* toda = app.add_subcommand("toda", "isospectral flow sampling");
  toda->add_option("--in", in_path)->required();
  toda->add_option("--times", times_csv)->required();
  toda->add_option("--dt", dt);

  auto* blocks_cmd = app.add_subcommand("blocks", "block type and Nevai diagnostics");
  blocks_cmd->add_option("--in", in_path)->required();
  blocks_cmd->add_option("--to-type", to_type_target)->check(CLI::Range(1, 3));

  auto* sumrule = app.add_subcommand("sumrule", "sum-rule evaluation");
  sumrule->add_option("rule", rule, "p2|c0|steps|nonlocal")->required();
  sumrule->add_option("--in", in_path)->required();
  sumrule->add_option("--quad-tol", quad_tol);
  sumrule->add_option("--seed", seed);

  auto* bounds = app.add_subcommand("bounds", "eigenvalue comparison bounds");
  bounds->add_option("--in", in_path)->required();
  bounds->add_option("--n-blocks", n_blocks);

  auto* rep911 = app.add_subcommand("report-911", "square-summability partial sums");
  rep911->add_option("--in", in_path)->required();
  rep911->add_option("--j0", j0_path)->required();
  rep911->add_option("--blocks", blocks);
  rep911->add_option("--checkpoints", checkpoints);

  auto* calibrate = app.add_subcommand("calibrate", "generate calibration fixture");
  calibrate->add_option("--j0", j0_path)->required();
  calibrate->add_option("--seed", seed);
  calibrate->add_option("--scale", calib_scale);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    err << app.help();
    err << "\nerror: " << e.what() << "\n";
    return 2;
  }

  try {
    if (disc->parsed()) cmd_disc(ps::read_file(in_path), out);
    else if (bands_cmd->parsed()) cmd_bands(ps::read_file(in_path), format, tol, out);
    else if (measure->parsed()) cmd_measure(ps::read_file(in_path), n, format, out);
    else if (fiber->parsed()) cmd_fiber(ps::read_file(in_path), theta, out);
    else if (mcmd->parsed())
      cmd_m(ps::read_file(in_path), re, im, grid_csv.empty() ? std::vector<double>{} : parse_list(grid_csv), out);
    else if (magic->parsed()) cmd_magic(ps::read_file(in_path), ps::read_file(j0_path), out);
    else if (tdist->parsed())
      cmd_torus_dist(ps::read_file(in_path), ps::read_file(sample_path), m_index, out);
    else if (toda->parsed()) cmd_toda(ps::read_file(in_path), parse_list(times_csv), dt, out);
    else if (blocks_cmd->parsed()) cmd_blocks(ps::read_file(in_path), to_type_target, out);
    else if (sumrule->parsed()) cmd_sumrule(rule, ps::read_file(in_path), quad_tol, seed, out);
    else if (bounds->parsed()) cmd_bounds(ps::read_file(in_path), n_blocks, out);
    else if (rep911->parsed())
      cmd_report911(ps::read_file(in_path), ps::read_file(j0_path), blocks, checkpoints, out);
    else if (calibrate->parsed()) cmd_calibrate(ps::read_file(j0_path), seed, calib_scale, out);
  } catch (const ps::InputError& e) {
    JsonValue o = JsonValue::object();
    o.set("error", std::string(e.what()));
    o.set("kind", "input");
    err << o.dump() << "\n";
    return 2;
  } catch (const ps::EvalDomainError& e) {
    JsonValue o = JsonValue::object();
    o.set("error", std::string(e.what()));
    o.set("kind", "domain");
    err << o.dump() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    JsonValue o = JsonValue::object();
    o.set("error", std::string(e.what()));
    o.set("kind", "numeric");
    err << o.dump() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace perispec_cli
