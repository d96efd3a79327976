#include "hdblind/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdblind/errors.hpp"
#include "hdblind/estimate.hpp"
#include "hdblind/guard.hpp"
#include "hdblind/io.hpp"
#include "hdblind/keyrate.hpp"
#include "hdblind/mc.hpp"
#include "hdblind/model.hpp"
#include "hdblind/version.hpp"

namespace hdblind::commands {

namespace {

using nlohmann::json;

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir + "/" + name;
}

void put_header(io::csv_writer& w, const config::run_config& cfg,
                const std::string& subcommand) {
  for (const auto& line : io::header_lines(cfg, subcommand)) w.comment(line);
}

// header mirrored into JSON outputs: JSON cannot carry '#' comments, so the
// same fields live in a leading "meta" object
json meta_object(const config::run_config& cfg, const std::string& subcommand) {
  json meta;
  meta["tool"] = "hdblind";
  meta["version"] = version_string;
  meta["subcommand"] = subcommand;
  meta["preset"] = cfg.preset_name;
  meta["seed"] = cfg.scenario.seed;
  meta["config_hash"] = config::config_hash(cfg);
  json conf;
  const std::string canon = config::canonical(cfg);
  size_t start = 0;
  while (start < canon.size()) {
    const size_t nl = canon.find('\n', start);
    const std::string line = canon.substr(start, nl - start);
    start = (nl == std::string::npos) ? canon.size() : nl + 1;
    const size_t eq = line.find(" = ");
    if (eq != std::string::npos)
      conf[line.substr(0, eq)] = line.substr(eq + 3);
  }
  meta["config"] = conf;
  return meta;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  out.close();
  if (out.fail()) throw io_error("write failed for '" + path + "'");
}

json estimate_json(const estimate::estimate_result& est) {
  json e;
  e["n"] = est.n;
  e["v_a_hat"] = est.v_a_hat;
  e["v_b_hat"] = est.v_b_hat;
  e["cov_ab_hat"] = est.cov_ab_hat;
  e["n0_hat"] = est.n0_hat;
  e["t_hat"] = est.t_hat;
  e["xi_hat"] = est.xi_hat;
  e["clipped_fraction"] = est.clipped_fraction;
  e["v_a_mismatch"] = est.v_a_mismatch;
  return e;
}

uint64_t scatter_stride(uint64_t n) {
  const uint64_t cap = 100000;
  return n <= cap ? 1 : (n + cap - 1) / cap;
}

}  // namespace

int cmd_fig2(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);
  const auto& f = cfg.fig2;

  std::vector<double> powers;
  for (double p = f.power_min_uw; p <= f.power_max_uw + 1e-9 * f.power_step_uw;
       p += f.power_step_uw)
    powers.push_back(p);

  model::detector_model det = cfg.scenario.detector;
  det.f_lo = f.f_lo;
  mc::lo_char_settings s;
  s.volts_per_photon = f.volts_per_photon;
  s.v_ele_volts2 = f.v_ele_volts2;
  s.daq_limit_v = f.daq_limit_v;
  s.n_per_point = f.n_per_point;

  const double eps[2] = {f.eps1, f.eps2};
  std::vector<mc::lo_char_point> pts[2];
  for (int k = 0; k < 2; ++k)
    pts[k] = mc::simulate_lo_characterization(det, 0.5 - eps[k], powers, s,
                                              cfg.scenario.seed + uint64_t(k));

  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "fig2.csv"));
    put_header(w, cfg, "fig2");
    for (int k = 0; k < 2; ++k)
      w.comment("setting " + io::format_double(eps[k]) +
                ": balance quality " +
                io::format_double(model::cmrr_db(eps[k])) + " dB");
    w.row({"power_uW", "mean_V", "var_V2", "setting"});
    for (int k = 0; k < 2; ++k)
      for (const auto& p : pts[k])
        w.row({io::format_double(p.power_uw), io::format_double(p.mean_v),
               io::format_double(p.var_v2), io::format_double(eps[k])});
    w.close();
  }
  if (cfg.write_svg) {
    const auto header = io::header_lines(cfg, "fig2");
    std::vector<io::svg_series> mean_series(2), var_series(2);
    for (int k = 0; k < 2; ++k) {
      mean_series[k].name = "eps = " + io::format_double(eps[k]);
      var_series[k].name = mean_series[k].name;
      for (const auto& p : pts[k]) {
        mean_series[k].points.push_back({p.power_uw, p.mean_v});
        var_series[k].points.push_back({p.power_uw, p.var_v2});
      }
    }
    io::write_svg_chart(join(cfg.out_dir, "fig2_mean.svg"),
                        "HD mean output vs LO power", "LO power (uW)",
                        "mean (V)", mean_series, false, header);
    io::write_svg_chart(join(cfg.out_dir, "fig2_variance.svg"),
                        "HD output variance vs LO power", "LO power (uW)",
                        "variance (V^2)", var_series, false, header);
  }
  return exit_ok;
}

int cmd_fig3(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);
  const model::detector_model& det = cfg.scenario.detector;
  model::attack_model att = cfg.scenario.attack;
  att.active = true;  // budget formulas are for the attack light

  const double f1 = att.f_ext;
  const double f2 = 20.0 * f1;  // published pair is 0.001 and 0.02

  std::vector<std::array<double, 6>> rows;
  for (int i = 0; i <= 100; ++i) {
    const double r = double(i) * 0.002;
    att.r = r;
    att.f_ext = f1;
    const double n0 = model::external_shot_noise(att, det);
    const double vf1 = model::external_fluctuation_noise(att, det);
    att.f_ext = f2;
    const double vf2 = model::external_fluctuation_noise(att, det);
    rows.push_back({r, n0, vf1, vf2, att.xi_ir(), att.xi_tech});
  }

  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "fig3.csv"));
    put_header(w, cfg, "fig3");
    w.comment("analytic noise budget at Bob, SNU; vf_ext_f1 uses f_ext=" +
              io::format_double(f1) + ", vf_ext_f2 uses f_ext=" +
              io::format_double(f2));
    w.row({"r", "n0_ext", "vf_ext_f1", "vf_ext_f2", "xi_ir", "xi_tech"});
    for (const auto& row : rows) {
      std::vector<std::string> fields;
      for (double v : row) fields.push_back(io::format_double(v));
      w.row(fields);
    }
    w.close();
  }
  if (cfg.write_svg) {
    std::vector<io::svg_series> series(5);
    series[0].name = "N0_ext (shot)";
    series[1].name = "Vf_ext, f=" + io::format_double(f1);
    series[2].name = "Vf_ext, f=" + io::format_double(f2);
    series[3].name = "xi_IR";
    series[4].name = "xi_tech";
    for (const auto& row : rows)
      for (int k = 0; k < 5; ++k)
        series[k].points.push_back({row[0], row[k + 1]});
    io::write_svg_chart(join(cfg.out_dir, "fig3.svg"),
                        "External-light noise budget vs photon ratio r", "r",
                        "noise (SNU)", series, false,
                        io::header_lines(cfg, "fig3"));
  }
  return exit_ok;
}

int cmd_fig4(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);

  mc::sim_scenario scn = cfg.scenario;
  scn.clipping = true;
  mc::sim_scenario scn_lin = cfg.scenario;
  scn_lin.clipping = false;

  const mc::trial_batch batch_r = mc::run(scn);
  const mc::trial_batch batch_i = mc::run(scn_lin);
  const auto est_r =
      estimate::estimate_batch(batch_r, scn.detector, scn.protocol);
  const auto est_i =
      estimate::estimate_batch(batch_i, scn.detector, scn.protocol);

  const double t_nom = scn.channel.transmission();
  const auto xn = keyrate::xi_null(scn.protocol, t_nom, scn.detector);
  const bool breach = keyrate::breach(est_r, xn.xi_null);

  if (cfg.write_json) {
    json out;
    out["meta"] = meta_object(cfg, "fig4");
    json res;
    res["t_nominal"] = t_nom;
    res["xi_ext"] = model::external_excess_noise(scn.attack, scn.detector,
                                                 scn.channel);
    res["xi_null"] = xn.xi_null;
    res["xi_null_no_key"] = xn.no_key;
    res["linear"] = estimate_json(est_i);
    res["clipped"] = estimate_json(est_r);
    res["breach"] = breach;
    out["results"] = res;
    write_json_file(join(cfg.out_dir, "fig4.json"), out);
  }
  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "fig4_scatter.csv"));
    put_header(w, cfg, "fig4");
    io::dump_batch_csv(w, batch_r, scatter_stride(batch_r.n()));
    w.close();
  }
  if (cfg.write_svg) {
    io::svg_series sc;
    sc.name = "clipped (x_a, x_b)";
    const uint64_t stride = scatter_stride(batch_r.n()) * 10;  // plot cap
    for (uint64_t i = 0; i < batch_r.n(); i += stride)
      sc.points.push_back({batch_r.x_a[i], batch_r.x_b[i]});
    io::write_svg_chart(join(cfg.out_dir, "fig4.svg"),
                        "Quadrature scatter under the blinding attack",
                        "x_a (sqrt SNU)", "x_b (sqrt SNU)", {sc}, true,
                        io::header_lines(cfg, "fig4"));
  }
  return exit_ok;
}

int cmd_fig5(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);

  const std::vector<double> r_grid = {0.10, 0.11, 0.12, 0.13, 0.14};
  std::vector<double> l_grid;
  for (int l = 0; l <= 100; l += 10) l_grid.push_back(double(l));

  struct row_t {
    double l, r, t_hat;
    const char* estimator;
  };
  std::vector<row_t> rows;

  for (double l : l_grid) {
    mc::sim_scenario scn = cfg.scenario;
    scn.channel.length_km = l;
    scn.attack.active = true;
    for (double r : r_grid) {
      scn.attack.r = r;
      scn.clipping = true;
      const auto est = estimate::estimate_batch(mc::run(scn), scn.detector,
                                                scn.protocol);
      rows.push_back({l, r, est.t_hat, "clipped"});
    }
    // linear reference: same attack, ideal detector; T_hat equals the true
    // transmission up to sampling error for every r
    scn.attack.r = r_grid.front();
    scn.clipping = false;
    const auto est_i = estimate::estimate_batch(mc::run(scn), scn.detector,
                                                scn.protocol);
    rows.push_back({l, scn.attack.r, est_i.t_hat, "linear"});
  }

  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "fig5.csv"));
    put_header(w, cfg, "fig5");
    w.row({"L_km", "r", "t_hat", "estimator"});
    for (const auto& row : rows)
      w.row({io::format_double(row.l), io::format_double(row.r),
             io::format_double(row.t_hat), row.estimator});
    w.close();
  }
  if (cfg.write_json) {
    json out;
    out["meta"] = meta_object(cfg, "fig5");
    json arr = json::array();
    for (const auto& row : rows) {
      json jr;
      jr["L_km"] = row.l;
      jr["r"] = row.r;
      jr["t_hat"] = row.t_hat;
      jr["estimator"] = row.estimator;
      arr.push_back(jr);
    }
    out["results"]["rows"] = arr;
    write_json_file(join(cfg.out_dir, "fig5.json"), out);
  }
  if (cfg.write_svg) {
    std::vector<io::svg_series> series;
    for (double r : r_grid) {
      io::svg_series s;
      s.name = "r = " + io::format_double(r);
      for (const auto& row : rows)
        if (row.r == r && row.estimator[0] == 'c')
          s.points.push_back({row.l, row.t_hat});
      series.push_back(std::move(s));
    }
    io::svg_series lin;
    lin.name = "linear reference";
    for (const auto& row : rows)
      if (row.estimator[0] == 'l') lin.points.push_back({row.l, row.t_hat});
    series.push_back(std::move(lin));
    io::write_svg_chart(join(cfg.out_dir, "fig5.svg"),
                        "Estimated transmission vs distance", "L (km)",
                        "T_hat", series, false, io::header_lines(cfg, "fig5"));
  }
  return exit_ok;
}

int cmd_fig6(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);

  // r grid in exact 1e-4 steps: coarse 0..0.14, fine 0.124..0.130
  std::set<int> kset;
  for (int k = 0; k <= 1400; k += 100) kset.insert(k);
  for (int k = 1240; k <= 1300; ++k) kset.insert(k);
  const std::vector<double> l_grid = {20.0, 25.0, 30.0, 35.0, 40.0};

  struct row_t {
    double r, l, xi_hat_r, xi_null;
  };
  std::vector<row_t> rows;
  json breach_points = json::array();

  for (double l : l_grid) {
    mc::sim_scenario scn = cfg.scenario;
    scn.channel.length_km = l;
    scn.attack.active = true;
    scn.clipping = true;
    const double xn =
        keyrate::xi_null(scn.protocol, scn.channel.transmission(),
                         scn.detector)
            .xi_null;
    bool found = false;
    double r_star = 0.0;
    for (int k : kset) {
      scn.attack.r = double(k) / 10000.0;
      const auto est = estimate::estimate_batch(mc::run(scn), scn.detector,
                                                scn.protocol);
      rows.push_back({scn.attack.r, l, est.xi_hat, xn});
      if (!found && est.xi_hat < xn && est.xi_hat >= 0.0) {
        found = true;
        r_star = scn.attack.r;
      }
    }
    json bp;
    bp["L_km"] = l;
    bp["xi_null"] = xn;
    bp["breached"] = found;
    if (found) bp["r_star"] = r_star;
    breach_points.push_back(bp);
  }

  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "fig6.csv"));
    put_header(w, cfg, "fig6");
    w.row({"r", "L_km", "xi_hat_r", "xi_null"});
    for (const auto& row : rows)
      w.row({io::format_double(row.r), io::format_double(row.l),
             io::format_double(row.xi_hat_r), io::format_double(row.xi_null)});
    w.close();
  }
  if (cfg.write_json) {
    json out;
    out["meta"] = meta_object(cfg, "fig6");
    out["results"]["breach_points"] = breach_points;
    write_json_file(join(cfg.out_dir, "fig6.json"), out);
  }
  if (cfg.write_svg) {
    std::vector<io::svg_series> series;
    for (double l : l_grid) {
      io::svg_series s;
      s.name = "L = " + io::format_double(l) + " km";
      for (const auto& row : rows)
        if (row.l == l) s.points.push_back({row.r, row.xi_hat_r});
      series.push_back(std::move(s));
    }
    for (double l : {20.0, 40.0}) {
      io::svg_series s;
      s.name = "xi_null, " + io::format_double(l) + " km";
      for (const auto& row : rows)
        if (row.l == l) s.points.push_back({row.r, row.xi_null});
      series.push_back(std::move(s));
    }
    io::write_svg_chart(join(cfg.out_dir, "fig6.svg"),
                        "Estimated excess noise vs photon ratio r", "r",
                        "xi_hat_r (SNU)", series, false,
                        io::header_lines(cfg, "fig6"));
  }
  return exit_ok;
}

int cmd_guard(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);

  mc::sim_scenario honest = cfg.scenario;
  honest.attack.active = false;
  mc::sim_scenario attack = cfg.scenario;
  attack.attack.active = true;
  const uint64_t bs = cfg.guard_block_size;
  const uint64_t nb = cfg.guard_n_blocks;

  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "guard_verdicts.csv"));
    put_header(w, cfg, "guard");
    w.comment("policy: s_hi=" + io::format_double(cfg.guard_pol.s_hi) +
              " s_lo=" + io::format_double(cfg.guard_pol.s_lo) +
              " max_fraction=" + io::format_double(cfg.guard_pol.max_fraction));
    w.row({"scenario", "block_index", "fraction_outside", "accept"});
    for (int a = 0; a < 2; ++a) {
      mc::sim_scenario scn = a ? attack : honest;
      scn.n = nb * bs;
      const mc::trial_batch batch = mc::run(scn);
      for (uint64_t b = 0; b < nb; ++b) {
        mc::trial_batch blk;
        const uint64_t lo = b * bs, hi = lo + bs;
        blk.x_a.assign(batch.x_a.begin() + long(lo), batch.x_a.begin() + long(hi));
        blk.x_b.assign(batch.x_b.begin() + long(lo), batch.x_b.begin() + long(hi));
        blk.clipped_hi.assign(batch.clipped_hi.begin() + long(lo),
                              batch.clipped_hi.begin() + long(hi));
        blk.clipped_lo.assign(batch.clipped_lo.begin() + long(lo),
                              batch.clipped_lo.begin() + long(hi));
        const auto v = guard::evaluate(blk, cfg.guard_pol);
        w.row({a ? "attack" : "honest", std::to_string(b),
               io::format_double(v.fraction_outside), v.accept ? "1" : "0"});
      }
    }
    w.close();
  }

  std::vector<guard::guard_policy> grid;
  for (double s : {19.0, 18.0, 16.0, 14.0, 12.0, 10.0})
    for (double mf : {1e-4, 1e-3, 1e-2, 1.0})
      grid.push_back({s, -s, mf});
  const auto roc = guard::roc_sweep(honest, attack, grid, nb, bs);

  io::csv_writer w(join(cfg.out_dir, "guard_roc.csv"));
  put_header(w, cfg, "guard");
  w.row({"s_hi", "s_lo", "max_fraction", "false_alarm", "detection",
         "n_blocks", "block_size"});
  for (const auto& row : roc)
    w.row({io::format_double(row.s_hi), io::format_double(row.s_lo),
           io::format_double(row.max_fraction),
           io::format_double(row.false_alarm),
           io::format_double(row.detection), std::to_string(row.n_blocks),
           std::to_string(row.block_size)});
  w.close();
  return exit_ok;
}

int cmd_run(const config::run_config& cfg) {
  config::validate(cfg);
  io::ensure_dir(cfg.out_dir);

  mc::sim_scenario scn = cfg.scenario;
  const double t_nom = scn.channel.transmission();
  json optimizer;
  if (cfg.va_policy == "optimize") {
    const auto opt = keyrate::optimize_va(t_nom, scn.detector, cfg.xi_design,
                                          scn.protocol.beta);
    scn.protocol.v_a = opt.v_a;
    optimizer["v_a"] = opt.v_a;
    optimizer["k"] = opt.k;
    optimizer["no_key"] = opt.no_key;
    optimizer["xi_assumed"] = cfg.xi_design;
  }

  const mc::trial_batch batch = mc::run(scn);
  const auto est = estimate::estimate_batch(batch, scn.detector, scn.protocol);
  const auto xn = keyrate::xi_null(scn.protocol, t_nom, scn.detector);
  const auto verdict = guard::evaluate(batch, cfg.guard_pol);

  json out;
  out["meta"] = meta_object(cfg, "run");
  json res;
  res["v_a_used"] = scn.protocol.v_a;
  if (!optimizer.is_null()) res["optimizer"] = optimizer;
  res["t_nominal"] = t_nom;
  res["estimate"] = estimate_json(est);
  res["xi_null"] = xn.xi_null;
  res["xi_null_no_key"] = xn.no_key;
  res["breach"] = keyrate::breach(est, xn.xi_null);
  {
    const auto kr = keyrate::key_rate(scn.protocol, t_nom, cfg.xi_design,
                                      scn.detector);
    json jd;
    jd["t"] = t_nom;
    jd["xi"] = cfg.xi_design;
    jd["i_ab"] = kr.i_ab;
    jd["chi_be"] = kr.chi_be;
    jd["k"] = kr.k;
    res["key_rate_design"] = jd;
  }
  if (est.t_hat > 0.0 && est.t_hat <= 1.0) {
    const double xi_used = std::max(est.xi_hat, 0.0);
    const auto kr =
        keyrate::key_rate(scn.protocol, est.t_hat, xi_used, scn.detector);
    json je;
    je["t"] = est.t_hat;
    je["xi"] = xi_used;
    je["xi_clamped"] = est.xi_hat < 0.0;
    je["i_ab"] = kr.i_ab;
    je["chi_be"] = kr.chi_be;
    je["k"] = kr.k;
    res["key_rate_at_estimate"] = je;
  } else {
    res["key_rate_at_estimate"] = nullptr;
  }
  {
    json jg;
    jg["fraction_outside"] = verdict.fraction_outside;
    jg["accept"] = verdict.accept;
    jg["s_hi"] = cfg.guard_pol.s_hi;
    jg["s_lo"] = cfg.guard_pol.s_lo;
    jg["max_fraction"] = cfg.guard_pol.max_fraction;
    res["guard"] = jg;
  }
  out["results"] = res;
  if (cfg.write_json) write_json_file(join(cfg.out_dir, "run.json"), out);

  if (cfg.write_csv) {
    io::csv_writer w(join(cfg.out_dir, "run.csv"));
    put_header(w, cfg, "run");
    io::dump_batch_csv(w, batch, scatter_stride(batch.n()));
    w.close();
  }
  return exit_ok;
}

}  // namespace hdblind::commands
