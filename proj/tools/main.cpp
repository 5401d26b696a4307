// Command-line front end: eigen, locus, classify, riemann, simulate, map,
// report. Every run writes a manifest that pins parameters, options and
// outputs; identical invocations produce byte-identical files.

#include "bised/fd.hpp"
#include "bised/hugoniot.hpp"
#include "bised/io.hpp"
#include "bised/model.hpp"
#include "bised/riemann.hpp"
#include "bised/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bised;

namespace {

constexpr int kExitBadParams = 2;
constexpr int kExitBadState = 3;
constexpr int kExitUnresolved = 4;
constexpr int kExitSolverAbort = 5;

struct GlobalOpts {
  std::string preset = "example1";
  std::string params_file;
  std::string out_dir = ".";
  double tol = 1e-12;
  unsigned seed = 12345;
  bool no_svg = false;
};

struct CliError {
  int code;
  std::string message;
};

ModelParams load_params(const GlobalOpts& g) {
  ModelParams p;
  if (!g.params_file.empty()) {
    std::ifstream f(g.params_file);
    if (!f) throw CliError{kExitBadParams, "cannot read " + g.params_file};
    json j;
    f >> j;
    p = io::params_from_json(j);
  } else {
    try {
      p = io::preset(g.preset);
    } catch (const std::exception& e) {
      throw CliError{kExitBadParams, e.what()};
    }
  }
  const ParamsReport rep = validate_params(p);
  if (!rep.valid) {
    std::string msg = "invalid parameters:";
    for (const auto& v : rep.violations) msg += " " + v + ";";
    throw CliError{kExitBadParams, msg};
  }
  return p;
}

State parse_state(const std::string& text) {
  State s;
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> s[0] >> comma >> s[1]) || comma != ',')
    throw CliError{kExitBadParams, "expected 'x,y', got '" + text + "'"};
  return s;
}

State checked_state(const ModelParams& p, const std::string& text,
                    double tol) {
  const State s = parse_state(text);
  if (!in_phase_space(p, s, tol))
    throw CliError{kExitBadState,
                   "state (" + text + ") outside the phase space"};
  return s;
}

Window parse_window(const std::string& text) {
  Window w;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream is(text);
  if (!(is >> w.x_lo >> c1 >> w.x_hi >> c2 >> w.y_lo >> c3 >> w.y_hi))
    throw CliError{kExitBadParams, "expected 'xlo,xhi,ylo,yhi'"};
  return w;
}

std::pair<double, double> parse_range(const std::string& text) {
  double a = 0, b = 0;
  char c = 0;
  std::istringstream is(text);
  if (!(is >> a >> c >> b) || c != ',')
    throw CliError{kExitBadParams, "expected 'lo,hi', got '" + text + "'"};
  return {a, b};
}

std::string char_flags(const ShockClass& c) {
  std::string f;
  if (c.left_char_1) f += "L1";
  if (c.left_char_2) f += "L2";
  if (c.right_char_1) f += "R1";
  if (c.right_char_2) f += "R2";
  return f.empty() ? "-" : f;
}

void emit_manifest(const GlobalOpts& g, const std::string& command,
                   const ModelParams& p, const json& options,
                   const std::vector<std::string>& outputs) {
  json m = io::run_manifest(command, p, options, outputs);
  m["seed"] = g.seed;
  m["tol"] = g.tol;
  io::write_text(fs::path(g.out_dir) / (command + "_manifest.json"),
                 m.dump(2) + "\n");
}

std::vector<io::CsvRow> locus_rows(const LocusBranch& br) {
  std::vector<io::CsvRow> rows;
  for (size_t k = 0; k < br.points.size(); ++k)
    rows.push_back({br.points[k][0], br.points[k][1], br.speeds[k],
                    to_string(br.classes[k].kind),
                    char_flags(br.classes[k])});
  return rows;
}

void locus_svg(io::SvgCanvas& svg, const LocusBranch& br) {
  // split the branch into same-class runs so each run carries its style
  size_t start = 0;
  for (size_t k = 1; k <= br.points.size(); ++k) {
    if (k == br.points.size() ||
        br.classes[k].kind != br.classes[start].kind) {
      Polyline run(br.points.begin() + start, br.points.begin() + k);
      if (run.size() >= 2) svg.styled_polyline(run, br.classes[start].kind);
      start = k == br.points.size() ? k : k - 1;
    }
  }
}

int cmd_eigen(const GlobalOpts& g, const std::string& state_text,
              int grid_n) {
  const ModelParams p = load_params(g);
  std::vector<std::string> outputs;
  json options{{"grid", grid_n}};

  if (!state_text.empty()) {
    const State s = checked_state(p, state_text, g.tol);
    const SpectralData sd = spectral_at(p, s);
    json j{{"state", {s[0], s[1]}},
           {"lambda1", sd.lambda1},
           {"lambda2", sd.lambda2},
           {"discriminant", sd.disc},
           {"r1", {sd.r1[0], sd.r1[1]}},
           {"r2", {sd.r2[0], sd.r2[1]}},
           {"coincident", sd.coincident}};
    std::cout << j.dump(2) << "\n";
    io::write_text(fs::path(g.out_dir) / "eigen.json", j.dump(2) + "\n");
    outputs.push_back("eigen.json");
    options["state"] = state_text;
  }
  if (grid_n > 0) {
    std::vector<io::CsvRow> rows;
    for (int i = 0; i < grid_n; ++i) {
      for (int k = 0; k < grid_n; ++k) {
        const State s((i + 0.5) / grid_n, (k + 0.5) / grid_n);
        if (total_concentration(s) > p.phi_max - 1e-9) continue;
        const auto [l1, l2] = eigenvalues(p, s);
        rows.push_back({s[0], s[1], l1, l2, discriminant(p, s)});
      }
    }
    io::write_csv(fs::path(g.out_dir) / "eigen_grid.csv",
                  "phi1,phi2,lambda1,lambda2,discriminant", rows);
    outputs.push_back("eigen_grid.csv");
  }
  emit_manifest(g, "eigen", p, options, outputs);
  return 0;
}

int cmd_locus(const GlobalOpts& g, const std::string& base_text, int points,
              int res) {
  const ModelParams p = load_params(g);
  const State base = checked_state(p, base_text, g.tol);
  std::vector<std::string> outputs{"locus.csv"};

  std::vector<io::CsvRow> rows;
  json branches_json = json::array();
  io::SvgCanvas svg;
  svg.triangle_frame();

  auto collect = [&](const LocusBranch& br) {
    auto r = locus_rows(br);
    rows.insert(rows.end(), r.begin(), r.end());
    branches_json.push_back(io::locus_to_json(br));
    locus_svg(svg, br);
  };
  if (base.norm() < 1e-12) {
    for (const auto& br : origin_locus(p, points)) collect(br);
  } else {
    for (const auto& br : generic_locus(p, base, Window{0, 1, 0, 1}, res))
      collect(br);
    svg.circle(base, 4.0, "#000000");
  }
  io::write_csv(fs::path(g.out_dir) / "locus.csv",
                "phi1,phi2,sigma,class,char_flags", rows);
  io::write_text(fs::path(g.out_dir) / "locus.json",
                 json{{"branches", branches_json}}.dump(2) + "\n");
  outputs.push_back("locus.json");
  if (!g.no_svg) {
    svg.write(fs::path(g.out_dir) / "locus.svg");
    outputs.push_back("locus.svg");
  }
  emit_manifest(g, "locus", p,
                json{{"base", base_text}, {"points", points}, {"res", res}},
                outputs);
  return 0;
}

int cmd_classify(const GlobalOpts& g, const std::string& left_text,
                 const std::string& right_text) {
  const ModelParams p = load_params(g);
  const State l = checked_state(p, left_text, g.tol);
  const State r = checked_state(p, right_text, g.tol);
  const auto sigma = shock_speed(p, l, r);
  if (!sigma)
    throw CliError{kExitBadState,
                   "states are not on a common Hugoniot locus"};
  json j{{"left", {l[0], l[1]}},
         {"right", {r[0], r[1]}},
         {"sigma", *sigma},
         {"class", io::shock_class_to_json(classify_shock(p, l, r))}};
  std::cout << j.dump(2) << "\n";
  io::write_text(fs::path(g.out_dir) / "classify.json", j.dump(2) + "\n");
  emit_manifest(g, "classify", p,
                json{{"left", left_text}, {"right", right_text}},
                {"classify.json"});
  return 0;
}

void solution_outputs(const GlobalOpts& g, const WaveCurveSolution& sol,
                      std::vector<std::string>& outputs) {
  io::write_text(fs::path(g.out_dir) / "riemann.json",
                 io::solution_to_json(sol).dump(2) + "\n");
  outputs.push_back("riemann.json");

  double lo = 0.0, hi = 0.0;
  if (!sol.segments.empty()) {
    lo = sol.segments.front().speed_lo;
    hi = sol.segments.back().speed_hi;
  }
  const double pad = std::max(0.1 * (hi - lo), 0.05);
  std::vector<double> xi(801);
  for (size_t k = 0; k < xi.size(); ++k)
    xi[k] = lo - pad + (hi - lo + 2 * pad) * k / (xi.size() - 1);
  const auto states = sample_profile(sol, xi);
  std::vector<io::CsvRow> rows;
  for (size_t k = 0; k < xi.size(); ++k)
    rows.push_back({xi[k], states[k][0], states[k][1]});
  io::write_csv(fs::path(g.out_dir) / "riemann_profile.csv", "xi,phi1,phi2",
                rows);
  outputs.push_back("riemann_profile.csv");

  if (!g.no_svg) {
    io::SvgCanvas svg;
    svg.triangle_frame();
    for (const auto& seg : sol.segments) {
      if (seg.kind == WaveKind::rarefaction)
        svg.polyline(seg.path, "#2e7d32", 2.0);
      else
        svg.styled_polyline(seg.path, seg.shock_class.kind);
    }
    svg.circle(sol.left_datum, 4.0, "#000000");
    svg.circle(sol.right_datum, 4.0, "#777777");
    for (const auto& m : sol.middle_states) svg.circle(m, 3.0, "#b26a00");
    svg.write(fs::path(g.out_dir) / "riemann_path.svg");
    outputs.push_back("riemann_path.svg");
  }
}

int cmd_riemann(const GlobalOpts& g, const std::string& left_text,
                const std::string& right_text, bool to_max,
                const std::string& max_text) {
  const ModelParams p = load_params(g);
  const State left = checked_state(p, left_text, g.tol);

  WaveCurveSolution sol;
  json options{{"left", left_text}, {"to_max", to_max}};
  if (to_max) {
    std::optional<State> target;
    if (!max_text.empty()) {
      target = checked_state(p, max_text, g.tol);
      options["max"] = max_text;
    }
    sol = solve_rp_to_max(p, left, target);
  } else {
    if (left.norm() > 1e-12)
      throw CliError{kExitBadParams,
                     "only RP(O, right) and --to-max are supported; left "
                     "datum must be 0,0"};
    if (right_text.empty())
      throw CliError{kExitBadParams, "missing --right state"};
    const State right = checked_state(p, right_text, g.tol);
    options["right"] = right_text;
    sol = solve_rp_origin(p, right);
  }

  std::vector<std::string> outputs;
  solution_outputs(g, sol, outputs);
  std::cout << io::solution_to_json(sol).dump(2) << "\n";
  emit_manifest(g, "riemann", p, options, outputs);
  if (sol.unresolved) {
    std::cerr << "unresolved wave structure: " << sol.note << "\n";
    return kExitUnresolved;
  }
  return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& left_text,
                 const std::string& right_text, const std::string& batch_text,
                 double batch_length, int cells, double cfl, double t_end,
                 const std::string& scheme_name,
                 const std::string& snapshots_text, bool compare,
                 const std::string& domain_text) {
  const ModelParams p = load_params(g);
  SimConfig cfg;
  cfg.cfl = cfl;
  cfg.t_end = t_end;
  if (scheme_name == "rusanov")
    cfg.scheme = Scheme::rusanov;
  else if (scheme_name == "lax_friedrichs")
    cfg.scheme = Scheme::lax_friedrichs;
  else
    throw CliError{kExitBadParams, "unknown scheme: " + scheme_name};

  Grid1D grid;
  grid.n_cells = cells;
  CellField init;
  const bool batch = !batch_text.empty();
  State right = State::Zero();
  if (batch) {
    const State phi0 = checked_state(p, batch_text, g.tol);
    grid.x_lo = -0.5 * batch_length;
    grid.x_hi = 1.5 * batch_length;
    if (!domain_text.empty())
      std::tie(grid.x_lo, grid.x_hi) = parse_range(domain_text);
    init = init_batch(grid, p, phi0, batch_length);
  } else {
    if (right_text.empty())
      throw CliError{kExitBadParams, "need --right or --batch"};
    const State left = checked_state(p, left_text, g.tol);
    right = checked_state(p, right_text, g.tol);
    grid.x_lo = -1.0;
    grid.x_hi = 1.0;
    if (!domain_text.empty())
      std::tie(grid.x_lo, grid.x_hi) = parse_range(domain_text);
    init = init_riemann(grid, left, right);
  }

  std::vector<double> marks;
  if (!snapshots_text.empty()) {
    std::istringstream is(snapshots_text);
    std::string tok;
    while (std::getline(is, tok, ',')) marks.push_back(std::stod(tok));
  }

  RunResult res;
  try {
    res = run(p, grid, init, cfg, marks);
  } catch (const std::exception& e) {
    throw CliError{kExitSolverAbort, std::string("solver abort: ") + e.what()};
  }

  std::vector<std::string> outputs;
  auto field_rows = [&](const CellField& f) {
    std::vector<io::CsvRow> rows;
    for (int i = 0; i < grid.n_cells; ++i)
      rows.push_back({grid.center(i), f[i][0], f[i][1]});
    return rows;
  };
  io::write_csv(fs::path(g.out_dir) / "simulate_final.csv", "x,phi1,phi2",
                field_rows(res.field));
  outputs.push_back("simulate_final.csv");
  for (size_t k = 0; k < res.snapshots.size(); ++k) {
    const std::string name = "simulate_snapshot_" + std::to_string(k) + ".csv";
    io::write_csv(fs::path(g.out_dir) / name, "x,phi1,phi2",
                  field_rows(res.snapshots[k].second));
    outputs.push_back(name);
  }

  json options{{"cells", cells},
               {"cfl", cfl},
               {"t_end", t_end},
               {"scheme", scheme_name},
               {"domain", {grid.x_lo, grid.x_hi}},
               {"steps", res.steps},
               {"clamp_l1_total", res.clamp_total}};
  if (batch) {
    options["batch"] = batch_text;
    options["length"] = batch_length;
  } else {
    options["left"] = left_text;
    options["right"] = right_text;
  }

  // measured front positions: strongest gradient per species
  if (res.t > 0) {
    json speeds = json::array();
    for (int sp = 0; sp < 2; ++sp) {
      double best = 0.0;
      int at = 0;
      for (int i = 1; i < grid.n_cells; ++i) {
        const double jump = std::abs(res.field[i][sp] - res.field[i - 1][sp]);
        if (jump > best) {
          best = jump;
          at = i;
        }
      }
      speeds.push_back({{"species", sp + 1},
                        {"xi", (grid.center(at) - 0.5 * grid.dx()) / res.t},
                        {"jump", best}});
    }
    options["measured_fronts"] = speeds;
  }

  if (compare && !batch) {
    const WaveCurveSolution sol = solve_rp_origin(p, right);
    const Vec2 err = compare_profile(grid, res.field, res.t, sol);
    options["l1_error"] = {err[0], err[1]};
    std::cout << "L1 error vs semi-analytical: " << io::format_double(err[0])
              << " " << io::format_double(err[1]) << "\n";
  }
  emit_manifest(g, "simulate", p, options, outputs);
  return 0;
}

int cmd_map(const GlobalOpts& g, const std::string& kind, bool extended,
            const std::string& window_text, int res, int family) {
  const ModelParams p = load_params(g);
  std::vector<std::string> outputs;
  json options{{"kind", kind}, {"extended", extended}, {"res", res}};
  io::SvgCanvas svg(640, extended ? Window{-0.2, 1.2, -0.2, 1.2}
                                  : Window{0, 1, 0, 1});

  if (kind == "discriminant") {
    Window w = extended ? Window{-0.2, 1.2, -0.2, 1.2} : Window{0, 1, 0, 1};
    if (!window_text.empty()) w = parse_window(window_text);
    svg = io::SvgCanvas(640, w);
    const DiscriminantMap map = extended_discriminant_map(p, w, res);
    std::vector<io::CsvRow> rows;
    for (int iy = 0; iy < map.ny; ++iy) {
      for (int ix = 0; ix < map.nx; ++ix) {
        const State c = map.cell_center(ix, iy);
        rows.push_back({c[0], c[1], map.at(ix, iy)});
        if (map.sign_at(ix, iy) < 0) {
          const double hx = 0.5 * w.width() / map.nx;
          const double hy = 0.5 * w.height() / map.ny;
          svg.cell(State(c[0] - hx, c[1] - hy), State(c[0] + hx, c[1] + hy),
                   "#cccccc");
        }
      }
    }
    io::write_csv(fs::path(g.out_dir) / "map_discriminant.csv",
                  "phi1,phi2,value", rows);
    outputs.push_back("map_discriminant.csv");
    svg.triangle_frame();
    for (const auto& cp : coincidence_points(p).points)
      svg.circle(cp.state, 3.5, cp.quasi_umbilic ? "#c62828" : "#1565c0");
  } else if (kind == "inflection") {
    std::vector<io::CsvRow> rows;
    svg.triangle_frame();
    for (int fam : {1, 2}) {
      if (family != 0 && fam != family) continue;
      for (const auto& line : inflection_locus(p, fam, res)) {
        for (const auto& s : line) rows.push_back({s[0], s[1], fam});
        svg.polyline(line, fam == 1 ? "#6a1b9a" : "#00695c", 2.0,
                     fam == 1 ? "" : "5,4");
      }
    }
    io::write_csv(fs::path(g.out_dir) / "map_inflection.csv",
                  "phi1,phi2,value", rows);
    outputs.push_back("map_inflection.csv");
  } else if (kind == "double_contact") {
    const DoubleContactCurve dc = double_contact_locus(p);
    std::vector<io::CsvRow> rows;
    for (size_t k = 0; k < dc.b_side.size(); ++k)
      rows.push_back({dc.b_side[k][0], dc.b_side[k][1], dc.c_side[k][0],
                      dc.c_side[k][1], dc.sigmas[k]});
    io::write_csv(fs::path(g.out_dir) / "map_double_contact.csv",
                  "b_phi1,b_phi2,c_phi1,c_phi2,sigma", rows);
    outputs.push_back("map_double_contact.csv");
    svg.triangle_frame();
    svg.polyline(dc.b_side, "#c62828", 2.0);
    svg.polyline(dc.c_side, "#1565c0", 2.0);
  } else if (kind == "classification") {
    std::vector<io::CsvRow> rows;
    svg.triangle_frame();
    for (const auto& br : origin_locus(p, res)) {
      auto r = locus_rows(br);
      rows.insert(rows.end(), r.begin(), r.end());
      locus_svg(svg, br);
    }
    io::write_csv(fs::path(g.out_dir) / "map_classification.csv",
                  "phi1,phi2,sigma,class,char_flags", rows);
    outputs.push_back("map_classification.csv");
  } else {
    throw CliError{kExitBadParams, "unknown map kind: " + kind};
  }

  if (!g.no_svg) {
    const std::string name = "map_" + kind + ".svg";
    svg.write(fs::path(g.out_dir) / name);
    outputs.push_back(name);
  }
  emit_manifest(g, "map", p, options, outputs);
  return 0;
}

int cmd_report(const GlobalOpts& g) {
  const ModelParams p = load_params(g);
  const ParamsReport rep = validate_params(p);

  // sampled consistency checks, seeded for reproducibility
  std::mt19937 rng(g.seed);
  std::uniform_real_distribution<double> uni(0.01, 0.99);
  double max_eig_err = 0.0;
  for (int k = 0; k < 500; ++k) {
    State s(uni(rng), uni(rng));
    const double phi = total_concentration(s);
    if (phi > 0.99) s *= 0.98 / phi;
    const Mat2 jn = numeric_jacobian(p, s, 1e-6);
    const double tr = jn(0, 0) + jn(1, 1);
    const double disc = (jn(0, 0) - jn(1, 1)) * (jn(0, 0) - jn(1, 1)) +
                        4.0 * jn(0, 1) * jn(1, 0);
    const double n1 = 0.5 * (tr - std::sqrt(std::max(disc, 0.0)));
    const double n2 = 0.5 * (tr + std::sqrt(std::max(disc, 0.0)));
    const auto [l1, l2] = eigenvalues(p, s);
    max_eig_err = std::max({max_eig_err, std::abs(n1 - l1), std::abs(n2 - l2)});
  }
  bool order_switch_ok = true;
  const double ps = phi_star(p);
  for (int k = 1; k < 1000; ++k) {
    const double phi = k / 1000.0;
    const Vec2 u = slip_velocities(p, phi);
    if (phi < ps - 1e-9 && !(u[0] > u[1])) order_switch_ok = false;
    if (phi > ps + 1e-9 && phi < 1.0 && !(u[0] < u[1])) order_switch_ok = false;
  }

  json j{{"params", io::params_to_json(p)},
         {"validation",
          {{"valid", rep.valid},
           {"violations", rep.violations},
           {"slip_decay_ok", rep.slip_decay_ok},
           {"classical_order_holds", rep.classical_order_holds}}},
         {"derived", io::derived_constants_json(p)},
         {"checks",
          {{"eigenvalue_vs_numeric_max_err", max_eig_err},
           {"slip_order_switch_at_phi_star", order_switch_ok},
           {"samples", 500}}}};
  std::cout << j.dump(2) << "\n";
  io::write_text(fs::path(g.out_dir) / "report.json", j.dump(2) + "\n");
  emit_manifest(g, "report", p, json::object(), {"report.json"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-analytical solver and verification toolkit for "
               "bidisperse sedimentation (2x2 conservation laws)"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--preset", g.preset, "parameter preset: example1|example2");
  app.add_option("--params", g.params_file, "JSON parameter file");
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--tol", g.tol, "phase-space membership tolerance");
  app.add_option("--seed", g.seed, "seed for sampled checks");
  app.add_flag("--no-svg", g.no_svg, "skip SVG outputs");

  std::string state_text, base_text = "0,0", left_text = "0,0", right_text;
  std::string max_text, batch_text, snapshots_text, kind = "discriminant";
  std::string scheme_name = "rusanov", window_text, domain_text;
  int grid_n = 0, points = 200, res = 400, cells = 800, family = 0;
  double cfl = 0.45, t_end = 0.5, batch_length = 1.0;
  bool to_max = false, compare = false, extended = false;

  auto* eigen = app.add_subcommand("eigen", "eigenvalues and eigenvectors");
  eigen->add_option("--state", state_text, "state phi1,phi2");
  eigen->add_option("--grid", grid_n, "emit an NxN interior grid CSV");

  auto* locus = app.add_subcommand("locus", "Hugoniot locus of a base state");
  locus->add_option("--base", base_text, "base state (default origin)");
  locus->add_option("--points", points, "points per analytic branch");
  locus->add_option("--res", res, "contour resolution for generic bases");

  auto* classify = app.add_subcommand("classify", "classify a shock pair");
  classify->add_option("--left", left_text)->required();
  classify->add_option("--right", right_text)->required();

  auto* riemann = app.add_subcommand("riemann", "solve a Riemann problem");
  riemann->add_option("--left", left_text, "left datum (0,0 unless --to-max)");
  riemann->add_option("--right", right_text, "right datum");
  riemann->add_flag("--to-max", to_max, "solve RP(left, maximum line)");
  riemann->add_option("--max", max_text, "requested maximal state");

  auto* simulate = app.add_subcommand("simulate", "finite-difference run");
  simulate->add_option("--left", left_text);
  simulate->add_option("--right", right_text);
  simulate->add_option("--batch", batch_text, "homogeneous column state");
  simulate->add_option("--length", batch_length, "column height L");
  simulate->add_option("--cells", cells);
  simulate->add_option("--cfl", cfl);
  simulate->add_option("--t-end", t_end);
  simulate->add_option("--scheme", scheme_name, "rusanov|lax_friedrichs");
  simulate->add_option("--snapshots", snapshots_text, "comma-separated times");
  simulate->add_option("--domain", domain_text, "xlo,xhi");
  simulate->add_flag("--compare", compare,
                     "L1 error against the semi-analytical solution");

  auto* map = app.add_subcommand("map", "phase-space maps");
  map->add_option("--kind", kind,
                  "discriminant|inflection|double_contact|classification");
  map->add_flag("--extended", extended, "extend beyond the triangle");
  map->add_option("--window", window_text, "xlo,xhi,ylo,yhi");
  map->add_option("--res", res);
  map->add_option("--family", family, "restrict inflection to one family");

  auto* report = app.add_subcommand("report", "derived constants and checks");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(g.out_dir);
    if (eigen->parsed()) return cmd_eigen(g, state_text, grid_n);
    if (locus->parsed()) return cmd_locus(g, base_text, points, res);
    if (classify->parsed()) return cmd_classify(g, left_text, right_text);
    if (riemann->parsed())
      return cmd_riemann(g, left_text, right_text, to_max, max_text);
    if (simulate->parsed())
      return cmd_simulate(g, left_text, right_text, batch_text, batch_length,
                          cells, cfl, t_end, scheme_name, snapshots_text,
                          compare, domain_text);
    if (map->parsed())
      return cmd_map(g, kind, extended, window_text, res, family);
    if (report->parsed()) return cmd_report(g);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadState;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverAbort;
  }
  return 0;
}
