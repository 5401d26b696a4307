#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bised/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bised;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "bised_io_test";
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("double formatting round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 0.159103584746285, -2.5e-17, 0.0, 1e300,
                   0.020040625}) {
    const std::string text = io::format_double(v);
    CHECK(std::stod(text) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0) == "1");
}

TEST_CASE("parameter JSON round trip and presets") {
  const ModelParams p = example2_params();
  const ModelParams q = io::params_from_json(io::params_to_json(p));
  CHECK(q.v_inf[0] == p.v_inf[0]);
  CHECK(q.v_inf[1] == p.v_inf[1]);
  CHECK(q.n[0] == p.n[0]);
  CHECK(q.n[1] == p.n[1]);
  CHECK(q.phi_max == p.phi_max);

  CHECK(io::preset("example1").n[0] == 4.0);
  CHECK(io::preset("example2").n[0] == 4.6);
  CHECK(io::preset("example2").n[1] == 1.5);
  CHECK_THROWS_AS(io::preset("example3"), std::invalid_argument);

  const auto j = io::params_to_json(p);
  CHECK(j.at("v_inf").at(0) == 1.0);
  CHECK(j.at("phi_max") == 1.0);
}

TEST_CASE("csv writing is deterministic") {
  TempDir tmp;
  const std::vector<io::CsvRow> rows{{0.1, 0.2, "1-lax", "R2"},
                                     {1.0 / 3.0, -4.5e-9, "oc", "-"}};
  io::write_csv(tmp.path / "a.csv", "c1,c2,class,flags", rows);
  io::write_csv(tmp.path / "b.csv", "c1,c2,class,flags", rows);
  const std::string a = slurp(tmp.path / "a.csv");
  CHECK(a == slurp(tmp.path / "b.csv"));
  CHECK(a.substr(0, 2) == "# ");
  CHECK(a.find("1-lax") != std::string::npos);
}

TEST_CASE("manifest pins params, options and derived constants") {
  const ModelParams p = example1_params();
  const auto m = io::run_manifest("eigen", p, {{"grid", 100}}, {"eigen.csv"});
  CHECK(m.at("command") == "eigen");
  CHECK(m.at("derived").at("phi_star") == 0.5);
  CHECK(m.at("derived").at("inflection_axis1").at(0) == 0.4);
  CHECK(m.at("outputs").at(0) == "eigen.csv");
  // serialization is stable
  CHECK(m.dump() ==
        io::run_manifest("eigen", p, {{"grid", 100}}, {"eigen.csv"}).dump());
}

TEST_CASE("coincidence report serialization") {
  const auto rep = coincidence_points(example1_params());
  const auto j = io::coincidence_to_json(rep);
  REQUIRE(j.at("points").size() == 1);
  CHECK(j.at("points").at(0).at("quasi_umbilic") == true);
  CHECK(j.at("shortcut_predicted_axis2_roots") == 2);
}

TEST_CASE("solution serialization carries segments and flags") {
  const auto sol = solve_rp_origin(example1_params(), State(0.2, 0.25));
  const auto j = io::solution_to_json(sol);
  REQUIRE(j.at("segments").size() == 2);
  CHECK(j.at("segments").at(0).at("kind") == "shock");
  CHECK(j.at("segments").at(0).at("shock_class").at("kind") == "1-lax");
  CHECK(j.at("middle_states").size() == 1);
  CHECK(j.at("unresolved") == false);
}

TEST_CASE("svg canvas emits deterministic layers") {
  io::SvgCanvas a, b;
  for (auto* c : {&a, &b}) {
    c->triangle_frame();
    c->styled_polyline({State(0.1, 0), State(0.5, 0)}, ShockKind::lax2);
    c->styled_polyline({State(0, 0.1), State(0, 0.5)}, ShockKind::lax1);
    c->circle(State(0.25, 0.25), 3.0, "#c62828");
    c->cell(State(0.1, 0.1), State(0.2, 0.2), "#cccccc");
  }
  CHECK(a.str() == b.str());
  CHECK(a.str().find("<svg") == 0);
  CHECK(a.str().find("stroke-dasharray") != std::string::npos);
  CHECK(a.str().find("</svg>") != std::string::npos);
}
