#pragma once

// File emission: round-trip CSV, JSON serialization, SVG phase-portrait
// layers, and the run manifest that makes CLI invocations reproducible.

#include "bised/fd.hpp"
#include "bised/hugoniot.hpp"
#include "bised/model.hpp"
#include "bised/riemann.hpp"
#include "bised/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace bised::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest representation that round-trips the exact double.
std::string format_double(double v);

/// One CSV cell: numbers via format_double, strings verbatim.
struct Cell {
  std::string text;
  Cell(double v) : text(format_double(v)) {}
  Cell(int v) : text(std::to_string(v)) {}
  Cell(const char* s) : text(s) {}
  Cell(std::string s) : text(std::move(s)) {}
};

using CsvRow = std::vector<Cell>;

/// Writes "# <header>" then comma-joined rows.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<CsvRow>& rows);

nlohmann::json params_to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

/// Named parameter sets "example1" / "example2".
ModelParams preset(const std::string& name);

nlohmann::json shock_class_to_json(const ShockClass& c);
nlohmann::json coincidence_to_json(const CoincidenceReport& rep);
nlohmann::json solution_to_json(const WaveCurveSolution& sol);
nlohmann::json locus_to_json(const LocusBranch& branch);

/// Derived constants block reused by manifests and the report command.
nlohmann::json derived_constants_json(const ModelParams& p);

/// Everything needed to re-execute a CLI run to byte-identical outputs.
nlohmann::json run_manifest(const std::string& command, const ModelParams& p,
                            const nlohmann::json& options,
                            const std::vector<std::string>& outputs);

/// Minimal SVG layer over the phase triangle: phi1 rightward, phi2 upward,
/// unit box. Line styles by shock class: solid = 2-Lax, dashed = 1-Lax,
/// dash-dot = over-compressive.
class SvgCanvas {
 public:
  explicit SvgCanvas(double size_px = 640, Window world = {0, 1, 0, 1});

  void polyline(const Polyline& line, const std::string& stroke,
                double width = 1.5, const std::string& dash = "");
  void styled_polyline(const Polyline& line, ShockKind kind);
  void segment(const State& a, const State& b, const std::string& stroke,
               double width = 1.0, const std::string& dash = "");
  void circle(const State& s, double radius_px, const std::string& fill);
  void cell(const State& lo, const State& hi, const std::string& fill);
  void triangle_frame();

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  double px(double x) const;
  double py(double y) const;

  double size_;
  Window world_;
  std::string body_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bised::io
