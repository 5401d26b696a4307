#include "bised/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bised::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "# " << header << "\n";
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k)
      os << (k ? "," : "") << row[k].text;
    os << "\n";
  }
  write_text(path, os.str());
}

nlohmann::json params_to_json(const ModelParams& p) {
  return {{"v_inf", {p.v_inf[0], p.v_inf[1]}},
          {"n", {p.n[0], p.n[1]}},
          {"phi_max", p.phi_max}};
}

ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams p;
  p.v_inf = Vec2(j.at("v_inf").at(0).get<double>(),
                 j.at("v_inf").at(1).get<double>());
  p.n = Vec2(j.at("n").at(0).get<double>(), j.at("n").at(1).get<double>());
  p.phi_max = j.value("phi_max", 1.0);
  return p;
}

ModelParams preset(const std::string& name) {
  if (name == "example1") return example1_params();
  if (name == "example2") return example2_params();
  throw std::invalid_argument("unknown preset: " + name);
}

nlohmann::json shock_class_to_json(const ShockClass& c) {
  return {{"kind", to_string(c.kind)},
          {"left_char_1", c.left_char_1},
          {"left_char_2", c.left_char_2},
          {"right_char_1", c.right_char_1},
          {"right_char_2", c.right_char_2}};
}

nlohmann::json coincidence_to_json(const CoincidenceReport& rep) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& cp : rep.points)
    pts.push_back({{"state", {cp.state[0], cp.state[1]}},
                   {"axis", cp.axis},
                   {"phi", cp.phi},
                   {"quasi_umbilic", cp.quasi_umbilic}});
  nlohmann::json j{{"points", pts}};
  if (rep.r2_extremum_phi) j["r2_extremum_phi"] = *rep.r2_extremum_phi;
  if (rep.shortcut_predicted_axis2_roots)
    j["shortcut_predicted_axis2_roots"] = *rep.shortcut_predicted_axis2_roots;
  return j;
}

nlohmann::json solution_to_json(const WaveCurveSolution& sol) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& seg : sol.segments) {
    nlohmann::json js{{"family", seg.family},
                      {"kind", to_string(seg.kind)},
                      {"left", {seg.left[0], seg.left[1]}},
                      {"right", {seg.right[0], seg.right[1]}},
                      {"speed_lo", seg.speed_lo},
                      {"speed_hi", seg.speed_hi},
                      {"char_left", seg.char_left},
                      {"char_right", seg.char_right}};
    if (seg.kind != WaveKind::rarefaction)
      js["shock_class"] = shock_class_to_json(seg.shock_class);
    segs.push_back(js);
  }
  nlohmann::json mids = nlohmann::json::array();
  for (const auto& m : sol.middle_states) mids.push_back({m[0], m[1]});
  return {{"left_datum", {sol.left_datum[0], sol.left_datum[1]}},
          {"right_datum", {sol.right_datum[0], sol.right_datum[1]}},
          {"segments", segs},
          {"middle_states", mids},
          {"unresolved", sol.unresolved},
          {"note", sol.note}};
}

nlohmann::json locus_to_json(const LocusBranch& branch) {
  nlohmann::json pts = nlohmann::json::array();
  for (size_t k = 0; k < branch.points.size(); ++k)
    pts.push_back({{"state", {branch.points[k][0], branch.points[k][1]}},
                   {"sigma", branch.speeds[k]},
                   {"class", shock_class_to_json(branch.classes[k])}});
  return {{"kind", to_string(branch.kind)},
          {"base", {branch.base[0], branch.base[1]}},
          {"points", pts}};
}

nlohmann::json derived_constants_json(const ModelParams& p) {
  const auto infl = inflection_points_axes(p);
  const auto coin = coincidence_points(p);
  return {{"phi_star", phi_star(p)},
          {"phi_sigma", phi_sigma(p)},
          {"inflection_axis1", {infl[0][0], infl[0][1]}},
          {"inflection_axis2", {infl[1][0], infl[1][1]}},
          {"coincidence", coincidence_to_json(coin)}};
}

nlohmann::json run_manifest(const std::string& command, const ModelParams& p,
                            const nlohmann::json& options,
                            const std::vector<std::string>& outputs) {
  return {{"command", command},
          {"version", kToolVersion},
          {"params", params_to_json(p)},
          {"options", options},
          {"outputs", outputs},
          {"derived", derived_constants_json(p)}};
}

SvgCanvas::SvgCanvas(double size_px, Window world)
    : size_(size_px), world_(world) {}

double SvgCanvas::px(double x) const {
  return (x - world_.x_lo) / world_.width() * size_;
}

double SvgCanvas::py(double y) const {
  return size_ - (y - world_.y_lo) / world_.height() * size_;
}

void SvgCanvas::polyline(const Polyline& line, const std::string& stroke,
                         double width, const std::string& dash) {
  if (line.size() < 2) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
     << width << "\"";
  if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  for (const auto& s : line) os << px(s[0]) << "," << py(s[1]) << " ";
  os << "\"/>\n";
  body_ += os.str();
}

void SvgCanvas::styled_polyline(const Polyline& line, ShockKind kind) {
  switch (kind) {
    case ShockKind::lax2:
      polyline(line, "#1f4e9c", 2.0);
      break;
    case ShockKind::lax1:
      polyline(line, "#1f4e9c", 2.0, "7,5");
      break;
    case ShockKind::overcompressive:
      polyline(line, "#9c1f1f", 2.0, "9,4,2,4");
      break;
    case ShockKind::inadmissible:
      polyline(line, "#999999", 1.0, "2,4");
      break;
  }
}

void SvgCanvas::segment(const State& a, const State& b,
                        const std::string& stroke, double width,
                        const std::string& dash) {
  polyline({a, b}, stroke, width, dash);
}

void SvgCanvas::circle(const State& s, double radius_px,
                       const std::string& fill) {
  std::ostringstream os;
  os << "<circle cx=\"" << px(s[0]) << "\" cy=\"" << py(s[1]) << "\" r=\""
     << radius_px << "\" fill=\"" << fill << "\"/>\n";
  body_ += os.str();
}

void SvgCanvas::cell(const State& lo, const State& hi,
                     const std::string& fill) {
  std::ostringstream os;
  os << "<rect x=\"" << px(lo[0]) << "\" y=\"" << py(hi[1]) << "\" width=\""
     << px(hi[0]) - px(lo[0]) << "\" height=\"" << py(lo[1]) - py(hi[1])
     << "\" fill=\"" << fill << "\"/>\n";
  body_ += os.str();
}

void SvgCanvas::triangle_frame() {
  polyline({State(0, 0), State(1, 0), State(0, 1), State(0, 0)}, "#000000",
           1.0);
}

std::string SvgCanvas::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_
     << "\" height=\"" << size_ << "\" viewBox=\"0 0 " << size_ << " " << size_
     << "\">\n"
     << body_ << "</svg>\n";
  return os.str();
}

void SvgCanvas::write(const std::filesystem::path& path) const {
  write_text(path, str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << text;
}

}  // namespace bised::io
