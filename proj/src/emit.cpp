#include "fpx/emit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

#include "fpx/error.hpp"
#include "json.hpp"

namespace fpx::emit {

using algebra::Elem;
using algebra::IntPolynomial;
using algebra::NumberFieldContext;
using algebra::QElem;
using nlohmann::ordered_json;

namespace {

const Rat kShadowEps = Rat(Int(1), Int(1) << 48);

double mid(const algebra::RationalInterval& iv) {
  return (Rat((iv.lo + iv.hi) / 2)).convert_to<double>();
}

std::string int_str(const Int& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string rat_str(const Rat& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Int parse_int(const std::string& s, const std::string& where) {
  static const std::regex form("-?[0-9]+");
  if (!std::regex_match(s, form))
    throw usage_error("expected an integer in " + where + ", got '" + s + "'");
  return Int(s);
}

Rat parse_rat(const std::string& s, const std::string& where) {
  static const std::regex form("-?[0-9]+(/[1-9][0-9]*)?");
  if (!std::regex_match(s, form))
    throw usage_error("expected a rational in " + where + ", got '" + s + "'");
  return Rat(s);
}

// Coordinates may be decimal strings (always exact) or plain JSON integers.
Int json_int(const ordered_json& v, const std::string& where) {
  if (v.is_string()) return parse_int(v.get<std::string>(), where);
  if (v.is_number_integer()) return Int(v.get<long long>());
  throw usage_error("expected an integer in " + where);
}

Rat json_rat(const ordered_json& v, const std::string& where) {
  if (v.is_string()) return parse_rat(v.get<std::string>(), where);
  if (v.is_number_integer()) return Rat(v.get<long long>());
  throw usage_error("expected a rational in " + where);
}

}  // namespace

std::string shadow_str(double v) {
  if (v == 0) v = 0;  // never print -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::pair<double, double> shadow_of(const NumberFieldContext& ctx,
                                    const Elem& e) {
  algebra::ComplexBox box = ctx.value_box(e, ctx.lambda_index(), kShadowEps);
  return {mid(box.re), mid(box.im)};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw usage_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw usage_error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw usage_error("cannot move output into place at '" + path + "': " +
                      ec.message());
  }
}

std::string point_set_csv(const NumberFieldContext& ctx,
                          const std::vector<Elem>& points) {
  int d = ctx.degree();
  std::ostringstream out;
  for (int j = 0; j < d; ++j) out << "coords_" << j << ",";
  out << "re,im\n";
  for (const Elem& e : points) {
    auto [re, im] = shadow_of(ctx, e);
    for (int j = 0; j < d; ++j) out << e[j] << ",";
    out << shadow_str(re) << "," << shadow_str(im) << "\n";
  }
  return out.str();
}

std::string point_set_svg(const NumberFieldContext& ctx,
                          const std::vector<Elem>& points) {
  // Flip y so positive imaginary parts render upward.
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = xmax;
  for (const Elem& e : points) {
    auto [re, im] = shadow_of(ctx, e);
    double x = re, y = -im;
    xy.emplace_back(x, y);
    xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  if (xy.empty()) xmin = xmax = ymin = ymax = 0;
  double sx = xmax - xmin, sy = ymax - ymin;
  double px = sx > 0 ? 0.05 * sx : 1.0;
  double py = sy > 0 ? 0.05 * sy : 1.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << shadow_str(xmin - px) << " " << shadow_str(ymin - py) << " "
      << shadow_str(sx + 2 * px) << " " << shadow_str(sy + 2 * py) << "\">\n";
  for (auto [x, y] : xy)
    out << "  <circle cx=\"" << shadow_str(x) << "\" cy=\"" << shadow_str(y)
        << "\" r=\"0.18\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string point_set_json(const NumberFieldContext& ctx,
                           const std::vector<Elem>& points) {
  ordered_json doc;
  doc["schema"] = "fpx.pointset/1";
  doc["minpoly"] = ctx.minpoly().str();
  doc["count"] = points.size();
  ordered_json rows = ordered_json::array();
  for (const Elem& e : points) {
    ordered_json row;
    ordered_json coords = ordered_json::array();
    for (const Int& c : e) coords.push_back(int_str(c));
    auto [re, im] = shadow_of(ctx, e);
    row["coords"] = std::move(coords);
    row["re"] = re;
    row["im"] = im;
    rows.push_back(std::move(row));
  }
  doc["points"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string window_json(const starset::Window& w) {
  ordered_json doc;
  doc["schema"] = "fpx.window/1";
  ordered_json ivs = ordered_json::array();
  for (const auto& [lo, hi] : w.bounds) {
    ordered_json iv;
    iv["lo"] = rat_str(lo);
    iv["hi"] = rat_str(hi);
    ivs.push_back(std::move(iv));
  }
  doc["intervals"] = std::move(ivs);
  return doc.dump(2) + "\n";
}

std::string derivation_json(const IntPolynomial& minpoly,
                            const starset::Derivation& d) {
  ordered_json doc;
  doc["schema"] = "fpx.derivation/1";
  if (!minpoly.is_zero()) doc["minpoly"] = minpoly.str();
  ordered_json param = ordered_json::array();
  for (const Rat& c : d.param) param.push_back(rat_str(c));
  doc["param"] = std::move(param);
  if (!d.target.empty()) doc["target"] = d.target;
  ordered_json steps = ordered_json::array();
  for (const starset::DerivationStep& st : d.steps) {
    ordered_json js;
    js["id"] = st.id;
    js["op"] = st.base ? "base" : "star";
    if (!st.base) {
      js["left"] = st.left;
      js["right"] = st.right;
    }
    ordered_json coords = ordered_json::array();
    for (const Int& c : st.value) coords.push_back(int_str(c));
    js["coords"] = std::move(coords);
    steps.push_back(std::move(js));
  }
  doc["steps"] = std::move(steps);
  return doc.dump(2) + "\n";
}

DerivationFile parse_derivation(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw usage_error(std::string("derivation file is not valid JSON: ") +
                      e.what());
  }

  DerivationFile file;
  const ordered_json* steps = nullptr;
  if (doc.is_array()) {
    steps = &doc;
  } else if (doc.is_object()) {
    if (doc.value("schema", "") != "fpx.derivation/1")
      throw usage_error("derivation file must declare schema fpx.derivation/1");
    if (doc.contains("minpoly")) {
      if (!doc["minpoly"].is_string())
        throw usage_error("derivation key 'minpoly' must be a string");
      file.minpoly = IntPolynomial::parse(doc["minpoly"].get<std::string>());
    }
    if (doc.contains("param")) {
      if (!doc["param"].is_array())
        throw usage_error("derivation key 'param' must be an array");
      for (const auto& c : doc["param"])
        file.derivation.param.push_back(json_rat(c, "param"));
    }
    if (doc.contains("target")) {
      if (!doc["target"].is_string())
        throw usage_error("derivation key 'target' must be a string");
      file.derivation.target = doc["target"].get<std::string>();
    }
    if (!doc.contains("steps") || !doc["steps"].is_array())
      throw usage_error("derivation file needs a 'steps' array");
    steps = &doc["steps"];
  } else {
    throw usage_error("derivation file must be an object or a step array");
  }

  std::set<std::string> ids;
  for (const auto& js : *steps) {
    if (!js.is_object()) throw usage_error("each derivation step must be an object");
    starset::DerivationStep st;
    if (!js.contains("id") || !js["id"].is_string() ||
        js["id"].get<std::string>().empty())
      throw usage_error("derivation step without an id");
    st.id = js["id"].get<std::string>();
    if (!ids.insert(st.id).second)
      throw usage_error("duplicate derivation id '" + st.id + "'");
    std::string op = js.value("op", "");
    if (op == "base") {
      st.base = true;
      if (js.contains("left") || js.contains("right"))
        throw usage_error("base step '" + st.id + "' must not reference ids");
    } else if (op == "star") {
      if (!js.contains("left") || !js["left"].is_string() ||
          !js.contains("right") || !js["right"].is_string())
        throw usage_error("star step '" + st.id +
                          "' needs string keys 'left' and 'right'");
      st.left = js["left"].get<std::string>();
      st.right = js["right"].get<std::string>();
    } else {
      throw usage_error("step '" + st.id + "' has op '" + op +
                        "'; expected \"base\" or \"star\"");
    }
    if (!js.contains("coords") || !js["coords"].is_array())
      throw usage_error("step '" + st.id + "' needs a 'coords' array");
    for (const auto& c : js["coords"])
      st.value.push_back(json_int(c, "step '" + st.id + "'"));
    file.derivation.steps.push_back(std::move(st));
  }
  if (file.derivation.steps.empty())
    throw usage_error("derivation file has no steps");
  if (file.derivation.target.empty())
    file.derivation.target = file.derivation.steps.back().id;
  return file;
}

}  // namespace fpx::emit
