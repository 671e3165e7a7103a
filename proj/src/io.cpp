#include "strongmax/io.hpp"

#include "text.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <cmath>
#include <fstream>
#include <sstream>

namespace strongmax::io {

namespace {

struct Frame {
  bool object = false;
  std::string key;
  int index = 0;
  bool expecting_key = false;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

std::string current_pointer(const std::vector<Frame>& stack) {
  std::string p;
  for (const auto& f : stack) p += "/" + (f.object ? escape_token(f.key) : std::to_string(f.index));
  return p;
}

const json& field(const json& j, const std::string& pointer, const char* key) {
  if (!j.is_object()) throw FieldError(pointer, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FieldError(pointer, std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) throw FieldError(pointer, "expected a number");
  return j.get<double>();
}

Index as_index(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw FieldError(pointer, "expected an integer");
  return j.get<Index>();
}

std::string as_string(const json& j, const std::string& pointer) {
  if (!j.is_string()) throw FieldError(pointer, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& pointer) {
  if (!j.is_array()) throw FieldError(pointer, "expected an array");
  return j;
}

template <typename T, typename Get>
std::vector<T> array_of(const json& j, const std::string& pointer, Get&& get) {
  std::vector<T> out;
  const json& arr = as_array(j, pointer);
  for (std::size_t k = 0; k < arr.size(); ++k)
    out.push_back(get(arr[k], pointer + "/" + std::to_string(k)));
  return out;
}

// Wraps library exceptions raised while decoding the value at `pointer`.
template <typename F>
auto located(const std::string& pointer, F&& f) {
  try {
    return f();
  } catch (const FieldError&) {
    throw;
  } catch (const std::exception& e) {
    throw FieldError(pointer, e.what());
  }
}

}  // namespace

int line_of(const std::string& text, const std::string& pointer) {
  std::vector<Frame> stack;
  int line = 1;
  std::size_t k = 0;
  const auto value_starts = [&] { return current_pointer(stack) == pointer; };
  while (k < text.size()) {
    const char ch = text[k];
    if (ch == '\n') {
      ++line;
      ++k;
    } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ':') {
      ++k;
    } else if (ch == '"') {
      std::string s;
      ++k;
      while (k < text.size() && text[k] != '"') {
        if (text[k] == '\\' && k + 1 < text.size()) ++k;
        s += text[k++];
      }
      ++k;
      if (!stack.empty() && stack.back().object && stack.back().expecting_key) {
        stack.back().key = s;
        stack.back().expecting_key = false;
      } else if (value_starts()) {
        return line;
      }
    } else if (ch == ',') {
      if (!stack.empty()) {
        if (stack.back().object)
          stack.back().expecting_key = true;
        else
          ++stack.back().index;
      }
      ++k;
    } else if (ch == '{' || ch == '[') {
      if (value_starts()) return line;
      stack.push_back({ch == '{', {}, 0, ch == '{'});
      ++k;
    } else if (ch == '}' || ch == ']') {
      if (!stack.empty()) stack.pop_back();
      ++k;
    } else {
      if (value_starts()) return line;
      while (k < text.size() && !std::strchr(",]}\n \t\r", text[k])) ++k;
    }
  }
  return 1;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json to_json(const GridFunctiond& g) {
  json values = json::array();
  for (Index k = 0; k < g.size(); ++k) values.push_back(number(g[k]));
  return {{"dims", g.dims().to_vector()}, {"cell_measure", g.cell_measure()}, {"values", values}};
}

GridFunctiond grid_from_json(const json& j) {
  const auto extents = array_of<Index>(field(j, "", "dims"), "/dims", as_index);
  const Dims dims = located("/dims", [&] { return Dims(std::span<const Index>(extents)); });
  const double cm = j.contains("cell_measure")
                        ? as_number(j["cell_measure"], "/cell_measure")
                        : 1.0 / static_cast<double>(dims.cells());
  const auto values = array_of<double>(field(j, "", "values"), "/values", as_number);
  if (static_cast<Index>(values.size()) != dims.cells())
    throw FieldError("/values", "expected " + std::to_string(dims.cells()) + " values, got " +
                                    std::to_string(values.size()));
  GridFunctiond::Values v = Eigen::Map<const GridFunctiond::Values>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  return located("", [&] { return GridFunctiond(dims, v, cm); });
}

GridFunctiond read_grid(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() != ".csv")
    return decode_text(text, path.string(), [](const json& j) { return grid_from_json(j); });
  std::vector<double> values;
  Index rows = 0, cols = -1;
  std::istringstream in(text);
  std::string row;
  int line = 0;
  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    const auto cells = text::split(row, ',');
    if (cols >= 0 && static_cast<Index>(cells.size()) != cols)
      throw ParseError(path.string(), line, "ragged CSV row");
    cols = static_cast<Index>(cells.size());
    for (auto c : cells) {
      while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
      try {
        values.push_back(text::parse_number(c));
      } catch (const ConfigError& e) {
        throw ParseError(path.string(), line, e.what());
      }
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(path.string(), 1, "empty CSV grid");
  const Dims dims{rows, cols};
  GridFunctiond::Values v = Eigen::Map<const GridFunctiond::Values>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  try {
    return GridFunctiond(dims, v, 1.0 / static_cast<double>(dims.cells()));
  } catch (const std::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

void write_grid(const std::filesystem::path& path, const GridFunctiond& g) {
  write_text(path, to_json(g).dump(1) + "\n");
}

json to_json(const Rect& r) {
  json axes = json::array();
  for (int l = 0; l < r.rank; ++l) axes.push_back({r.lo[l], r.hi[l]});
  return axes;
}

Rect rect_from_json(const json& j, const std::string& pointer) {
  const json& axes = as_array(j, pointer);
  if (axes.empty() || axes.size() > static_cast<std::size_t>(kMaxDims))
    throw FieldError(pointer, "rectangle rank must be in 1.." + std::to_string(kMaxDims));
  Rect r;
  r.rank = static_cast<int>(axes.size());
  for (int l = 0; l < r.rank; ++l) {
    const std::string p = pointer + "/" + std::to_string(l);
    const json& pair = as_array(axes[l], p);
    if (pair.size() != 2) throw FieldError(p, "expected a [lo, hi] pair");
    r.lo[l] = as_index(pair[0], p + "/0");
    r.hi[l] = as_index(pair[1], p + "/1");
    if (r.lo[l] < 0 || r.hi[l] <= r.lo[l]) throw FieldError(p, "need 0 <= lo < hi");
  }
  return r;
}

std::vector<Rect> rects_from_json(const json& j) {
  const json& arr = j.is_object() ? field(j, "", "rects") : j;
  const std::string base = j.is_object() ? "/rects" : "";
  return array_of<Rect>(arr, base, rect_from_json);
}

std::vector<Rect> read_rects(const std::filesystem::path& path) {
  return decode_text(read_text(path), path.string(),
                     [](const json& j) { return rects_from_json(j); });
}

json run_length(const Mask& m) {
  json runs = json::array();
  std::size_t k = 0;
  while (k < m.size()) {
    if (!m[k]) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    while (k < m.size() && m[k]) ++k;
    runs.push_back({start, k - start});
  }
  return runs;
}

json to_json(const SelectionResult& sel, const std::vector<Rect>& rects) {
  json ratios = json::array();
  json exhaustion = json::array();
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    const double cells = static_cast<double>(rects[sel.order[sel.selected[i]]].cells());
    ratios.push_back(static_cast<double>(sel.overlap[i]) / cells);
    exhaustion.push_back(sel.exhaustion_count(i));
  }
  return {{"dims", sel.dims.to_vector()},
          {"order", sel.order},
          {"selected_positions", sel.selected},
          {"selected", sel.selected_original()},
          {"overlap_cells", sel.overlap},
          {"overlap_ratios", ratios},
          {"exhaustion_cells", exhaustion},
          {"omega_cells", mask_count(sel.omega)},
          {"omega_runs", run_length(sel.omega)}};
}

json to_json(const RatioReport& r, bool timings) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"level", number(row.level)},
                    {"lhs", number(row.lhs)},
                    {"rhs", number(row.rhs)},
                    {"ratio", number(row.ratio)}});
  json out = {{"label", r.label},
              {"theorem", r.theorem},
              {"lhs", number(r.lhs)},
              {"rhs", number(r.rhs)},
              {"ratio", number(r.ratio)},
              {"degenerate", r.degenerate},
              {"violation", r.violation},
              {"in_hypothesis", r.in_hypothesis},
              {"warnings", r.warnings},
              {"levels", rows}};
  if (!r.witness.empty())
    out["witness"] = {{"point", r.witness}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)}};
  if (timings) out["runtime_seconds"] = r.runtime_seconds;
  return out;
}

json to_json(const SuiteConfig& c) {
  json cases = json::array();
  for (const auto& sc : c.cases) {
    json jc = {{"label", sc.label}, {"theorem", sc.theorem}, {"rank", sc.rank},
               {"fs", sc.fs},       {"omegas", sc.omegas},   {"ps", sc.ps},
               {"psis", sc.psis},   {"levels", sc.levels}};
    if (!sc.refinements.empty()) jc["refinements"] = sc.refinements;
    cases.push_back(jc);
  }
  json out = {{"seed", c.seed}, {"refinements", c.refinements}, {"tol", c.tol}, {"cases", cases}};
  if (c.sharpness)
    out["sharpness"] = {{"n", c.sharpness->n}, {"m", c.sharpness->m}, {"ladder", c.sharpness->ladder}};
  return out;
}

SuiteConfig suite_from_json(const json& j) {
  SuiteConfig c;
  if (!j.is_object()) throw FieldError("", "expected an object");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw FieldError("/seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("refinements"))
    c.refinements = array_of<Index>(j["refinements"], "/refinements", as_index);
  if (j.contains("tol")) {
    c.tol = as_number(j["tol"], "/tol");
    if (!(c.tol > 0.0)) throw FieldError("/tol", "tolerance must be positive");
  }
  const auto strings = [](const json& v, const std::string& p) {
    return array_of<std::string>(v, p, as_string);
  };
  const json& cases = as_array(field(j, "", "cases"), "/cases");
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::string p = "/cases/" + std::to_string(k);
    const json& jc = cases[k];
    SuiteCase sc;
    sc.label = as_string(field(jc, p, "label"), p + "/label");
    sc.theorem = as_string(field(jc, p, "theorem"), p + "/theorem");
    const auto& names = theorem_names();
    if (std::find(names.begin(), names.end(), sc.theorem) == names.end())
      throw FieldError(p + "/theorem", "unknown theorem '" + sc.theorem + "'");
    if (jc.contains("rank")) sc.rank = static_cast<int>(as_index(jc["rank"], p + "/rank"));
    if (sc.rank < 1 || sc.rank > kMaxDims) throw FieldError(p + "/rank", "rank out of range");
    if (jc.contains("fs")) sc.fs = strings(jc["fs"], p + "/fs");
    if (jc.contains("omegas")) sc.omegas = strings(jc["omegas"], p + "/omegas");
    if (jc.contains("ps")) sc.ps = array_of<double>(jc["ps"], p + "/ps", as_number);
    if (jc.contains("psis")) {
      sc.psis = strings(jc["psis"], p + "/psis");
      for (std::size_t q = 0; q < sc.psis.size(); ++q)
        located(p + "/psis/" + std::to_string(q), [&] { return YoungFunction::parse(sc.psis[q]); });
    }
    if (jc.contains("levels")) sc.levels = array_of<double>(jc["levels"], p + "/levels", as_number);
    if (jc.contains("refinements"))
      sc.refinements = array_of<Index>(jc["refinements"], p + "/refinements", as_index);
    c.cases.push_back(std::move(sc));
  }
  if (j.contains("sharpness")) {
    const json& js = j["sharpness"];
    SharpnessConfig s;
    s.n = static_cast<int>(as_index(field(js, "/sharpness", "n"), "/sharpness/n"));
    s.m = static_cast<int>(as_index(field(js, "/sharpness", "m"), "/sharpness/m"));
    s.ladder = array_of<Index>(field(js, "/sharpness", "ladder"), "/sharpness/ladder", as_index);
    c.sharpness = s;
  }
  return c;
}

SuiteConfig read_suite(const std::filesystem::path& path) {
  return decode_text(read_text(path), path.string(),
                     [](const json& j) { return suite_from_json(j); });
}

}  // namespace strongmax::io
