#pragma once

#include "strongmax/covering.hpp"
#include "strongmax/grid.hpp"
#include "strongmax/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace strongmax::io {

using nlohmann::json;

/// Malformed input. what() reads "<source>:<line>: <message>".
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& source, int line, const std::string& message)
      : ConfigError(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A semantic error located by JSON pointer; loaders turn it into a ParseError.
class FieldError : public ConfigError {
 public:
  FieldError(std::string pointer, const std::string& message)
      : ConfigError(message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// 1-based line on which the value at `pointer` starts, or 1 if not found.
int line_of(const std::string& text, const std::string& pointer);

/// Parses text, converting syntax and FieldErrors raised by `decode` into
/// line-anchored ParseErrors.
template <typename Decode>
auto decode_text(const std::string& text, const std::string& source, Decode&& decode) {
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t k = 0; k < e.byte && k < text.size(); ++k)
      if (text[k] == '\n') ++line;
    throw ParseError(source, line, "malformed JSON");
  }
  try {
    return decode(value);
  } catch (const FieldError& e) {
    throw ParseError(source, line_of(text, e.pointer()),
                     std::string(e.what()) + " (at " + (e.pointer().empty() ? "/" : e.pointer()) + ")");
  }
}

std::string read_text(const std::filesystem::path& path);
/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Finite numbers as JSON numbers, infinities and NaN as strings.
json number(double v);

json to_json(const GridFunctiond& g);
GridFunctiond grid_from_json(const json& j);
/// Grid from JSON {dims, cell_measure, values}, or a 2-D CSV when the
/// extension is .csv (rows along axis 0, cell_measure 1/cells).
GridFunctiond read_grid(const std::filesystem::path& path);
void write_grid(const std::filesystem::path& path, const GridFunctiond& g);

/// Rectangles as arrays of per-axis [lo, hi) pairs.
json to_json(const Rect& r);
Rect rect_from_json(const json& j, const std::string& pointer);
std::vector<Rect> rects_from_json(const json& j);
std::vector<Rect> read_rects(const std::filesystem::path& path);

/// Runs [start, length] of set cells in row-major order.
json run_length(const Mask& m);
json to_json(const SelectionResult& sel, const std::vector<Rect>& rects);

json to_json(const RatioReport& r, bool timings = false);

json to_json(const SuiteConfig& c);
SuiteConfig suite_from_json(const json& j);
SuiteConfig read_suite(const std::filesystem::path& path);

}  // namespace strongmax::io
