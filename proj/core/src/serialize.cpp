#include "qrate/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qrate {

namespace {

using nlohmann::json;

// nlohmann reports parse errors as a byte offset; humans want line:column.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

std::vector<double> number_array(const json& j, const char* field, std::size_t want) {
  if (!j.is_array()) fail(std::string("spec json: \"") + field + "\" must be an array");
  if (j.size() != want)
    fail(std::string("spec json: \"") + field + "\" must have " + std::to_string(want) +
         " entries, got " + std::to_string(j.size()));
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(std::string("spec json: \"") + field + "\" entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

QuantizerSpec parse_spec_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    fail("spec json: parse error at line " + std::to_string(line) + ":" + std::to_string(col) +
         ": " + e.what());
  }
  if (!j.is_object()) fail("spec json: top level must be an object");

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "K" && key != "thresholds" && key != "levels" && key != "step" && key != "name")
      fail("spec json: unknown field \"" + key + "\"");
  }

  if (!j.contains("K") || !j["K"].is_number_integer() || j["K"].get<long long>() < 1)
    fail("spec json: \"K\" must be a positive integer");
  if (j["K"].get<long long>() > (1ll << 20))
    fail("spec json: \"K\" must be at most 1048576");
  const std::size_t K = std::size_t(j["K"].get<long long>());

  QuantizerSpec spec;
  const bool have_step = j.contains("step");
  const bool have_shape = j.contains("thresholds") || j.contains("levels");
  if (have_step && have_shape)
    fail("spec json: give either \"step\" or \"thresholds\"+\"levels\", not both");
  if (have_step) {
    if (!j["step"].is_number()) fail("spec json: \"step\" must be a number");
    try {
      spec = make_uniform(K, j["step"].get<double>());
    } catch (const std::invalid_argument& e) {
      fail(std::string("spec json: ") + e.what());
    }
  } else if (j.contains("thresholds") && j.contains("levels")) {
    spec.thresholds = number_array(j["thresholds"], "thresholds", K - 1);
    spec.levels = number_array(j["levels"], "levels", K);
  } else {
    fail("spec json: need \"step\" or both \"thresholds\" and \"levels\"");
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("spec json: \"name\" must be a string");
    spec.name = j["name"].get<std::string>();
  }

  if (auto err = validate(spec)) fail("spec json: " + *err);
  return spec;
}

QuantizerSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec_json(buf.str());
  } catch (const std::runtime_error& e) {
    fail(path + ": " + e.what());
  }
}

std::string to_json_string(const QuantizerSpec& spec, int indent) {
  json j;
  j["K"] = spec.half_levels();
  j["thresholds"] = spec.thresholds;
  j["levels"] = spec.levels;
  if (!spec.name.empty()) j["name"] = spec.name;
  return j.dump(indent) + "\n";
}

void save_spec_file(const QuantizerSpec& spec, const std::string& path, int indent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open output file: " + path);
  out << to_json_string(spec, indent);
  if (!out) fail("failed writing " + path);
}

}  // namespace qrate
