#include "isostrata/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "isostrata/builtins.hpp"
#include "isostrata/errors.hpp"

namespace isostrata {

namespace {

using json = nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key" in the source text, or -1.
int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? -1 : line_of_offset(text, pos);
}

struct Reader {
  const std::string& text;

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    const std::string top = field.substr(0, field.find_first_of("[."));
    throw ParseError(field, message, line_of_key(text, top));
  }

  double number(const json& j, const std::string& field) const {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
  }

  Mat matrix(const json& j, const std::string& field, int n) const {
    if (!j.is_array()) fail(field, "expected an array of rows");
    if (static_cast<int>(j.size()) != n)
      fail(field, "has " + std::to_string(j.size()) + " rows, expected " + std::to_string(n));
    Mat m(n, n);
    for (int r = 0; r < n; ++r) {
      const json& row = j[static_cast<size_t>(r)];
      const std::string rf = field + "[" + std::to_string(r) + "]";
      if (!row.is_array()) fail(rf, "expected a row array");
      if (static_cast<int>(row.size()) != n)
        fail(rf, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
      for (int c = 0; c < n; ++c) m(r, c) = number(row[static_cast<size_t>(c)], rf + "[" + std::to_string(c) + "]");
    }
    return m;
  }

  std::vector<Mat> matrices(const json& root, const std::string& key, int n, bool required) const {
    std::vector<Mat> out;
    if (!root.contains(key)) {
      if (required) fail(key, "missing");
      return out;
    }
    const json& list = root.at(key);
    if (!list.is_array()) fail(key, "expected an array of matrices");
    for (size_t i = 0; i < list.size(); ++i) out.push_back(matrix(list[i], key + "[" + std::to_string(i) + "]", n));
    return out;
  }
};

}  // namespace

RunConfig builtin_config(const std::string& name) {
  RunConfig cfg;
  cfg.description = builtin_description(name);
  cfg.source = "builtin:" + name;
  return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const Reader rd{text};
  if (!root.is_object()) rd.fail("<document>", "expected a JSON object");

  RunConfig cfg;
  cfg.source = source;
  if (root.contains("builtin")) {
    if (!root.at("builtin").is_string()) rd.fail("builtin", "expected a builtin name");
    try {
      cfg.description = builtin_description(root.at("builtin").get<std::string>());
    } catch (const Error& e) {
      rd.fail("builtin", e.what());
    }
  } else {
    if (!root.contains("dim_v")) rd.fail("dim_v", "missing");
    const json& dv = root.at("dim_v");
    if (!dv.is_number_integer() || dv.get<int>() < 0) rd.fail("dim_v", "expected a nonnegative integer");
    const int n = dv.get<int>();
    GroupDescription& d = cfg.description;
    d.dim_v = n;
    d.name = root.contains("name") && root.at("name").is_string() ? root.at("name").get<std::string>() : "config";
    d.k_basis = rd.matrices(root, "k_basis", n, true);
    d.p_basis = rd.matrices(root, "p_basis", n, true);
    d.component_reps = rd.matrices(root, "component_reps", n, false);
    d.normalizer_reps = rd.matrices(root, "normalizer_reps", n, false);
    d.ambient_reps = rd.matrices(root, "ambient_reps", n, false);
    if (root.contains("structure_tol")) d.structure_tol = rd.number(root.at("structure_tol"), "structure_tol");
  }

  if (root.contains("tolerances")) {
    const json& tol = root.at("tolerances");
    if (!tol.is_object()) rd.fail("tolerances", "expected an object of named reals");
    for (const auto& [key, value] : tol.items()) {
      const std::string field = "tolerances." + key;
      if (!cfg.options.set(key, rd.number(value, field))) rd.fail(field, "unknown tolerance name");
    }
  }
  build_group(cfg.description);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace isostrata
