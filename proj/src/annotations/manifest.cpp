// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <set>
#include <sstream>

#include "selo/annotations.hpp"

namespace selo {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(Errc::SchemaViolation, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) schema_error(where + "." + key, "expected a string");
  return v.get<std::string>();
}

int require_positive_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) schema_error(where + "." + key, "expected an integer");
  const auto n = v.get<long long>();
  if (n <= 0 || n > (1LL << 30)) schema_error(where + "." + key, "must be a positive pixel count");
  return static_cast<int>(n);
}

Polygon parse_polygon(const json& j, const std::string& where, int height, int width) {
  if (!j.is_array()) schema_error(where, "expected a vertex list");
  std::vector<Point> pts;
  pts.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& p = j[k];
    const std::string at = where + "[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      schema_error(at, "expected an [x, y] pair of numbers");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    Polygon poly(std::move(pts));
    if (!poly.within(height, width)) {
      throw Error(Errc::VertexOutOfBounds,
                  where + ": vertex outside " + std::to_string(width) + "x" + std::to_string(height) + " image");
    }
    return poly;
  } catch (const Error& e) {
    if (e.code() == Errc::PolygonDegenerate) throw Error(Errc::PolygonDegenerate, where + ": " + e.what());
    throw;
  }
}

}  // namespace

std::size_t Manifest::case_count() const noexcept {
  std::size_t n = 0;
  for (const auto& img : images) n += img.cases.size();
  return n;
}

std::size_t word_count(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

Manifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
  const std::string root = "$";
  const json& version = require(doc, "version", root);
  if (!version.is_number_integer() || version.get<int>() != 1) {
    schema_error(root + ".version", "unsupported manifest version (expected 1)");
  }
  const json& images = require(doc, "images", root);
  if (!images.is_array()) schema_error(root + ".images", "expected an array");

  Manifest manifest;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string at = root + ".images[" + std::to_string(i) + "]";
    const json& img = images[i];
    ImageEntry entry;
    entry.file = require_string(img, "file", at);
    entry.path = base_dir.empty() ? std::filesystem::path(entry.file) : base_dir / entry.file;
    entry.height = require_positive_int(img, "height", at);
    entry.width = require_positive_int(img, "width", at);

    const json& cases = require(img, "cases", at);
    if (!cases.is_array()) schema_error(at + ".cases", "expected an array");
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const std::string cat = at + ".cases[" + std::to_string(c) + "]";
      TestCase tc;
      tc.id = require_string(cases[c], "id", cat);
      tc.query = require_string(cases[c], "query", cat);
      if (tc.id.empty()) schema_error(cat + ".id", "must be nonempty");
      if (!ids.insert(tc.id).second) schema_error(cat + ".id", "duplicate case id '" + tc.id + "'");
      if (word_count(tc.query) == 0) schema_error(cat + ".query", "must contain at least one word");
      const json& regions = require(cases[c], "regions", cat);
      if (!regions.is_array() || regions.empty()) schema_error(cat + ".regions", "expected a nonempty array");
      for (std::size_t r = 0; r < regions.size(); ++r) {
        tc.regions.push_back(
            parse_polygon(regions[r], cat + ".regions[" + std::to_string(r) + "]", entry.height, entry.width));
      }
      entry.cases.push_back(std::move(tc));
    }
    manifest.images.push_back(std::move(entry));
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileMissing, "cannot read manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaViolation, path.string() + ": not valid JSON (" + e.what() + ")");
  }
  return parse_manifest(doc, path.parent_path());
}

json manifest_to_json(const Manifest& manifest) {
  json images = json::array();
  for (const auto& img : manifest.images) {
    json cases = json::array();
    for (const auto& tc : img.cases) {
      json regions = json::array();
      for (const auto& poly : tc.regions) {
        json verts = json::array();
        for (const auto& p : poly.vertices()) verts.push_back({p.x, p.y});
        regions.push_back(std::move(verts));
      }
      cases.push_back({{"id", tc.id}, {"query", tc.query}, {"regions", std::move(regions)}});
    }
    images.push_back({{"file", img.file}, {"height", img.height}, {"width", img.width}, {"cases", std::move(cases)}});
  }
  return {{"version", 1}, {"images", std::move(images)}};
}

}  // namespace selo
