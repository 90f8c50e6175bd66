// Copyright 2026 The RubbleNav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rubblenav/mask_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rubblenav
{

std::string_view to_string(Category c)
{
  switch (c) {
    case Category::kTraversable: return "traversable";
    case Category::kObstacle: return "obstacle";
    case Category::kUndefined: return "undefined";
  }
  return "undefined";
}

Category parse_category(std::string_view text)
{
  if (text == "traversable") {return Category::kTraversable;}
  if (text == "obstacle") {return Category::kObstacle;}
  if (text == "undefined") {return Category::kUndefined;}
  throw Error(ErrorCode::kParse, "unknown category '" + std::string(text) + "'");
}

ClassSchema::ClassSchema(std::vector<ClassDef> classes)
: classes_(std::move(classes))
{
  if (classes_.size() < 2) {
    throw Error(ErrorCode::kValidation, "schema needs at least 2 classes");
  }
  if (classes_.size() > 256) {
    throw Error(ErrorCode::kValidation, "schema has more than 256 classes");
  }
  std::sort(
    classes_.begin(), classes_.end(),
    [](const ClassDef & a, const ClassDef & b) {return a.id < b.id;});
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto & c = classes_[i];
    if (i > 0 && classes_[i - 1].id == c.id) {
      throw Error(ErrorCode::kValidation, "duplicate class id " + std::to_string(c.id));
    }
    if (c.id != static_cast<int>(i)) {
      throw Error(
        ErrorCode::kValidation,
        "class ids must be contiguous from 0; missing id " + std::to_string(i));
    }
    if (c.is_void && c.category != Category::kUndefined) {
      throw Error(
        ErrorCode::kValidation, "void class '" + c.name + "' must have category undefined");
    }
  }
  if (!first_of(Category::kTraversable)) {
    throw Error(ErrorCode::kValidation, "schema has no traversable class");
  }
  if (!first_of(Category::kObstacle)) {
    throw Error(ErrorCode::kValidation, "schema has no obstacle class");
  }
}

std::optional<ClassId> ClassSchema::first_of(Category c) const
{
  for (const auto & def : classes_) {
    if (def.category == c) {
      return static_cast<ClassId>(def.id);
    }
  }
  return std::nullopt;
}

ClassId ClassSchema::unknown_fill() const
{
  for (const auto & def : classes_) {
    if (def.is_void) {
      return static_cast<ClassId>(def.id);
    }
  }
  if (auto u = first_of(Category::kUndefined)) {
    return *u;
  }
  return *first_of(Category::kObstacle);
}

ClassSchema default_schema()
{
  using C = Category;
  return ClassSchema({
      {0, "road", C::kTraversable, false, {84, 0, 84}},
      {1, "crack", C::kObstacle, false, {255, 140, 0}},
      {2, "puddle", C::kObstacle, false, {0, 200, 255}},
      {3, "vehicle", C::kObstacle, false, {0, 0, 230}},
      {4, "human", C::kObstacle, false, {220, 20, 60}},
      {5, "building", C::kObstacle, false, {70, 70, 70}},
      {6, "vegetation", C::kObstacle, false, {107, 142, 35}},
      {7, "debris", C::kObstacle, false, {200, 160, 255}},
      {8, "sky", C::kUndefined, true, {70, 130, 180}},
    });
}

ClassSchema parse_schema(std::string_view json_text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("schema: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array()) {
    throw Error(ErrorCode::kParse, "schema: expected an object with a 'classes' array");
  }
  std::vector<ClassDef> defs;
  try {
    for (const auto & entry : doc["classes"]) {
      ClassDef def;
      def.id = entry.at("id").get<int>();
      def.name = entry.at("name").get<std::string>();
      def.category = parse_category(entry.at("category").get<std::string>());
      def.is_void = entry.value("void", false);
      if (entry.contains("color")) {
        const auto rgb = entry["color"].get<std::vector<int>>();
        if (rgb.size() != 3) {
          throw Error(ErrorCode::kParse, "schema: color must be an [r,g,b] triple");
        }
        auto channel = [](int v) {
            if (v < 0 || v > 255) {
              throw Error(ErrorCode::kParse, "schema: color channel out of range");
            }
            return static_cast<std::uint8_t>(v);
          };
        def.color = {channel(rgb[0]), channel(rgb[1]), channel(rgb[2])};
      }
      defs.push_back(std::move(def));
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("schema: ") + e.what());
  }
  return ClassSchema(std::move(defs));
}

ClassSchema load_schema(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open schema file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str());
}

std::string schema_to_json(const ClassSchema & schema)
{
  nlohmann::json classes = nlohmann::json::array();
  for (const auto & c : schema.classes()) {
    classes.push_back(
      {{"id", c.id}, {"name", c.name}, {"category", std::string(to_string(c.category))},
        {"void", c.is_void}, {"color", {c.color.r, c.color.g, c.color.b}}});
  }
  return nlohmann::json{{"classes", classes}}.dump(2);
}

void validate_labels(const LabelMask & mask, const ClassSchema & schema)
{
  const int k = schema.size();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] >= k) {
      throw Error(
        ErrorCode::kValidation,
        "label out of range: " + std::to_string(mask[i]) + " at pixel " + std::to_string(i) +
        " (schema has " + std::to_string(k) + " classes)");
    }
  }
}

LabelMask load_mask(const std::filesystem::path & path, const ClassSchema & schema)
{
  LabelMask mask = read_label_image(path);
  validate_labels(mask, schema);
  return mask;
}

CategoryMask to_category_mask(const LabelMask & mask, const ClassSchema & schema)
{
  std::vector<Category> lut(256, Category::kUndefined);
  for (const auto & c : schema.classes()) {
    lut[static_cast<std::size_t>(c.id)] = c.category;
  }
  std::vector<Category> cells(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    cells[i] = lut[mask[i]];
  }
  return CategoryMask(mask.width(), mask.height(), std::move(cells));
}

CategoryCounts count_categories(const CategoryMask & cat)
{
  CategoryCounts counts;
  for (const auto c : cat.data()) {
    switch (c) {
      case Category::kTraversable: ++counts.traversable; break;
      case Category::kObstacle: ++counts.obstacle; break;
      case Category::kUndefined: ++counts.undefined; break;
    }
  }
  return counts;
}

}  // namespace rubblenav
