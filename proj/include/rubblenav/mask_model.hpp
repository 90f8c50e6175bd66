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

#ifndef RUBBLENAV__MASK_MODEL_HPP_
#define RUBBLENAV__MASK_MODEL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rubblenav/common.hpp"

namespace rubblenav
{

using ClassId = std::uint8_t;

enum class Category : std::uint8_t
{
  kTraversable = 0,
  kObstacle = 1,
  kUndefined = 2,
};

std::string_view to_string(Category c);
Category parse_category(std::string_view text);

struct Rgb
{
  std::uint8_t r{0};
  std::uint8_t g{0};
  std::uint8_t b{0};

  friend bool operator==(const Rgb &, const Rgb &) = default;
};

struct ClassDef
{
  int id{0};
  std::string name;
  Category category{Category::kUndefined};
  bool is_void{false};
  Rgb color;
};

/// Class table. Ids are contiguous from 0; at least one Traversable and one
/// Obstacle class; void classes are Undefined. Immutable once built.
class ClassSchema
{
public:
  /// Validates and sorts by id. Throws Error(kValidation) on any violation.
  explicit ClassSchema(std::vector<ClassDef> classes);

  int size() const noexcept {return static_cast<int>(classes_.size());}
  const ClassDef & operator[](int id) const {return classes_.at(static_cast<std::size_t>(id));}
  const std::vector<ClassDef> & classes() const noexcept {return classes_;}

  Category category(int id) const {return (*this)[id].category;}
  bool is_void(int id) const {return (*this)[id].is_void;}

  /// Label used for out-of-view cells: the first void class, else the first
  /// Undefined class, else the first Obstacle class. Never Traversable.
  ClassId unknown_fill() const;

  /// Lowest-id class of the given category, if any.
  std::optional<ClassId> first_of(Category c) const;

private:
  std::vector<ClassDef> classes_;
};

/// Nine-class earthquake-zone table: road is traversable, sky is void.
ClassSchema default_schema();

ClassSchema parse_schema(std::string_view json_text);
ClassSchema load_schema(const std::filesystem::path & path);
std::string schema_to_json(const ClassSchema & schema);

using LabelMask = Grid<ClassId>;
using CategoryMask = Grid<Category>;

/// Throws Error(kValidation, "label out of range ...") on the first label >= K.
void validate_labels(const LabelMask & mask, const ClassSchema & schema);

/// Reads binary PGM (P5) or 8-bit grayscale PNG; format chosen by magic bytes.
LabelMask read_label_image(const std::filesystem::path & path);

LabelMask load_mask(const std::filesystem::path & path, const ClassSchema & schema);

/// Writes PNG when the extension is ".png", binary PGM otherwise.
void save_mask(const std::filesystem::path & path, const LabelMask & mask);

CategoryMask to_category_mask(const LabelMask & mask, const ClassSchema & schema);

struct CategoryCounts
{
  std::size_t traversable{0};
  std::size_t obstacle{0};
  std::size_t undefined{0};
};

CategoryCounts count_categories(const CategoryMask & cat);

inline bool is_traversable(const CategoryMask & cat, Cell c)
{
  return cat.in_bounds(c) && cat.at(c) == Category::kTraversable;
}

}  // namespace rubblenav

#endif  // RUBBLENAV__MASK_MODEL_HPP_
