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

#ifndef RUBBLENAV__COMMON_HPP_
#define RUBBLENAV__COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rubblenav
{

enum class ErrorCode
{
  kParse,
  kValidation,
  kIo,
  kSingularSystem,
  kNoDestination,
  kNoPath,
  kInvalidArgument,
};

/// Single exception type for the library; `code()` lets front ends map
/// failures to exit statuses without string matching.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & what)
  : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept {return code_;}

private:
  ErrorCode code_;
};

/// Integer grid coordinate; x is the column, y the row (row 0 is the top).
struct Cell
{
  int x{0};
  int y{0};

  friend bool operator==(const Cell &, const Cell &) = default;
};

/// Continuous point in mask coordinates. Cell (c, r) has its center at (c, r).
struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline Point2 operator+(Point2 a, Point2 b) {return {a.x + b.x, a.y + b.y};}
inline Point2 operator-(Point2 a, Point2 b) {return {a.x - b.x, a.y - b.y};}
inline Point2 operator*(double s, Point2 p) {return {s * p.x, s * p.y};}

inline double norm(Point2 p) {return std::hypot(p.x, p.y);}

inline Point2 to_point(Cell c) {return {static_cast<double>(c.x), static_cast<double>(c.y)};}

/// Round half up. Used everywhere a continuous coordinate selects a cell so
/// that every module agrees on which cell a point falls in.
inline int round_to_cell(double v) {return static_cast<int>(std::floor(v + 0.5));}

inline Cell to_cell(Point2 p) {return {round_to_cell(p.x), round_to_cell(p.y)};}

/// Row-major 2-D raster.
template<typename T>
class Grid
{
public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
  : width_(width), height_(height)
  {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> data)
  : width_(width), height_(height), data_(std::move(data))
  {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::kInvalidArgument, "grid data size does not match dimensions");
    }
  }

  int width() const noexcept {return width_;}
  int height() const noexcept {return height_;}
  std::size_t size() const noexcept {return data_.size();}

  bool in_bounds(int x, int y) const noexcept
  {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool in_bounds(Cell c) const noexcept {return in_bounds(c.x, c.y);}

  std::size_t index(int x, int y) const noexcept
  {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  T & at(int x, int y) {return data_[index(x, y)];}
  const T & at(int x, int y) const {return data_[index(x, y)];}
  T & at(Cell c) {return at(c.x, c.y);}
  const T & at(Cell c) const {return at(c.x, c.y);}

  T & operator[](std::size_t i) {return data_[i];}
  const T & operator[](std::size_t i) const {return data_[i];}

  const std::vector<T> & data() const noexcept {return data_;}
  std::vector<T> & data() noexcept {return data_;}

  friend bool operator==(const Grid &, const Grid &) = default;

private:
  int width_{0};
  int height_{0};
  std::vector<T> data_;
};

}  // namespace rubblenav

#endif  // RUBBLENAV__COMMON_HPP_
