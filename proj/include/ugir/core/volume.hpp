#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ugir {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dims, invalid values, violated preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Row-major 2D grid. Index (row, col).
template <class T>
class Image {
 public:
  Image() = default;
  Image(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols), fill) {}
  Image(int rows, int cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != checked_size(rows, cols)) throw InvalidInput("image payload does not match dims");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }
  bool contains(int r, int c) const { return r >= 0 && c >= 0 && r < rows_ && c < cols_; }
  bool same_shape(const auto& other) const { return rows_ == other.rows() && cols_ == other.cols(); }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  static std::size_t checked_size(int rows, int cols) {
    if (rows < 0 || cols < 0) throw InvalidInput("negative image dims");
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using ImageD = Image<double>;
using MaskImage = Image<std::uint8_t>;

struct Shape3 {
  int slices = 0;
  int rows = 0;
  int cols = 0;

  std::size_t slice_size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  std::size_t total() const { return slice_size() * static_cast<std::size_t>(slices); }
  bool operator==(const Shape3&) const = default;
};

std::string to_string(const Shape3& s);

/// Dense [slice, row, col] array, slices contiguous.
template <class T>
class Volume {
 public:
  Volume() = default;
  explicit Volume(Shape3 shape, T fill = T{}) : shape_(shape), data_(checked_total(shape), fill) {}
  Volume(Shape3 shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != checked_total(shape)) throw InvalidInput("volume payload does not match dims");
  }

  const Shape3& shape() const { return shape_; }
  int slices() const { return shape_.slices; }
  int rows() const { return shape_.rows; }
  int cols() const { return shape_.cols; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int k, int r, int c) { return data_[index(k, r, c)]; }
  const T& operator()(int k, int r, int c) const { return data_[index(k, r, c)]; }

  std::size_t index(int k, int r, int c) const {
    return static_cast<std::size_t>(k) * shape_.slice_size() +
           static_cast<std::size_t>(r) * static_cast<std::size_t>(shape_.cols) + static_cast<std::size_t>(c);
  }

  std::span<T> slice_values(int k) { return {data_.data() + offset(k), shape_.slice_size()}; }
  std::span<const T> slice_values(int k) const { return {data_.data() + offset(k), shape_.slice_size()}; }

  /// Copy of slice k converted to U.
  template <class U = T>
  Image<U> slice(int k) const {
    auto src = slice_values(k);
    std::vector<U> out(src.begin(), src.end());
    return Image<U>(shape_.rows, shape_.cols, std::move(out));
  }

  template <class U>
  void set_slice(int k, const Image<U>& img) {
    if (img.rows() != shape_.rows || img.cols() != shape_.cols) throw InvalidInput("slice dims mismatch");
    auto dst = slice_values(k);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(img[i]);
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  bool operator==(const Volume&) const = default;

 private:
  std::size_t offset(int k) const {
    if (k < 0 || k >= shape_.slices) throw InvalidInput("slice index " + std::to_string(k) + " out of range");
    return static_cast<std::size_t>(k) * shape_.slice_size();
  }
  static std::size_t checked_total(const Shape3& s) {
    if (s.slices < 0 || s.rows < 0 || s.cols < 0) throw InvalidInput("negative volume dims");
    return s.total();
  }

  Shape3 shape_;
  std::vector<T> data_;
};

using BinaryMask = Volume<std::uint8_t>;

/// Physical spacing in millimetres.
struct Spacing {
  double slice_mm = 1.0;
  double row_mm = 1.0;
  double col_mm = 1.0;
  bool operator==(const Spacing&) const = default;
};

/// A stack of 2D slices, the unit of one refinement session.
struct Stack {
  Volume<float> data;
  Spacing spacing;

  const Shape3& shape() const { return data.shape(); }
  int num_slices() const { return data.slices(); }

  /// Throws unless M >= 1, H, W >= 1 and every intensity is finite.
  void validate() const;
};

/// N per-pixel foreground probability maps over the same stack grid.
class ProbabilityGroup {
 public:
  ProbabilityGroup() = default;
  explicit ProbabilityGroup(std::vector<Volume<float>> members);

  int size() const { return static_cast<int>(members_.size()); }
  const Shape3& shape() const { return shape_; }
  const Volume<float>& member(int n) const { return members_.at(static_cast<std::size_t>(n)); }
  const std::vector<Volume<float>>& members() const { return members_; }

  /// Throws unless N >= 1, dims agree and every value is in [0, 1].
  void validate() const;

 private:
  Shape3 shape_;
  std::vector<Volume<float>> members_;
};

/// Min-max normalization of one slice to [0, 1]; a constant slice maps to 0.
ImageD normalized_slice(const Stack& stack, int k);

}  // namespace ugir
