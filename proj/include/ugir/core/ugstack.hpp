#pragma once

// UGSTACK container: `<name>.json` header plus `<name>.raw` payload,
// little-endian, C order, outer dim first.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ugir/core/volume.hpp"

namespace ugir {

class IoError : public Error {
 public:
  using Error::Error;
};

enum class ArrayKind { stack, probgroup, mask, uncertainty };
enum class DType { f32, u8 };

std::string to_string(ArrayKind k);
std::string to_string(DType d);

inline constexpr const char* kUgstackMagic = "UGSTACK1";

struct UgstackHeader {
  ArrayKind kind = ArrayKind::stack;
  std::vector<int> dims;  // outer to inner
  DType dtype = DType::f32;
  std::vector<double> spacing;  // [slice, row, col] mm
  nlohmann::json extra = nlohmann::json::object();  // free-form annotations

  std::size_t element_count() const;
  std::size_t payload_bytes() const;

  nlohmann::json to_json() const;
  static UgstackHeader from_json(const nlohmann::json& j);
};

/// Header plus undecoded payload bytes.
struct RawArray {
  UgstackHeader header;
  std::string bytes;

  /// Throws IoError("payload size mismatch") when bytes disagree with the header.
  void check_size() const;
};

struct UgstackPaths {
  std::filesystem::path header;
  std::filesystem::path payload;

  /// Accepts `name`, `name.json` or `name.raw`.
  static UgstackPaths from(const std::filesystem::path& p);
};

RawArray read_raw(const std::filesystem::path& path);
void write_raw(const RawArray& array, const std::filesystem::path& path);

// Typed conversions. Decoders validate kind, dtype, rank and finiteness.
RawArray encode(const Stack& stack);
RawArray encode(const ProbabilityGroup& group, const Spacing& spacing);
RawArray encode(const BinaryMask& mask, const Spacing& spacing);
RawArray encode_uncertainty(const Volume<double>& map, const Spacing& spacing);

Stack decode_stack(const RawArray& a);
ProbabilityGroup decode_probability_group(const RawArray& a);
BinaryMask decode_mask(const RawArray& a);
Volume<double> decode_uncertainty(const RawArray& a);
Spacing decode_spacing(const UgstackHeader& h);

Stack read_stack(const std::filesystem::path& path);
ProbabilityGroup read_probability_group(const std::filesystem::path& path);
BinaryMask read_mask(const std::filesystem::path& path);
Volume<double> read_uncertainty(const std::filesystem::path& path);

void write_stack(const Stack& stack, const std::filesystem::path& path);
void write_probability_group(const ProbabilityGroup& group, const Spacing& spacing, const std::filesystem::path& path);
void write_mask(const BinaryMask& mask, const Spacing& spacing, const std::filesystem::path& path);
void write_uncertainty(const Volume<double>& map, const Spacing& spacing, const std::filesystem::path& path);

// Little-endian scalar packing, shared with the HTTP payload codec.
void append_f32_le(std::string& out, std::span<const float> values);
std::vector<float> parse_f32_le(std::string_view bytes);

}  // namespace ugir
