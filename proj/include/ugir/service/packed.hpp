#pragma once

// Wire format for array payloads over HTTP: "UGPACK01", a little-endian u32
// header length, a JSON header listing UGSTACK array headers with byte
// offsets, then the raw UGSTACK payloads back to back.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ugir/core/ugstack.hpp"

namespace ugir::service {

inline constexpr const char* kPackedContentType = "application/x-ugstack-packed";
inline constexpr std::string_view kPackedMagic = "UGPACK01";

struct NamedArray {
  std::string name;
  RawArray array;
};

struct PackedMessage {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedArray> arrays;

  const RawArray& at(const std::string& name) const;
  bool contains(const std::string& name) const;
};

std::string encode_packed(const PackedMessage& message);
/// Throws IoError on truncated or malformed bodies.
PackedMessage decode_packed(std::string_view body);

}  // namespace ugir::service
