#include "ugir/service/packed.hpp"

#include <cstdint>

namespace ugir::service {

const RawArray& PackedMessage::at(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return a.array;
  throw IoError("packed message has no array '" + name + "'");
}

bool PackedMessage::contains(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return true;
  return false;
}

std::string encode_packed(const PackedMessage& message) {
  auto index = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& a : message.arrays) {
    a.array.check_size();
    index.push_back({{"name", a.name}, {"header", a.array.header.to_json()}, {"offset", offset},
                     {"bytes", a.array.bytes.size()}});
    offset += a.array.bytes.size();
  }
  const std::string header = nlohmann::json{{"meta", message.meta}, {"arrays", index}}.dump();
  std::string out(kPackedMagic);
  const auto len = static_cast<std::uint32_t>(header.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((len >> (8 * i)) & 0xFFu));
  out += header;
  out.reserve(out.size() + offset);
  for (const auto& a : message.arrays) out += a.array.bytes;
  return out;
}

PackedMessage decode_packed(std::string_view body) {
  if (body.size() < kPackedMagic.size() + 4 || body.substr(0, kPackedMagic.size()) != kPackedMagic)
    throw IoError("not a UGPACK01 body");
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i)
    len |= static_cast<std::uint32_t>(static_cast<unsigned char>(body[kPackedMagic.size() + static_cast<std::size_t>(i)]))
           << (8 * i);
  const std::size_t start = kPackedMagic.size() + 4;
  if (body.size() < start + len) throw IoError("truncated packed header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(body.substr(start, len));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("packed header is not JSON: ") + e.what());
  }
  const std::string_view payload = body.substr(start + len);
  PackedMessage out;
  try {
    out.meta = header.value("meta", nlohmann::json::object());
    for (const auto& a : header.at("arrays")) {
      const auto offset = a.at("offset").get<std::size_t>();
      const auto bytes = a.at("bytes").get<std::size_t>();
      if (offset > payload.size() || bytes > payload.size() - offset) throw IoError("packed array out of range");
      NamedArray na{a.at("name").get<std::string>(),
                    RawArray{UgstackHeader::from_json(a.at("header")), std::string(payload.substr(offset, bytes))}};
      na.array.check_size();
      out.arrays.push_back(std::move(na));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed packed header: ") + e.what());
  }
  return out;
}

}  // namespace ugir::service
