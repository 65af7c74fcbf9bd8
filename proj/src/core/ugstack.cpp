#include "ugir/core/ugstack.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ugir {
namespace {

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v & 0xFF0000u) >> 8) | ((v & 0xFF000000u) >> 24);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

Shape3 shape_from_dims(const std::vector<int>& dims, std::size_t offset) {
  return Shape3{dims.at(offset), dims.at(offset + 1), dims.at(offset + 2)};
}

void require(const RawArray& a, ArrayKind kind, DType dtype, std::size_t rank) {
  if (a.header.kind != kind)
    throw IoError("expected a '" + to_string(kind) + "' container, got '" + to_string(a.header.kind) + "'");
  if (a.header.dtype != dtype) throw IoError("expected dtype " + to_string(dtype));
  if (a.header.dims.size() != rank) throw IoError("expected " + std::to_string(rank) + " dims");
  a.check_size();
}

std::vector<double> spacing_vec(const Spacing& s) { return {s.slice_mm, s.row_mm, s.col_mm}; }

std::vector<float> finite_floats(const RawArray& a) {
  auto v = parse_f32_le(a.bytes);
  for (float x : v) {
    if (!std::isfinite(x)) throw IoError("payload contains non-finite values");
  }
  return v;
}

}  // namespace

std::string to_string(ArrayKind k) {
  switch (k) {
    case ArrayKind::stack: return "stack";
    case ArrayKind::probgroup: return "probgroup";
    case ArrayKind::mask: return "mask";
    case ArrayKind::uncertainty: return "uncertainty";
  }
  return "?";
}

std::string to_string(DType d) { return d == DType::f32 ? "f32" : "u8"; }

std::size_t UgstackHeader::element_count() const {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

std::size_t UgstackHeader::payload_bytes() const { return element_count() * (dtype == DType::f32 ? 4 : 1); }

nlohmann::json UgstackHeader::to_json() const {
  nlohmann::json j{{"magic", kUgstackMagic},
                   {"kind", to_string(kind)},
                   {"dims", dims},
                   {"dtype", to_string(dtype)},
                   {"spacing", spacing}};
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

UgstackHeader UgstackHeader::from_json(const nlohmann::json& j) {
  try {
    if (j.at("magic").get<std::string>() != kUgstackMagic) throw IoError("bad UGSTACK magic");
    UgstackHeader h;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "stack") h.kind = ArrayKind::stack;
    else if (kind == "probgroup") h.kind = ArrayKind::probgroup;
    else if (kind == "mask") h.kind = ArrayKind::mask;
    else if (kind == "uncertainty") h.kind = ArrayKind::uncertainty;
    else throw IoError("unknown UGSTACK kind '" + kind + "'");
    const auto dtype = j.at("dtype").get<std::string>();
    if (dtype == "f32") h.dtype = DType::f32;
    else if (dtype == "u8") h.dtype = DType::u8;
    else throw IoError("unknown UGSTACK dtype '" + dtype + "'");
    h.dims = j.at("dims").get<std::vector<int>>();
    for (int d : h.dims) {
      if (d < 1) throw IoError("UGSTACK dims must be positive");
    }
    if (j.contains("spacing")) h.spacing = j.at("spacing").get<std::vector<double>>();
    if (j.contains("extra")) h.extra = j.at("extra");
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed UGSTACK header: ") + e.what());
  }
}

void RawArray::check_size() const {
  if (bytes.size() != header.payload_bytes()) {
    throw IoError("payload size mismatch: header implies " + std::to_string(header.payload_bytes()) +
                  " bytes, found " + std::to_string(bytes.size()));
  }
}

UgstackPaths UgstackPaths::from(const std::filesystem::path& p) {
  auto base = p;
  if (base.extension() == ".json" || base.extension() == ".raw") base.replace_extension();
  auto header = base;
  auto payload = base;
  header += ".json";
  payload += ".raw";
  return {header, payload};
}

RawArray read_raw(const std::filesystem::path& path) {
  const auto paths = UgstackPaths::from(path);
  if (!std::filesystem::exists(paths.header)) throw IoError("missing file '" + paths.header.string() + "'");
  if (!std::filesystem::exists(paths.payload)) throw IoError("missing file '" + paths.payload.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(paths.header));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("header is not valid JSON: " + std::string(e.what()));
  }
  RawArray a{UgstackHeader::from_json(j), read_file(paths.payload)};
  a.check_size();
  return a;
}

void write_raw(const RawArray& array, const std::filesystem::path& path) {
  array.check_size();
  const auto paths = UgstackPaths::from(path);
  if (paths.header.has_parent_path()) std::filesystem::create_directories(paths.header.parent_path());
  write_file(paths.header, array.header.to_json().dump(2) + "\n");
  write_file(paths.payload, array.bytes);
}

void append_f32_le(std::string& out, std::span<const float> values) {
  const std::size_t start = out.size();
  out.resize(start + values.size() * 4);
  char* dst = out.data() + start;
  for (float v : values) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = byteswap32(bits);
    std::memcpy(dst, &bits, 4);
    dst += 4;
  }
}

std::vector<float> parse_f32_le(std::string_view bytes) {
  if (bytes.size() % 4 != 0) throw IoError("f32 payload length not a multiple of 4");
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) bits = byteswap32(bits);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

RawArray encode(const Stack& stack) {
  stack.validate();
  const auto& s = stack.shape();
  RawArray a;
  a.header = {ArrayKind::stack, {s.slices, s.rows, s.cols}, DType::f32, spacing_vec(stack.spacing), {}};
  append_f32_le(a.bytes, stack.data.values());
  return a;
}

RawArray encode(const ProbabilityGroup& group, const Spacing& spacing) {
  group.validate();
  const auto& s = group.shape();
  RawArray a;
  a.header = {ArrayKind::probgroup, {group.size(), s.slices, s.rows, s.cols}, DType::f32, spacing_vec(spacing), {}};
  for (const auto& m : group.members()) append_f32_le(a.bytes, m.values());
  return a;
}

RawArray encode(const BinaryMask& mask, const Spacing& spacing) {
  const auto& s = mask.shape();
  RawArray a;
  a.header = {ArrayKind::mask, {s.slices, s.rows, s.cols}, DType::u8, spacing_vec(spacing), {}};
  a.bytes.reserve(mask.size());
  for (auto v : mask.values()) {
    if (v > 1) throw InvalidInput("mask values must be 0 or 1");
    a.bytes.push_back(static_cast<char>(v));
  }
  return a;
}

RawArray encode_uncertainty(const Volume<double>& map, const Spacing& spacing) {
  const auto& s = map.shape();
  RawArray a;
  a.header = {ArrayKind::uncertainty, {s.slices, s.rows, s.cols}, DType::f32, spacing_vec(spacing), {}};
  std::vector<float> f(map.values().begin(), map.values().end());
  for (float v : f) {
    if (!std::isfinite(v)) throw InvalidInput("uncertainty map contains non-finite values");
  }
  append_f32_le(a.bytes, f);
  return a;
}

Spacing decode_spacing(const UgstackHeader& h) {
  if (h.spacing.empty()) return {};
  if (h.spacing.size() != 3) throw IoError("spacing must list [slice, row, col] mm");
  for (double v : h.spacing) {
    if (!(v > 0) || !std::isfinite(v)) throw IoError("spacing must be positive");
  }
  return {h.spacing[0], h.spacing[1], h.spacing[2]};
}

Stack decode_stack(const RawArray& a) {
  require(a, ArrayKind::stack, DType::f32, 3);
  Stack s{Volume<float>(shape_from_dims(a.header.dims, 0), finite_floats(a)), decode_spacing(a.header)};
  s.validate();
  return s;
}

ProbabilityGroup decode_probability_group(const RawArray& a) {
  require(a, ArrayKind::probgroup, DType::f32, 4);
  const Shape3 shape = shape_from_dims(a.header.dims, 1);
  auto all = finite_floats(a);
  std::vector<Volume<float>> members;
  const auto per = shape.total();
  for (int n = 0; n < a.header.dims[0]; ++n) {
    auto first = all.begin() + static_cast<std::ptrdiff_t>(per * static_cast<std::size_t>(n));
    members.emplace_back(shape, std::vector<float>(first, first + static_cast<std::ptrdiff_t>(per)));
  }
  return ProbabilityGroup(std::move(members));
}

BinaryMask decode_mask(const RawArray& a) {
  require(a, ArrayKind::mask, DType::u8, 3);
  std::vector<std::uint8_t> v(a.bytes.begin(), a.bytes.end());
  for (auto x : v) {
    if (x > 1) throw IoError("mask payload must hold only 0 or 1");
  }
  return BinaryMask(shape_from_dims(a.header.dims, 0), std::move(v));
}

Volume<double> decode_uncertainty(const RawArray& a) {
  require(a, ArrayKind::uncertainty, DType::f32, 3);
  auto f = finite_floats(a);
  return Volume<double>(shape_from_dims(a.header.dims, 0), std::vector<double>(f.begin(), f.end()));
}

Stack read_stack(const std::filesystem::path& path) { return decode_stack(read_raw(path)); }
ProbabilityGroup read_probability_group(const std::filesystem::path& path) {
  return decode_probability_group(read_raw(path));
}
BinaryMask read_mask(const std::filesystem::path& path) { return decode_mask(read_raw(path)); }
Volume<double> read_uncertainty(const std::filesystem::path& path) { return decode_uncertainty(read_raw(path)); }

void write_stack(const Stack& stack, const std::filesystem::path& path) { write_raw(encode(stack), path); }
void write_probability_group(const ProbabilityGroup& group, const Spacing& spacing, const std::filesystem::path& path) {
  write_raw(encode(group, spacing), path);
}
void write_mask(const BinaryMask& mask, const Spacing& spacing, const std::filesystem::path& path) {
  write_raw(encode(mask, spacing), path);
}
void write_uncertainty(const Volume<double>& map, const Spacing& spacing, const std::filesystem::path& path) {
  write_raw(encode_uncertainty(map, spacing), path);
}

}  // namespace ugir
