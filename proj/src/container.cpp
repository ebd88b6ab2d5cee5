#include "ifvc/container.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <zlib.h>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

// Upper bound on the binarized size of one frame: 14 codewords of at most
// 65 bits each (|symbol| <= 2^31 - 1).
constexpr std::uint32_t kMaxFrameBits = 14 * 65;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      u8(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    u8(static_cast<std::uint8_t>(v));
  }
  void raw(std::span<const std::uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }
  void tag(const std::array<char, 4>& t) {
    for (const char c : t) u8(static_cast<std::uint8_t>(c));
  }
  void coeffs(const std::vector<double>& values) {
    if (values.size() > 0xFFFF) throw ContainerError("coefficient vector too long for the container");
    u16(static_cast<std::uint16_t>(values.size()));
    for (const double v : values) f64(v);
  }

  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char* what) {
    const double v = std::bit_cast<double>(u64());
    if (!std::isfinite(v)) throw ContainerError(std::string(what) + " is not finite");
    return v;
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (unsigned shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = u8();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) {
        if (b == 0 && shift != 0) throw ContainerError("non-minimal varint");
        return v;
      }
    }
    throw ContainerError("varint too long");
  }
  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::array<char, 4> tag() {
    std::array<char, 4> t{};
    for (auto& c : t) c = static_cast<char>(u8());
    return t;
  }
  std::vector<double> coeffs(const char* what) {
    const std::size_t n = u16();
    if (n * 8 > remaining()) throw ContainerError("truncated stream");
    std::vector<double> out(n);
    for (auto& v : out) v = f64(what);
    return out;
  }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw ContainerError("truncated stream");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks to stay portable.
  constexpr std::size_t kChunk = 1U << 30;
  for (std::size_t off = 0; off < data.size(); off += kChunk) {
    const auto n = std::min(kChunk, data.size() - off);
    crc = crc32(crc, data.data() + off, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

std::size_t varint_size(std::uint64_t v) {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

}  // namespace

std::uint16_t encode_fps(double fps) {
  const double scaled = std::round(fps * 256.0);
  if (!std::isfinite(fps) || scaled < 1.0 || scaled > 65535.0) {
    throw ValidationError("fps " + std::to_string(fps) + " is not representable as 8.8 fixed point",
                          std::nullopt, "fps");
  }
  return static_cast<std::uint16_t>(scaled);
}

std::size_t frame_record_size(const FramePayload& frame) {
  return varint_size(frame.bit_length) + varint_size(frame.bytes.size()) + frame.bytes.size();
}

std::vector<std::uint8_t> serialize(const CodedStream& stream) {
  const auto& h = stream.header;
  if (h.frame_count != stream.frames.size()) {
    throw ContainerError("header frame_count does not match the number of frame payloads");
  }
  if (h.model_id.size() > 0xFFFF) throw ContainerError("model_id too long");

  ByteWriter w;
  w.tag(kStreamMagic);
  w.u16(h.version);
  w.u16(h.fps_q8);
  w.u32(h.frame_count);
  w.u16(h.width);
  w.u16(h.height);
  for (const double step : h.quant.steps) w.f64(step);
  w.u16(static_cast<std::uint16_t>(h.model_id.size()));
  for (const char c : h.model_id) w.u8(static_cast<std::uint8_t>(c));

  w.tag(stream.key.fourcc);
  if (stream.key.data.size() > 0xFFFFFFFFULL) throw ContainerError("key payload too large");
  w.u32(static_cast<std::uint32_t>(stream.key.data.size()));
  w.raw(stream.key.data);

  const auto& ks = stream.key_semantics;
  w.coeffs(ks.id_coeffs);
  w.coeffs(ks.alb_coeffs);
  w.coeffs(ks.illum_coeffs);
  w.coeffs(ks.exp_coeffs);
  for (const double v : flatten(ks.pose)) w.f64(v);

  for (const auto& frame : stream.frames) {
    w.varint(frame.bit_length);
    w.varint(frame.bytes.size());
    w.raw(frame.bytes);
  }
  w.u32(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

CodedStream parse_stream(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw ContainerError("truncated stream");
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.last(4));
  const std::uint32_t stored_crc = tail.u32();

  ByteReader r(body);
  if (r.tag() != kStreamMagic) throw ContainerError("bad magic (not an .ifvc stream)");
  if (stored_crc != crc32_of(body)) throw ContainerError("checksum mismatch (corrupted stream)");

  CodedStream s;
  auto& h = s.header;
  h.version = r.u16();
  if (h.version != kStreamVersion) {
    throw ContainerError("unsupported stream version " + std::to_string(h.version));
  }
  h.fps_q8 = r.u16();
  if (h.fps_q8 == 0) throw ContainerError("fps is zero");
  h.frame_count = r.u32();
  h.width = r.u16();
  h.height = r.u16();
  for (auto& step : h.quant.steps) {
    step = r.f64("quantization step");
    if (!(step > 0.0)) throw ContainerError("non-positive quantization step");
  }
  const std::size_t id_len = r.u16();
  const auto id_bytes = r.raw(id_len);
  h.model_id.assign(id_bytes.begin(), id_bytes.end());

  s.key.fourcc = r.tag();
  const std::size_t key_len = r.u32();
  const auto key_bytes = r.raw(key_len);
  s.key.data.assign(key_bytes.begin(), key_bytes.end());

  auto& ks = s.key_semantics;
  ks.id_coeffs = r.coeffs("key id coefficient");
  ks.alb_coeffs = r.coeffs("key albedo coefficient");
  ks.illum_coeffs = r.coeffs("key illumination coefficient");
  ks.exp_coeffs = r.coeffs("key expression coefficient");
  SemanticArray pose{};
  for (auto& v : pose) v = r.f64("key pose");
  ks.pose = unflatten(pose);
  try {
    validate(ks);
  } catch (const ValidationError& e) {
    throw ContainerError(std::string("invalid key semantics: ") + e.what());
  }

  // Each frame record takes at least two bytes.
  if (h.frame_count > r.remaining() / 2) throw ContainerError("frame_count exceeds stream size");
  s.frames.reserve(h.frame_count);
  for (std::uint32_t i = 0; i < h.frame_count; ++i) {
    FramePayload frame;
    const auto bit_length = r.varint();
    if (bit_length > kMaxFrameBits) {
      throw ContainerError("frame " + std::to_string(i) + ": implausible bit length");
    }
    frame.bit_length = static_cast<std::uint32_t>(bit_length);
    const auto n = r.varint();
    if (n > r.remaining()) throw ContainerError("truncated stream");
    const auto payload = r.raw(static_cast<std::size_t>(n));
    frame.bytes.assign(payload.begin(), payload.end());
    s.frames.push_back(std::move(frame));
  }
  if (r.remaining() != 0) throw ContainerError("trailing bytes after the last frame");
  return s;
}

}  // namespace ifvc
