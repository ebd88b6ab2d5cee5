#include "ifvc/stream_codec.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ifvc/errors.hpp"
#include "ifvc/exp_golomb.hpp"

namespace ifvc {

namespace {

constexpr std::uint64_t kMaxZigzag = 0xFFFFFFFEULL;  // zigzag(-(2^31 - 1))

std::size_t key_semantics_size(const KeyFrameSemantics& ks) {
  const std::size_t coeffs =
      ks.id_coeffs.size() + ks.alb_coeffs.size() + ks.illum_coeffs.size() + ks.exp_coeffs.size();
  return 4 * 2 + coeffs * 8 + kSemanticDim * 8;
}

}  // namespace

BitString binarize(const SymbolBlock& block) {
  BitString bits;
  for (const auto s : block.symbols) {
    if (s == INT32_MIN) throw OverflowError("symbol magnitude exceeds 2^31-1");
    eg0_encode(zigzag(s), bits);
  }
  return bits;
}

SymbolBlock debinarize(const BitString& bits) {
  BitReader reader(bits);
  SymbolBlock block;
  for (auto& s : block.symbols) {
    const std::uint64_t u = eg0_decode(reader);
    if (u > kMaxZigzag) throw DecodeError("decoded symbol out of range");
    s = unzigzag(static_cast<std::uint32_t>(u));
  }
  if (!reader.at_end()) throw DecodeError("frame bit string longer than its 14 codewords");
  return block;
}

SemanticVector reconstruct(const SemanticVector& predictor, const SymbolBlock& block,
                           const QuantConfig& cfg) {
  const SemanticArray pred = flatten(predictor);
  const SemanticArray delta = dequantize(block, cfg);
  SemanticArray out{};
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    out[i] = clamp_component(i, pred[i] + delta[i]);
    if (!std::isfinite(out[i])) {
      throw DecodeError("reconstructed " + std::string(component_name(i)) + " is not finite");
    }
  }
  return unflatten(out);
}

StreamEncoder::StreamEncoder(const KeyFrameSemantics& key, const QuantConfig& cfg)
    : cfg_(cfg), state_{key.pose, PpmModel{}} {
  validate(cfg_);
}

FramePayload StreamEncoder::encode(const SemanticVector& frame) {
  const SemanticArray original = flatten(frame);
  const SemanticArray pred = flatten(state_.reconstructed_prev);
  SemanticArray residual{};
  for (std::size_t i = 0; i < kSemanticDim; ++i) residual[i] = original[i] - pred[i];

  last_symbols_ = quantize(residual, cfg_);
  const BitString bits = binarize(last_symbols_);
  FramePayload payload;
  payload.bit_length = static_cast<std::uint32_t>(bits.size());
  payload.bytes = ppm_encode(bits, state_.ppm);
  // Predict the next frame from what the decoder will see, never from the
  // original.
  state_.reconstructed_prev = reconstruct(state_.reconstructed_prev, last_symbols_, cfg_);
  return payload;
}

StreamDecoder::StreamDecoder(const KeyFrameSemantics& key, const QuantConfig& cfg)
    : cfg_(cfg), state_{key.pose, PpmModel{}} {
  validate(cfg_);
}

SemanticVector StreamDecoder::decode(const FramePayload& frame) {
  const BitString bits = ppm_decode(frame.bytes, frame.bit_length, state_.ppm);
  const SymbolBlock block = debinarize(bits);
  state_.reconstructed_prev = reconstruct(state_.reconstructed_prev, block, cfg_);
  return state_.reconstructed_prev;
}

CodedStream encode_stream(const SemanticTrace& trace, const KeyPayload& key, const QuantConfig& cfg,
                          const StreamInfo& info, std::vector<SemanticVector>* reconstruction) {
  validate(trace);
  validate(cfg);
  if (key.data.empty()) throw ValidationError("key payload is empty", std::nullopt, "key");
  if (trace.frames.size() > 0xFFFFFFFFULL) throw ValidationError("too many frames");

  CodedStream stream;
  stream.header.fps_q8 = encode_fps(trace.fps);
  stream.header.frame_count = static_cast<std::uint32_t>(trace.frames.size());
  stream.header.width = info.width;
  stream.header.height = info.height;
  stream.header.quant = cfg;
  stream.header.model_id = info.model_id;
  stream.key = key;
  stream.key_semantics = trace.key;

  StreamEncoder encoder(trace.key, cfg);
  stream.frames.reserve(trace.frames.size());
  if (reconstruction) {
    reconstruction->clear();
    reconstruction->reserve(trace.frames.size());
  }
  for (const auto& frame : trace.frames) {
    stream.frames.push_back(encoder.encode(frame));
    if (reconstruction) reconstruction->push_back(encoder.state().reconstructed_prev);
  }
  return stream;
}

SemanticTrace decode_stream(const CodedStream& stream) {
  if (stream.header.version != kStreamVersion) throw ContainerError("unsupported stream version");
  if (stream.header.frame_count != stream.frames.size()) {
    throw ContainerError("header frame_count does not match the number of frame payloads");
  }
  if (stream.header.fps_q8 == 0) throw ContainerError("fps is zero");
  try {
    validate(stream.header.quant);
  } catch (const ValidationError& e) {
    throw ContainerError(e.what());
  }

  SemanticTrace trace;
  trace.fps = stream.header.fps();
  trace.key = stream.key_semantics;
  StreamDecoder decoder(stream.key_semantics, stream.header.quant);
  trace.frames.reserve(stream.frames.size());
  for (std::size_t i = 0; i < stream.frames.size(); ++i) {
    try {
      trace.frames.push_back(decoder.decode(stream.frames[i]));
    } catch (const DecodeError& e) {
      throw DecodeError("frame " + std::to_string(i) + ": " + e.what());
    }
  }
  return trace;
}

double semantic_kbps(std::size_t semantic_bytes, double fps, std::size_t frame_count) {
  if (frame_count == 0) return 0.0;
  return 8.0 * static_cast<double>(semantic_bytes) * fps / static_cast<double>(frame_count) / 1000.0;
}

StreamReport inspect_stream(const CodedStream& stream) {
  if (stream.header.frame_count != stream.frames.size()) {
    throw ContainerError("header frame_count does not match the number of frame payloads");
  }
  StreamReport report;
  report.header = stream.header;
  report.key_fourcc = stream.key.fourcc;
  report.key_payload_bytes = stream.key.data.size();
  report.key_semantics_bytes = key_semantics_size(stream.key_semantics);
  report.frames.reserve(stream.frames.size());
  for (const auto& frame : stream.frames) {
    FrameReport fr;
    fr.bit_length = frame.bit_length;
    fr.payload_bytes = frame.bytes.size();
    fr.record_bytes = frame_record_size(frame);
    report.semantic_bytes += fr.record_bytes;
    report.frames.push_back(fr);
  }
  report.kbps = semantic_kbps(report.semantic_bytes, stream.header.fps(), stream.frames.size());
  return report;
}

std::string StreamReport::to_text() const {
  std::ostringstream out;
  char line[160];
  out << "magic        IFVC v" << header.version << '\n';
  std::snprintf(line, sizeof line, "fps          %.4f (q8 %u)\n", header.fps(), header.fps_q8);
  out << line;
  out << "frame_count  " << header.frame_count << '\n';
  out << "size         " << header.width << "x" << header.height << '\n';
  out << "model_id     " << header.model_id << '\n';
  out << "steps       ";
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    std::snprintf(line, sizeof line, " %s=%g", std::string(component_name(i)).c_str(), header.quant.steps[i]);
    out << line;
  }
  out << '\n';
  out << "key payload  " << std::string(key_fourcc.begin(), key_fourcc.end()) << ", " << key_payload_bytes
      << " bytes\n";
  out << "key semantics " << key_semantics_bytes << " bytes\n";
  out << "semantic stream " << semantic_bytes << " bytes\n";
  std::snprintf(line, sizeof line, "bitrate      %.3f kbps (semantics only)\n", kbps);
  out << line;
  out << "frame  bits  bytes  record\n";
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::snprintf(line, sizeof line, "%5zu %5u %6zu %7zu\n", i, frames[i].bit_length,
                  frames[i].payload_bytes, frames[i].record_bytes);
    out << line;
  }
  return out.str();
}

std::string StreamReport::to_json() const {
  nlohmann::json frames_json = nlohmann::json::array();
  for (const auto& f : frames) {
    frames_json.push_back({{"bit_length", f.bit_length},
                           {"payload_bytes", f.payload_bytes},
                           {"record_bytes", f.record_bytes}});
  }
  const nlohmann::json doc{
      {"version", header.version},
      {"fps", header.fps()},
      {"frame_count", header.frame_count},
      {"width", header.width},
      {"height", header.height},
      {"steps", std::vector<double>(header.quant.steps.begin(), header.quant.steps.end())},
      {"model_id", header.model_id},
      {"key_fourcc", std::string(key_fourcc.begin(), key_fourcc.end())},
      {"key_payload_bytes", key_payload_bytes},
      {"key_semantics_bytes", key_semantics_bytes},
      {"semantic_bytes", semantic_bytes},
      {"kbps", kbps},
      {"frames", std::move(frames_json)}};
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace ifvc
