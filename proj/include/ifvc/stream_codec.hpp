#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifvc/bitstring.hpp"
#include "ifvc/container.hpp"
#include "ifvc/ppm.hpp"
#include "ifvc/quantizer.hpp"
#include "ifvc/semantics.hpp"

namespace ifvc {

/// Zigzag + zero-order exp-Golomb binarization of one frame's symbols.
BitString binarize(const SymbolBlock& block);
/// Inverse of binarize(); the bit string must hold exactly 14 codewords.
SymbolBlock debinarize(const BitString& bits);

/// Closed-loop semantics predictor shared by encoder and decoder. Frame 1 is
/// predicted from the key frame's pose, later frames from the previous
/// reconstruction.
struct CoderState {
  SemanticVector reconstructed_prev;
  PpmModel ppm;

  friend bool operator==(const CoderState&, const CoderState&) = default;
};

/// Reconstruction rule used identically on both sides of the loop.
SemanticVector reconstruct(const SemanticVector& predictor, const SymbolBlock& block,
                           const QuantConfig& cfg);

class StreamEncoder {
 public:
  StreamEncoder(const KeyFrameSemantics& key, const QuantConfig& cfg);

  FramePayload encode(const SemanticVector& frame);

  /// Symbols of the most recently encoded frame.
  const SymbolBlock& last_symbols() const { return last_symbols_; }
  const CoderState& state() const { return state_; }

 private:
  QuantConfig cfg_;
  CoderState state_;
  SymbolBlock last_symbols_;
};

class StreamDecoder {
 public:
  StreamDecoder(const KeyFrameSemantics& key, const QuantConfig& cfg);

  SemanticVector decode(const FramePayload& frame);

  const CoderState& state() const { return state_; }

 private:
  QuantConfig cfg_;
  CoderState state_;
};

struct StreamInfo {
  std::uint16_t width = 256;
  std::uint16_t height = 256;
  std::string model_id = "synthetic";
};

/// Encodes every frame of the trace. When `reconstruction` is given it
/// receives the encoder-side reconstructed semantics, frame by frame.
CodedStream encode_stream(const SemanticTrace& trace, const KeyPayload& key, const QuantConfig& cfg,
                          const StreamInfo& info = {},
                          std::vector<SemanticVector>* reconstruction = nullptr);

/// Returns the reconstructed semantics; fps comes from the header.
SemanticTrace decode_stream(const CodedStream& stream);

struct FrameReport {
  std::uint32_t bit_length = 0;     // binarized bits before PPM
  std::size_t payload_bytes = 0;    // coded bytes
  std::size_t record_bytes = 0;     // coded bytes plus length prefixes
};

struct StreamReport {
  StreamHeader header;
  std::array<char, 4> key_fourcc{};
  std::size_t key_payload_bytes = 0;
  std::size_t key_semantics_bytes = 0;
  std::size_t semantic_bytes = 0;   // sum of frame record sizes
  double kbps = 0.0;                // semantic stream only
  std::vector<FrameReport> frames;

  std::string to_text() const;
  std::string to_json() const;
};

/// kbps = 8 * semantic_bytes * fps / frame_count / 1000.
double semantic_kbps(std::size_t semantic_bytes, double fps, std::size_t frame_count);

StreamReport inspect_stream(const CodedStream& stream);

}  // namespace ifvc
