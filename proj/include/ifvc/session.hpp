#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifvc/container.hpp"
#include "ifvc/image.hpp"
#include "ifvc/morphable_model.hpp"
#include "ifvc/preview.hpp"
#include "ifvc/semantics.hpp"

namespace ifvc {

enum class EditMode { kSet, kOffset, kScale };

/// One edit: `component` is a flattened semantic index (0..13). An empty
/// range means every frame; otherwise it is inclusive.
struct EditOp {
  std::optional<std::pair<std::size_t, std::size_t>> frames;
  std::size_t component = 0;
  EditMode mode = EditMode::kSet;
  double value = 0.0;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

/// "mouth_0".."mouth_5", "eye", "rot_0".."rot_2", "trans_0".."trans_2", "loc".
std::string edit_target_name(std::size_t component);
std::size_t parse_edit_target(std::string_view name);

/// JSON object {"frames": "all" | [first, last], "target", "mode", "value"}.
std::string edit_to_json(const EditOp& op);
EditOp parse_edit_json(std::string_view text);

/// Applies `op` in place. Eye results are clamped to [0, 5], rotations
/// wrapped into [-pi, pi]. Throws RangeError on an empty or out-of-range
/// frame range, a non-finite value or a non-finite result.
void apply_edit(std::span<SemanticVector> frames, const EditOp& op);

/// An opened stream plus its edit log. Edits are replayed over the decoded
/// trace whenever the log changes. All members are safe to call
/// concurrently; mutations take an exclusive lock.
class Session {
 public:
  Session(const std::filesystem::path& path, std::shared_ptr<const MorphableModel> model);
  Session(CodedStream stream, std::shared_ptr<const MorphableModel> model);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const CodedStream& stream() const { return stream_; }
  const MorphableModel& model() const { return *model_; }
  std::size_t frame_count() const { return decoded_.frames.size(); }
  const SemanticTrace& decoded() const { return decoded_; }

  std::vector<SemanticVector> current() const;
  /// Edited semantics of frame `l`; RangeError when out of range.
  SemanticVector frame(std::size_t l) const;
  std::vector<EditOp> edits() const;

  /// Returns the new edit's index. The log is unchanged when the edit fails.
  std::size_t add_edit(const EditOp& op);
  void remove_edit(std::size_t index);

  /// Replaces the key reference image and, when given, the key semantics
  /// used for geometry. DimensionError unless the image matches the header.
  void substitute_key(RgbImage image, std::optional<KeyFrameSemantics> key);
  bool key_substituted() const;
  KeyFrameSemantics active_key() const;
  RgbImage key_image() const;

  FrameGeometry geometry(std::size_t l) const;
  RgbImage preview(std::size_t l, FlowField* flow = nullptr) const;

  /// Edited trace re-encoded with the original steps, header fields and key.
  CodedStream exported() const;
  /// Writes exported() atomically; the session itself is never modified.
  void export_to(const std::filesystem::path& path) const;

  std::string meta_json() const;
  std::string frame_json(std::size_t l) const;
  std::string mesh_json(std::size_t l) const;
  std::string edits_json() const;

 private:
  void check_frame(std::size_t l) const;
  std::vector<SemanticVector> replay(const std::vector<EditOp>& edits) const;

  CodedStream stream_;
  std::shared_ptr<const MorphableModel> model_;
  SemanticTrace decoded_;

  mutable std::shared_mutex mutex_;
  std::vector<EditOp> edits_;
  std::vector<SemanticVector> current_;
  KeyFrameSemantics key_;
  RgbImage key_image_;
  bool substituted_ = false;
};

}  // namespace ifvc
