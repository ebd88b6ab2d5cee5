#include "ifvc/session.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <json.hpp>

#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"
#include "ifvc/stream_codec.hpp"
#include "ifvc/trace_io.hpp"

namespace ifvc {

using nlohmann::json;

namespace {

constexpr const char* kModeNames[] = {"set", "offset", "scale"};

json point_json(const Eigen::Vector2d& p) {
  if (!p.allFinite()) return nullptr;
  return json::array({p.x(), p.y()});
}

json semantics_json(const SemanticVector& v) {
  const auto a = flatten(v);
  json named = json::object();
  for (std::size_t i = 0; i < kSemanticDim; ++i) named[edit_target_name(i)] = a[i];
  return json{{"values", std::vector<double>(a.begin(), a.end())}, {"components", named}};
}

json edit_json(const EditOp& op) {
  json frames = op.frames ? json::array({op.frames->first, op.frames->second}) : json("all");
  return json{{"frames", frames},
              {"target", edit_target_name(op.component)},
              {"mode", kModeNames[static_cast<int>(op.mode)]},
              {"value", op.value}};
}

}  // namespace

std::string edit_target_name(std::size_t component) {
  if (component < kMouthDim) return "mouth_" + std::to_string(component);
  if (component == slot::kEye) return "eye";
  if (component < slot::kTrans) return "rot_" + std::to_string(component - slot::kRot);
  if (component < slot::kLoc) return "trans_" + std::to_string(component - slot::kTrans);
  if (component == slot::kLoc) return "loc";
  throw RangeError("semantic component " + std::to_string(component) + " out of range");
}

std::size_t parse_edit_target(std::string_view name) {
  for (std::size_t i = 0; i < kSemanticDim; ++i) {
    if (edit_target_name(i) == name) return i;
  }
  throw ParseError("unknown edit target '" + std::string(name) + "'");
}

std::string edit_to_json(const EditOp& op) { return edit_json(op).dump(); }

EditOp parse_edit_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("edit is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("edit must be a JSON object");
  EditOp op;
  try {
    const json& frames = doc.contains("frames") ? doc.at("frames") : json("all");
    if (frames.is_string()) {
      if (frames.get<std::string>() != "all") throw ParseError("frames must be \"all\" or [first, last]");
    } else if (frames.is_array() && frames.size() == 2 && frames[0].is_number_unsigned() &&
               frames[1].is_number_unsigned()) {
      op.frames = std::pair{frames[0].get<std::size_t>(), frames[1].get<std::size_t>()};
    } else {
      throw ParseError("frames must be \"all\" or [first, last] with non-negative integers");
    }
    op.component = parse_edit_target(doc.at("target").get<std::string>());
    const auto mode = doc.at("mode").get<std::string>();
    if (mode == "set") op.mode = EditMode::kSet;
    else if (mode == "offset") op.mode = EditMode::kOffset;
    else if (mode == "scale") op.mode = EditMode::kScale;
    else throw ParseError("unknown edit mode '" + mode + "'");
    if (!doc.at("value").is_number()) throw ParseError("edit value must be a number");
    op.value = doc.at("value").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed edit: ") + e.what());
  }
  return op;
}

void apply_edit(std::span<SemanticVector> frames, const EditOp& op) {
  if (op.component >= kSemanticDim) throw RangeError("edit component out of range");
  if (!std::isfinite(op.value)) throw RangeError("edit value must be finite");
  std::size_t first = 0, last = frames.size();
  if (op.frames) {
    first = op.frames->first;
    last = op.frames->second + 1;
    if (op.frames->first > op.frames->second || op.frames->second >= frames.size()) {
      throw RangeError("frame range [" + std::to_string(op.frames->first) + ", " +
                       std::to_string(op.frames->second) + "] outside 0.." +
                       (frames.empty() ? std::string("(empty)") : std::to_string(frames.size() - 1)));
    }
  }
  const bool is_rot = op.component >= slot::kRot && op.component < slot::kTrans;
  std::vector<double> results;
  results.reserve(last - first);
  for (std::size_t f = first; f < last; ++f) {
    const double x = flatten(frames[f])[op.component];
    double y = op.mode == EditMode::kSet ? op.value : op.mode == EditMode::kOffset ? x + op.value : x * op.value;
    if (!std::isfinite(y)) throw RangeError("edit produces a non-finite value at frame " + std::to_string(f));
    if (is_rot && std::abs(y) > std::numbers::pi) y = std::remainder(y, 2.0 * std::numbers::pi);
    results.push_back(clamp_component(op.component, y));
  }
  for (std::size_t f = first; f < last; ++f) {
    auto a = flatten(frames[f]);
    a[op.component] = results[f - first];
    frames[f] = unflatten(a);
  }
}

Session::Session(const std::filesystem::path& path, std::shared_ptr<const MorphableModel> model)
    : Session(parse_stream(read_file_bytes(path)), std::move(model)) {}

Session::Session(CodedStream stream, std::shared_ptr<const MorphableModel> model)
    : stream_(std::move(stream)), model_(std::move(model)) {
  if (!model_) throw ValidationError("session needs a morphable model");
  decoded_ = decode_stream(stream_);
  current_ = decoded_.frames;
  key_ = stream_.key_semantics;
  key_image_ = key_reference_image(stream_.key, *model_, key_, stream_.header.width, stream_.header.height);
}

std::vector<SemanticVector> Session::current() const {
  std::shared_lock lock(mutex_);
  return current_;
}

void Session::check_frame(std::size_t l) const {
  if (l >= decoded_.frames.size()) {
    throw RangeError("frame " + std::to_string(l) + " outside the stream's " + std::to_string(decoded_.frames.size()) +
                     " frames");
  }
}

SemanticVector Session::frame(std::size_t l) const {
  check_frame(l);
  std::shared_lock lock(mutex_);
  return current_[l];
}

std::vector<EditOp> Session::edits() const {
  std::shared_lock lock(mutex_);
  return edits_;
}

std::vector<SemanticVector> Session::replay(const std::vector<EditOp>& edits) const {
  std::vector<SemanticVector> frames = decoded_.frames;
  for (const auto& op : edits) apply_edit(frames, op);
  return frames;
}

std::size_t Session::add_edit(const EditOp& op) {
  std::unique_lock lock(mutex_);
  std::vector<EditOp> log = edits_;
  log.push_back(op);
  current_ = replay(log);
  edits_ = std::move(log);
  return edits_.size() - 1;
}

void Session::remove_edit(std::size_t index) {
  std::unique_lock lock(mutex_);
  if (index >= edits_.size()) {
    throw RangeError("edit " + std::to_string(index) + " does not exist (" + std::to_string(edits_.size()) +
                     " edits)");
  }
  std::vector<EditOp> log = edits_;
  log.erase(log.begin() + static_cast<std::ptrdiff_t>(index));
  current_ = replay(log);
  edits_ = std::move(log);
}

void Session::substitute_key(RgbImage image, std::optional<KeyFrameSemantics> key) {
  if (image.width != stream_.header.width || image.height != stream_.header.height) {
    throw DimensionError("key image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                         ", stream is " + std::to_string(stream_.header.width) + "x" +
                         std::to_string(stream_.header.height));
  }
  if (key) {
    key->pose.eye = clamp_component(slot::kEye, key->pose.eye);
    validate(key->pose);
    // Fail now rather than on the next preview.
    (void)synthesize_shape(*model_, *key);
    (void)synthesize_texture(*model_, *key);
  }
  std::unique_lock lock(mutex_);
  key_image_ = std::move(image);
  if (key) key_ = std::move(*key);
  substituted_ = true;
}

bool Session::key_substituted() const {
  std::shared_lock lock(mutex_);
  return substituted_;
}

KeyFrameSemantics Session::active_key() const {
  std::shared_lock lock(mutex_);
  return key_;
}

RgbImage Session::key_image() const {
  std::shared_lock lock(mutex_);
  return key_image_;
}

FrameGeometry Session::geometry(std::size_t l) const {
  check_frame(l);
  std::shared_lock lock(mutex_);
  const auto camera = CameraIntrinsics::for_image(stream_.header.width, stream_.header.height);
  return inter_geometry(*model_, key_, current_[l], camera);
}

RgbImage Session::preview(std::size_t l, FlowField* flow) const {
  check_frame(l);
  std::shared_lock lock(mutex_);
  return render_preview(*model_, key_, key_image_, current_[l], flow);
}

CodedStream Session::exported() const {
  std::shared_lock lock(mutex_);
  SemanticTrace trace;
  trace.fps = stream_.header.fps();
  trace.key = stream_.key_semantics;
  trace.frames = current_;
  StreamInfo info{stream_.header.width, stream_.header.height, stream_.header.model_id};
  return encode_stream(trace, stream_.key, stream_.header.quant, info);
}

void Session::export_to(const std::filesystem::path& path) const { write_file_bytes(path, serialize(exported())); }

std::string Session::meta_json() const {
  const StreamHeader& h = stream_.header;
  json steps = json::object();
  for (std::size_t i = 0; i < kSemanticDim; ++i) steps[edit_target_name(i)] = h.quant.steps[i];
  const StreamReport report = inspect_stream(stream_);
  std::shared_lock lock(mutex_);
  json edits = json::array();
  for (const auto& op : edits_) edits.push_back(edit_json(op));
  const json doc{
      {"version", h.version},
      {"frame_count", h.frame_count},
      {"fps", h.fps()},
      {"width", h.width},
      {"height", h.height},
      {"model_id", h.model_id},
      {"model", {{"name", model_->name}, {"vertices", model_->vertex_count()}, {"triangles", model_->triangles.size()}}},
      {"steps", steps},
      {"components", [] {
         json names = json::array();
         for (std::size_t i = 0; i < kSemanticDim; ++i) names.push_back(edit_target_name(i));
         return names;
       }()},
      {"key", {{"fourcc", std::string(stream_.key.fourcc.begin(), stream_.key.fourcc.end())},
               {"bytes", stream_.key.data.size()},
               {"substituted", substituted_}}},
      {"semantic_bytes", report.semantic_bytes},
      {"kbps", report.kbps},
      {"edits", edits},
  };
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string Session::frame_json(std::size_t l) const {
  check_frame(l);
  std::shared_lock lock(mutex_);
  json doc = semantics_json(current_[l]);
  doc["frame"] = l;
  doc["decoded"] = semantics_json(decoded_.frames[l])["values"];
  return doc.dump();
}

std::string Session::mesh_json(std::size_t l) const {
  const FrameGeometry g = geometry(l);
  const Mesh& m = g.eyes.mesh;
  json vertices = json::array();
  for (Eigen::Index i = 0; i < m.size(); ++i) vertices.push_back(point_json(m.projected.col(i)));
  json eyes = json::array();
  for (std::size_t e = 0; e < 2; ++e) {
    json polygon = json::array();
    for (const auto& p : g.eyes.polygons[e]) polygon.push_back(point_json(p));
    const EyeRegion& r = g.eyes.eyes[e];
    eyes.push_back({{"indices", r.indices},
                    {"highest", point_json(r.highest)},
                    {"lowest", point_json(r.lowest)},
                    {"recalibrated_highest", point_json(r.recalibrated_highest)},
                    {"polygon", polygon}});
  }
  const json doc{{"frame", l},
                 {"width", stream_.header.width},
                 {"height", stream_.header.height},
                 {"vertices", vertices},
                 {"visible", m.visible},
                 {"triangles", model_->triangles},
                 {"eyes", eyes}};
  return doc.dump();
}

std::string Session::edits_json() const {
  std::shared_lock lock(mutex_);
  json edits = json::array();
  for (const auto& op : edits_) edits.push_back(edit_json(op));
  return json{{"edits", edits}}.dump();
}

}  // namespace ifvc
