#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <thread>

#include <doctest.h>

#include "ifvc/demo.hpp"
#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"
#include "ifvc/session.hpp"
#include "ifvc/stream_codec.hpp"
#include "ifvc/trace_io.hpp"
#include "test_support.hpp"

using namespace ifvc;

namespace {

const std::string kGolden = std::string(IFVC_TEST_DATA_DIR) + "/golden.ifvc";

std::shared_ptr<const MorphableModel> model() {
  static const auto m = std::make_shared<const MorphableModel>(make_synthetic_model());
  return m;
}

CodedStream demo_stream(std::size_t frames, int size = 64) {
  SemanticTrace trace = make_demo_trace(frames);
  KeyPayload key;
  key.data = {1, 2, 3};
  return encode_stream(trace, key, QuantConfig::defaults(),
                       StreamInfo{static_cast<std::uint16_t>(size), static_cast<std::uint16_t>(size), "synthetic"});
}

EditOp op(std::optional<std::pair<std::size_t, std::size_t>> frames, std::size_t component, EditMode mode,
          double value) {
  EditOp e;
  e.frames = frames;
  e.component = component;
  e.mode = mode;
  e.value = value;
  return e;
}

}  // namespace

TEST_CASE("edit targets and JSON") {
  CHECK(edit_target_name(0) == "mouth_0");
  CHECK(edit_target_name(6) == "eye");
  CHECK(edit_target_name(8) == "rot_1");
  CHECK(edit_target_name(12) == "trans_2");
  CHECK(edit_target_name(13) == "loc");
  for (std::size_t i = 0; i < kSemanticDim; ++i) CHECK(parse_edit_target(edit_target_name(i)) == i);
  CHECK_THROWS_AS(parse_edit_target("rot_3"), ParseError);

  const EditOp e = parse_edit_json(R"({"frames":[10,20],"target":"rot_1","mode":"offset","value":0.2})");
  CHECK(e == op(std::pair<std::size_t, std::size_t>{10, 20}, 8, EditMode::kOffset, 0.2));
  CHECK(parse_edit_json(edit_to_json(e)) == e);
  const EditOp all = parse_edit_json(R"({"frames":"all","target":"eye","mode":"set","value":5})");
  CHECK(!all.frames);
  CHECK(parse_edit_json(R"({"target":"loc","mode":"scale","value":2})").frames == std::nullopt);

  CHECK_THROWS_AS(parse_edit_json("nope"), ParseError);
  CHECK_THROWS_AS(parse_edit_json(R"({"target":"eye","mode":"twist","value":1})"), ParseError);
  CHECK_THROWS_AS(parse_edit_json(R"({"target":"eye","mode":"set","value":"1"})"), ParseError);
  CHECK_THROWS_AS(parse_edit_json(R"({"frames":[-1,2],"target":"eye","mode":"set","value":1})"), ParseError);
  CHECK_THROWS_AS(parse_edit_json(R"({"frames":"some","target":"eye","mode":"set","value":1})"), ParseError);
  CHECK_THROWS_AS(parse_edit_json(R"({"mode":"set","value":1})"), ParseError);
}

TEST_CASE("apply_edit examples") {
  std::mt19937_64 rng(8);
  const SemanticTrace trace = testing::random_walk_trace(rng, 250);
  std::vector<SemanticVector> frames = trace.frames;
  for (auto& f : frames) f.rot[1] = std::clamp(f.rot[1], -2.0, 2.0);
  const auto before = frames;

  apply_edit(frames, op(std::pair<std::size_t, std::size_t>{10, 20}, slot::kRot + 1, EditMode::kOffset, 0.2));
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto a = flatten(before[f]), b = flatten(frames[f]);
    for (std::size_t i = 0; i < kSemanticDim; ++i) {
      if (i == slot::kRot + 1 && f >= 10 && f <= 20) CHECK(b[i] == a[i] + 0.2);
      else CHECK(b[i] == a[i]);
    }
  }

  apply_edit(frames, op(std::nullopt, slot::kEye, EditMode::kSet, 7.0));
  for (const auto& f : frames) CHECK(f.eye == 5.0);
  apply_edit(frames, op(std::nullopt, slot::kEye, EditMode::kOffset, -9.0));
  for (const auto& f : frames) CHECK(f.eye == 0.0);

  apply_edit(frames, op(std::pair<std::size_t, std::size_t>{0, 249}, 0, EditMode::kScale, 0.0));
  for (const auto& f : frames) CHECK(f.mouth[0] == 0.0);

  apply_edit(frames, op(std::pair<std::size_t, std::size_t>{0, 0}, slot::kRot, EditMode::kSet, 3.5));
  CHECK(frames[0].rot[0] == doctest::Approx(3.5 - 2 * std::numbers::pi));
  CHECK_NOTHROW(validate(frames[0]));

  const auto snapshot = frames;
  CHECK_THROWS_AS(apply_edit(frames, op(std::pair<std::size_t, std::size_t>{5, 250}, 0, EditMode::kSet, 1)), RangeError);
  CHECK_THROWS_AS(apply_edit(frames, op(std::pair<std::size_t, std::size_t>{6, 5}, 0, EditMode::kSet, 1)), RangeError);
  CHECK_THROWS_AS(apply_edit(frames, op(std::nullopt, 0, EditMode::kSet, NAN)), RangeError);
  frames[3].loc = 1e10;
  const auto with_big = frames;
  CHECK_THROWS_AS(apply_edit(frames, op(std::nullopt, 13, EditMode::kScale, 1e300)), RangeError);
  CHECK(frames == with_big);
}

TEST_CASE("open session") {
  const Session a(kGolden, model());
  CHECK(a.frame_count() == a.stream().header.frame_count);
  const Session b(kGolden, model());
  CHECK(a.decoded().frames == b.decoded().frames);
  CHECK(a.current() == a.decoded().frames);
  CHECK(a.edits().empty());

  testing::TempDir dir;
  auto bytes = read_file_bytes(kGolden);
  bytes.resize(bytes.size() - 5);
  write_file_bytes(dir / "t.ifvc", bytes);
  CHECK_THROWS_AS(Session(dir / "t.ifvc", model()), ContainerError);
}

TEST_CASE("edit log replay and removal") {
  Session s(demo_stream(100), model());
  const auto original = s.current();
  const EditOp first = op(std::pair<std::size_t, std::size_t>{10, 20}, slot::kRot + 1, EditMode::kOffset, 0.2);
  const EditOp second = op(std::nullopt, slot::kEye, EditMode::kSet, 5.0);
  CHECK(s.add_edit(first) == 0);
  CHECK(s.add_edit(second) == 1);
  auto replayed = s.decoded().frames;
  apply_edit(replayed, first);
  apply_edit(replayed, second);
  CHECK(s.current() == replayed);

  CHECK_THROWS_AS(s.add_edit(op(std::pair<std::size_t, std::size_t>{0, 100}, 0, EditMode::kSet, 0)), RangeError);
  CHECK(s.edits().size() == 2);

  s.remove_edit(1);
  auto only_first = s.decoded().frames;
  apply_edit(only_first, first);
  CHECK(s.current() == only_first);
  s.remove_edit(0);
  CHECK(s.current() == original);
  CHECK_THROWS_AS(s.remove_edit(0), RangeError);
  CHECK_THROWS_AS(s.frame(100), RangeError);
}

TEST_CASE("eye set to 5 closes every preview eye") {
  Session s(demo_stream(30), model());
  s.add_edit(op(std::nullopt, slot::kEye, EditMode::kSet, 5.0));
  for (std::size_t l = 0; l < 30; l += 7) {
    const auto g = s.geometry(l);
    for (const auto& eye : g.eyes.eyes) {
      CHECK(eye.recalibrated_highest.y() == eye.lowest.y());
    }
    CHECK(g.eyes.map.count() == 0);
  }
}

TEST_CASE("export round trips") {
  testing::TempDir dir;
  Session s(kGolden, model());
  s.export_to(dir / "same.ifvc");
  const Session same(dir / "same.ifvc", model());
  CHECK(same.decoded().frames == s.decoded().frames);

  s.add_edit(op(std::pair<std::size_t, std::size_t>{5, 15}, slot::kRot + 1, EditMode::kOffset, 0.2));
  s.add_edit(op(std::nullopt, 0, EditMode::kScale, 1.5));
  s.export_to(dir / "edited.ifvc");
  const Session edited(dir / "edited.ifvc", model());
  const auto want = s.current();
  const auto& steps = s.stream().header.quant.steps;
  for (std::size_t f = 0; f < want.size(); ++f) {
    const auto a = flatten(want[f]), b = flatten(edited.decoded().frames[f]);
    for (std::size_t i = 0; i < kSemanticDim; ++i) CHECK(std::abs(a[i] - b[i]) <= steps[i] / 2 + 1e-12);
  }
  CHECK(edited.stream().key == s.stream().key);
  CHECK(edited.stream().header.quant == s.stream().header.quant);

  const auto log = s.edits();
  CHECK_THROWS_AS(s.export_to("/nonexistent-dir/x/y.ifvc"), IoError);
  CHECK(s.edits() == log);
  CHECK(s.current() == want);
}

TEST_CASE("key substitution") {
  Session s(demo_stream(20), model());
  const RgbImage before = s.preview(7);
  const RgbImage original_key = s.key_image();

  s.substitute_key(original_key, s.stream().key_semantics);
  CHECK(s.key_substituted());
  CHECK(s.preview(7) == before);

  CHECK_THROWS_AS(s.substitute_key(RgbImage(10, 10), std::nullopt), DimensionError);

  // Two different characters: the inter-frame pose and mouth come from the
  // stream, the identity from the character.
  KeyFrameSemantics c1 = s.stream().key_semantics, c2 = c1;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    c1.id_coeffs.push_back(testing::uniform(rng, -1, 1));
    c2.id_coeffs.push_back(testing::uniform(rng, -1, 1));
  }
  RgbImage img1(64, 64, {10, 20, 30}), img2(64, 64, {200, 100, 0});
  s.substitute_key(img1, c1);
  const auto g1 = s.geometry(7);
  const auto p1 = s.preview(7);
  CHECK(p1 == img1);  // warping a constant image changes nothing
  s.substitute_key(img2, c2);
  const auto g2 = s.geometry(7);
  const auto direct = project(synthesize_shape(s.model(), c2, &s.current()[7]), pose_from_semantics(s.current()[7]),
                              CameraIntrinsics::for_image(64, 64));
  CHECK(g2.mesh.projected == direct.projected);
  CHECK(g1.mesh.projected != g2.mesh.projected);
  CHECK(s.decoded().frames == Session(demo_stream(20), model()).decoded().frames);

  KeyFrameSemantics bad = c1;
  bad.id_coeffs.push_back(0.0);
  CHECK_THROWS_AS(s.substitute_key(img1, bad), DimensionError);
  CHECK(s.active_key() == c2);
}

TEST_CASE("concurrent readers and writers") {
  Session s(demo_stream(60), model());
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&s, t] {
      for (int i = 0; i < 20; ++i) {
        if (t == 0) s.add_edit(op(std::nullopt, 0, EditMode::kOffset, 0.01));
        else (void)s.mesh_json(static_cast<std::size_t>(i % 60));
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(s.edits().size() == 20);
  auto replayed = s.decoded().frames;
  for (const auto& e : s.edits()) apply_edit(replayed, e);
  CHECK(s.current() == replayed);
}
