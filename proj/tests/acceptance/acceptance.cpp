// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "../unit/test_support.hpp"
#include "ifvc/container.hpp"
#include "ifvc/demo.hpp"
#include "ifvc/errors.hpp"
#include "ifvc/exp_golomb.hpp"
#include "ifvc/eye_recalibration.hpp"
#include "ifvc/face_geometry.hpp"
#include "ifvc/file_io.hpp"
#include "ifvc/flow.hpp"
#include "ifvc/session.hpp"
#include "ifvc/stream_codec.hpp"

using namespace ifvc;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Heavy-tailed symbols: mostly small residuals, some large, a few extreme.
std::int32_t random_symbol(std::mt19937_64& rng) {
  const auto r = rng() % 100;
  if (r < 70) return static_cast<std::int32_t>(rng() % 7) - 3;
  if (r < 95) return static_cast<std::int32_t>(rng() % 401) - 200;
  if (r < 99) return static_cast<std::int32_t>(rng() % 2000001) - 1000000;
  return (rng() & 1) ? std::numeric_limits<std::int32_t>::max() : -std::numeric_limits<std::int32_t>::max();
}

Outcome entropy_round_trip() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::size_t frames_total = 0, failures = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    const std::size_t frames = 1 + rng() % 500;
    PpmModel enc, dec;
    for (std::size_t f = 0; f < frames; ++f) {
      SymbolBlock block;
      for (auto& s : block.symbols) s = random_symbol(rng);
      const BitString bits = binarize(block);
      const auto payload = ppm_encode(bits, enc);
      const BitString back = ppm_decode(payload, bits.size(), dec);
      if (!(back == bits) || !(debinarize(back) == block)) ++failures;
    }
    if (!(enc == dec)) ++failures;
    frames_total += frames;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 60.0,
          fmt("1000 sequences, %zu frames, %zu mismatches, %.1f s (limit 60 s)", frames_total, failures, secs)};
}

Outcome drift_free() {
  std::mt19937_64 rng(2002);
  const QuantConfig cfg = QuantConfig::defaults();
  std::size_t mismatched = 0, bound_violations = 0, above_half_step = 0;
  double worst_early = 0.0, worst_late = 0.0;
  for (int t = 0; t < 100; ++t) {
    const SemanticTrace trace = testing::random_walk_trace(rng, 250);
    KeyPayload key;
    key.data = {0x42};
    std::vector<SemanticVector> recon;
    const CodedStream stream = encode_stream(trace, key, cfg, {}, &recon);
    const SemanticTrace decoded = decode_stream(parse_stream(serialize(stream)));
    if (decoded.frames != recon) ++mismatched;
    for (std::size_t f = 0; f < trace.frames.size(); ++f) {
      const auto a = flatten(trace.frames[f]), b = flatten(decoded.frames[f]);
      for (std::size_t i = 0; i < kSemanticDim; ++i) {
        const double rel = std::abs(a[i] - b[i]) / cfg.steps[i];
        // 1e-12 absorbs the rounding of pred + symbol * step itself.
        if (std::abs(a[i] - b[i]) > cfg.steps[i] / 2 + 1e-12) ++bound_violations;
        if (std::abs(a[i] - b[i]) > cfg.steps[i] / 2) ++above_half_step;
        (f < 125 ? worst_early : worst_late) = std::max(f < 125 ? worst_early : worst_late, rel);
      }
    }
  }
  return {mismatched == 0 && bound_violations == 0,
          fmt("100 traces x 250 frames, %zu encoder/decoder mismatches, %zu bound violations (%zu exceed step/2 "
              "by < 1e-12), max |err|/step %.6f (frames 0-124) vs %.6f (frames 125-249)",
              mismatched, bound_violations, above_half_step - bound_violations, worst_early, worst_late)};
}

Outcome exp_golomb_golden() {
  const char* table[16] = {"1",       "010",     "011",     "00100",   "00101",   "00110",
                           "00111",   "0001000", "0001001", "0001010", "0001011", "0001100",
                           "0001101", "0001110", "0001111", "000010000"};
  int matches = 0;
  for (std::uint64_t u = 0; u < 16; ++u) {
    const BitString code = eg0_encode(u);
    BitReader reader(code);
    if (code.to_string() == table[u] && eg0_decode(reader) == u && reader.at_end()) ++matches;
  }
  return {matches == 16, fmt("%d/16 codewords match", matches)};
}

Outcome rotation_projection() {
  std::mt19937_64 rng(4004);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double a = testing::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double b = testing::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double c = testing::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const Eigen::Matrix3d r = rotation_from_euler(a, b, c);
    worst_orth = std::max(worst_orth, (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    worst_det = std::max(worst_det, std::abs(r.determinant() - 1.0));
  }
  CameraIntrinsics cam;
  cam.focal = 1.0;
  RigidPose pose;
  pose.translation = {0, 0, 2};
  Eigen::Matrix3Xd pts(3, 2);
  pts << 0, 1, 0, 0, 0, 0;
  const Mesh m = project(pts, pose, cam);
  const double e0 = (m.projected.col(0) - Eigen::Vector2d(0, 0)).cwiseAbs().maxCoeff();
  const double e1 = (m.projected.col(1) - Eigen::Vector2d(0.5, 0)).cwiseAbs().maxCoeff();
  return {worst_orth <= 1e-12 && worst_det <= 1e-12 && e0 <= 1e-12 && e1 <= 1e-12,
          fmt("1e5 poses: max |R^T R - I| %.2e, max |det R - 1| %.2e; pinhole errors %.1e, %.1e", worst_orth, worst_det,
              e0, e1)};
}

Outcome eye_endpoints() {
  MorphableModel model;
  model.eye_regions = {std::vector<int>{0, 1, 2}, std::vector<int>{}};
  Mesh mesh;
  mesh.vertices.setZero(3, 3);
  mesh.projected.resize(2, 3);
  mesh.projected << 40, 35, 40, 10, 15, 20;
  mesh.visible.assign(3, 1);
  const double want[3] = {0.0, 10.0, 5.0};
  const double intensity[3] = {5.0, 0.0, 2.5};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    const auto r = recalibrate_eyes(mesh, model, intensity[k], 64, 64);
    const double gap = r.eyes[0].lowest.y() - r.eyes[0].recalibrated_highest.y();
    ok = ok && std::abs(gap - want[k]) <= 1e-12 && r.eyes[0].highest.y() == 10 && r.eyes[0].lowest.y() == 20;
    detail += fmt("%sintensity %.1f -> gap %.15g", k ? ", " : "", intensity[k], gap);
  }
  return {ok, "P_hp=10, P_lp=20: " + detail};
}

Outcome flow_exactness() {
  std::mt19937_64 rng(6006);
  double worst_anchor = 0.0, worst_affine = 0.0;
  std::size_t in_hull = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector2d> anchors, random_vals, affine_vals;
    Eigen::Matrix2d A;
    A << testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2),
        testing::uniform(rng, -2, 2);
    const Eigen::Vector2d b(testing::uniform(rng, -9, 9), testing::uniform(rng, -9, 9));
    std::vector<std::uint8_t> used(128 * 96, 0);
    for (int i = 0; i < 60; ++i) {
      const int x = static_cast<int>(rng() % 128), y = static_cast<int>(rng() % 96);
      if (used[static_cast<std::size_t>(y * 128 + x)]++) continue;
      anchors.emplace_back(x, y);
    }
    const std::size_t on_grid = anchors.size();
    for (int i = 0; i < 20; ++i) anchors.emplace_back(testing::uniform(rng, 0, 127), testing::uniform(rng, 0, 95));
    for (const auto& p : anchors) {
      random_vals.emplace_back(testing::uniform(rng, -20, 20), testing::uniform(rng, -20, 20));
      affine_vals.push_back(A * p + b);
    }
    const FlowField fr = interpolate_scattered(anchors, random_vals, 128, 96);
    for (std::size_t i = 0; i < on_grid; ++i) {
      const Eigen::Vector2d& d = fr.at(static_cast<int>(anchors[i].x()), static_cast<int>(anchors[i].y()));
      worst_anchor = std::max(worst_anchor, (d - random_vals[i]).cwiseAbs().maxCoeff());
    }
    const FlowField fa = interpolate_scattered(anchors, affine_vals, 128, 96);
    for (int y = 0; y < 96; ++y) {
      for (int x = 0; x < 128; ++x) {
        if (fa.filled(x, y)) continue;
        ++in_hull;
        worst_affine = std::max(worst_affine, (fa.at(x, y) - (A * Eigen::Vector2d(x, y) + b)).cwiseAbs().maxCoeff());
      }
    }
  }
  RgbImage img(97, 61);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
  const bool identity = warp_frame(img, FlowField(97, 61)) == img;
  return {worst_anchor <= 1e-9 && worst_affine <= 1e-6 && identity,
          fmt("anchor error %.2e (limit 1e-9), affine error %.2e over %zu in-hull nodes (limit 1e-6), zero-flow warp "
              "%s",
              worst_anchor, worst_affine, in_hull, identity ? "byte-identical" : "DIFFERS")};
}

Outcome bitrate() {
  const auto t0 = Clock::now();
  const SemanticTrace trace = make_demo_trace(250, 25.0, 0.3);
  KeyPayload key;
  key.data.assign(5000, 0x5a);
  const CodedStream stream = encode_stream(trace, key, QuantConfig::defaults());
  const StreamReport report = inspect_stream(parse_stream(serialize(stream)));
  const SemanticTrace decoded = decode_stream(stream);
  const double secs = seconds_since(t0);
  const bool ok = report.kbps <= 5.0 && secs < 10.0 && decoded.frames.size() == 250;
  return {ok, fmt("250 frames @ 25 fps, yaw +-0.3 rad, blink every 2 s: %zu semantic bytes = %.3f kbps (limit 5.0), "
                  "%.2f s (limit 10 s)",
                  report.semantic_bytes, report.kbps, secs)};
}

Outcome edit_locality() {
  std::mt19937_64 rng(8008);
  SemanticTrace trace = testing::random_walk_trace(rng, 250);
  for (auto& f : trace.frames) f.rot[1] *= 0.5;  // keep yaw + 0.2 away from the wrap
  KeyPayload key;
  key.data = {1};
  Session session(encode_stream(trace, key, QuantConfig::defaults(), StreamInfo{64, 64, "synthetic"}),
                  std::make_shared<const MorphableModel>(make_synthetic_model()));
  const auto before = session.current();
  session.add_edit(parse_edit_json(R"({"frames":[10,20],"target":"rot_1","mode":"offset","value":0.2})"));
  const auto after = session.current();
  std::size_t changed_elsewhere = 0, wrong_target = 0;
  for (std::size_t f = 0; f < 250; ++f) {
    const auto a = flatten(before[f]), b = flatten(after[f]);
    for (std::size_t i = 0; i < kSemanticDim; ++i) {
      const bool targeted = i == slot::kRot + 1 && f >= 10 && f <= 20;
      if (targeted) wrong_target += b[i] == a[i] + 0.2 ? 0 : 1;
      else changed_elsewhere += std::memcmp(&a[i], &b[i], sizeof(double)) == 0 ? 0 : 1;
    }
  }
  return {changed_elsewhere == 0 && wrong_target == 0,
          fmt("offset rot_1 +0.2 on frames 10-20: %zu targeted values off, %zu other values changed (of 3489)",
              wrong_target, changed_elsewhere)};
}

Outcome container_fuzz() {
  const Bytes golden = read_file_bytes(std::string(IFVC_TEST_DATA_DIR) + "/golden.ifvc");
  std::mt19937_64 rng(9009);
  std::size_t structured = 0, accepted = 0, wrong_length = 0, crashes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Bytes bytes = golden;
    const std::size_t pos = rng() % bytes.size();
    bytes[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    try {
      const CodedStream stream = parse_stream(bytes);
      const SemanticTrace trace = decode_stream(stream);
      ++accepted;
      if (trace.frames.size() != stream.header.frame_count) ++wrong_length;
    } catch (const Error&) {
      ++structured;
    } catch (...) {
      ++crashes;
    }
  }
  const double rate = structured / 1000.0;
  return {crashes == 0 && wrong_length == 0 && rate >= 0.99,
          fmt("1000 single-byte corruptions: %zu structured errors (%.1f%%, need 99%%), %zu accepted, %zu wrong-length, "
              "%zu other exceptions",
              structured, 100.0 * rate, accepted, wrong_length, crashes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"lossless entropy pipeline", entropy_round_trip},
      {"drift-free closed loop", drift_free},
      {"exp-Golomb golden vectors", exp_golomb_golden},
      {"rotation/projection invariants", rotation_projection},
      {"eye recalibration endpoints", eye_endpoints},
      {"flow exactness", flow_exactness},
      {"bitrate sanity", bitrate},
      {"edit locality", edit_locality},
      {"container fuzzing", container_fuzz},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-32s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
