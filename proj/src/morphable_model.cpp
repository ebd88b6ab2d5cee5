#include "ifvc/morphable_model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "ifvc/delaunay.hpp"
#include "ifvc/errors.hpp"
#include "ifvc/file_io.hpp"

namespace ifvc {

namespace {

constexpr char kModelMagic[4] = {'M', 'M', 'B', '1'};

void check_basis(const Eigen::MatrixXd& basis, Eigen::Index n, const char* what) {
  if (basis.rows() != 3 * n) {
    throw DimensionError(std::string(what) + " basis has " + std::to_string(basis.rows()) + " rows, expected " +
                         std::to_string(3 * n));
  }
  if (!basis.allFinite()) throw DimensionError(std::string(what) + " basis contains non-finite values");
}

// Array table entry names in blob order.
struct NamedArray {
  const char* name;
  Eigen::Index rows;
  Eigen::Index cols;
  const double* data;
};

std::vector<NamedArray> arrays_of(const MorphableModel& m) {
  return {
      {"mean_shape", m.mean_shape.rows(), m.mean_shape.cols(), m.mean_shape.data()},
      {"mean_texture", m.mean_texture.rows(), m.mean_texture.cols(), m.mean_texture.data()},
      {"id_basis", m.id_basis.rows(), m.id_basis.cols(), m.id_basis.data()},
      {"exp_basis", m.exp_basis.rows(), m.exp_basis.cols(), m.exp_basis.data()},
      {"alb_basis", m.alb_basis.rows(), m.alb_basis.cols(), m.alb_basis.data()},
      {"illum_basis", m.illum_basis.rows(), m.illum_basis.cols(), m.illum_basis.data()},
  };
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{p[i]} << (8 * i);
  return std::bit_cast<double>(bits);
}

template <typename Matrix>
void read_array(const nlohmann::json& table, const char* name, std::span<const std::uint8_t> blob, Matrix& out) {
  if (!table.contains(name)) throw ParseError(std::string("model header lacks array ") + name);
  const auto& entry = table.at(name);
  const auto rows = entry.at("rows").get<std::int64_t>();
  const auto cols = entry.at("cols").get<std::int64_t>();
  const auto offset = entry.at("offset").get<std::uint64_t>();
  if (rows < 0 || cols < 0 || rows > (1 << 24) || cols > (1 << 24)) {
    throw ParseError(std::string("bad shape for ") + name);
  }
  if (Matrix::RowsAtCompileTime != Eigen::Dynamic && rows != Matrix::RowsAtCompileTime) {
    throw ParseError(std::string(name) + " must have " + std::to_string(Matrix::RowsAtCompileTime) + " rows");
  }
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  if (offset % 8 != 0 || offset > blob.size() || count > (blob.size() - offset) / 8) {
    throw ParseError(std::string("array ") + name + " lies outside the data blob");
  }
  out.resize(rows, cols);
  const std::uint8_t* p = blob.data() + offset;
  for (std::uint64_t i = 0; i < count; ++i) out.data()[i] = get_f64(p + 8 * i);
}

// Raw-engine helpers so the model does not depend on library distributions.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double signed_unit(std::mt19937_64& rng) { return 2.0 * unit(rng) - 1.0; }

}  // namespace

void validate(const MorphableModel& model) {
  const Eigen::Index n = model.vertex_count();
  if (n < 3) throw DimensionError("model needs at least three vertices");
  if (model.mean_texture.cols() != n) throw DimensionError("mean texture and mean shape vertex counts differ");
  if (!model.mean_shape.allFinite() || !model.mean_texture.allFinite()) {
    throw DimensionError("model means contain non-finite values");
  }
  check_basis(model.id_basis, n, "identity");
  check_basis(model.exp_basis, n, "expression");
  check_basis(model.alb_basis, n, "albedo");
  check_basis(model.illum_basis, n, "illumination");
  for (const auto& t : model.triangles) {
    for (const int i : t) {
      if (i < 0 || i >= n) throw DimensionError("triangle index " + std::to_string(i) + " out of range");
    }
  }
  for (const auto& region : model.eye_regions) {
    for (const int i : region) {
      if (i < 0 || i >= n) throw DimensionError("eye region index " + std::to_string(i) + " out of range");
    }
  }
}

std::vector<std::uint8_t> serialize_model(const MorphableModel& model) {
  validate(model);
  nlohmann::json table = nlohmann::json::object();
  std::vector<std::uint8_t> blob;
  for (const auto& a : arrays_of(model)) {
    table[a.name] = {{"rows", a.rows}, {"cols", a.cols}, {"offset", blob.size()}};
    for (Eigen::Index i = 0; i < a.rows * a.cols; ++i) put_f64(blob, a.data[i]);
  }
  const nlohmann::json header{
      {"name", model.name},
      {"vertex_count", model.vertex_count()},
      {"triangles", model.triangles},
      {"eye_regions", {model.eye_regions[0], model.eye_regions[1]}},
      {"arrays", table},
  };
  const std::string text = header.dump();
  std::vector<std::uint8_t> out(kModelMagic, kModelMagic + 4);
  const auto len = static_cast<std::uint32_t>(text.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), blob.begin(), blob.end());
  return out;
}

MorphableModel parse_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw ParseError("not a morphable model file (bad magic)");
  }
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= std::uint32_t{bytes[4 + i]} << (8 * i);
  if (len > bytes.size() - 8) throw ParseError("model header length exceeds file size");
  const auto header_bytes = bytes.subspan(8, len);
  const auto blob = bytes.subspan(8 + static_cast<std::size_t>(len));

  MorphableModel model;
  try {
    const auto header = nlohmann::json::parse(header_bytes.begin(), header_bytes.end());
    model.name = header.at("name").get<std::string>();
    const auto& table = header.at("arrays");
    read_array(table, "mean_shape", blob, model.mean_shape);
    read_array(table, "mean_texture", blob, model.mean_texture);
    read_array(table, "id_basis", blob, model.id_basis);
    read_array(table, "exp_basis", blob, model.exp_basis);
    read_array(table, "alb_basis", blob, model.alb_basis);
    read_array(table, "illum_basis", blob, model.illum_basis);
    model.triangles = header.at("triangles").get<std::vector<std::array<int, 3>>>();
    const auto& eyes = header.at("eye_regions");
    if (!eyes.is_array() || eyes.size() != 2) throw ParseError("eye_regions must list two index sets");
    model.eye_regions[0] = eyes[0].get<std::vector<int>>();
    model.eye_regions[1] = eyes[1].get<std::vector<int>>();
    if (header.at("vertex_count").get<std::int64_t>() != model.vertex_count()) {
      throw ParseError("vertex_count does not match mean_shape");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model header: ") + e.what());
  }
  validate(model);
  return model;
}

MorphableModel load_model(const std::filesystem::path& path) {
  const Bytes bytes = read_file_bytes(path);
  return parse_model(bytes);
}

void save_model(const MorphableModel& model, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_model(model));
}

MorphableModel make_synthetic_model() {
  constexpr double kHalfWidth = 2.0;
  constexpr double kHalfHeight = 2.5;
  const Eigen::Vector2d eye_centre[2] = {{-0.8, -0.6}, {0.8, -0.6}};
  const Eigen::Vector2d mouth_centre{0.0, 1.2};
  constexpr double pi = std::numbers::pi;

  std::vector<Eigen::Vector2d> pts;
  std::array<std::vector<int>, 2> eyes;
  std::vector<int> mouth;

  // Outline.
  for (int i = 0; i < 24; ++i) {
    const double a = 2.0 * pi * i / 24;
    pts.emplace_back(kHalfWidth * std::cos(a), kHalfHeight * std::sin(a));
  }
  // Eye rings and mouth ring.
  for (int e = 0; e < 2; ++e) {
    for (int i = 0; i < 8; ++i) {
      const double a = 2.0 * pi * i / 8;
      eyes[e].push_back(static_cast<int>(pts.size()));
      pts.push_back(eye_centre[e] + Eigen::Vector2d(0.4 * std::cos(a), 0.2 * std::sin(a)));
    }
  }
  for (int i = 0; i < 10; ++i) {
    const double a = 2.0 * pi * i / 10;
    mouth.push_back(static_cast<int>(pts.size()));
    pts.push_back(mouth_centre + Eigen::Vector2d(0.6 * std::cos(a), 0.25 * std::sin(a)));
  }
  // Interior grid away from the features.
  auto inside = [](Eigen::Vector2d d, double rx, double ry) { return std::pow(d.x() / rx, 2) + std::pow(d.y() / ry, 2) < 1.0; };
  for (int gy = -9; gy <= 9; ++gy) {
    for (int gx = -7; gx <= 7; ++gx) {
      const Eigen::Vector2d p(0.25 * gx + 0.125 * (gy & 1), 0.25 * gy);
      if (!inside(p, kHalfWidth * 0.88, kHalfHeight * 0.88)) continue;
      if (inside(p - eye_centre[0], 0.6, 0.4) || inside(p - eye_centre[1], 0.6, 0.4)) continue;
      if (inside(p - mouth_centre, 0.8, 0.45)) continue;
      if ((gx + gy) % 2 != 0) continue;
      pts.push_back(p);
    }
  }

  const auto n = static_cast<Eigen::Index>(pts.size());
  MorphableModel model;
  model.name = "synthetic";
  model.mean_shape.resize(3, n);
  model.mean_texture.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    const double r2 = std::pow(p.x() / kHalfWidth, 2) + std::pow(p.y() / kHalfHeight, 2);
    model.mean_shape.col(i) << p.x(), p.y(), -0.8 * std::max(0.0, 1.0 - r2);
    model.mean_texture.col(i) << 0.82 - 0.1 * r2, 0.64 - 0.1 * r2, 0.52 - 0.08 * r2;
  }
  for (const auto& region : eyes) {
    for (const int i : region) model.mean_texture.col(i) << 0.25, 0.2, 0.2;
  }
  for (const int i : mouth) model.mean_texture.col(i) << 0.7, 0.25, 0.25;

  model.triangles = delaunay_triangulate(pts).triangles;
  model.eye_regions = eyes;

  std::mt19937_64 rng(0x1f2e3d4c5b6a7988ULL);

  // Identity: smooth polynomial deformations.
  model.id_basis.setZero(3 * n, 10);
  for (Eigen::Index k = 0; k < 10; ++k) {
    double c[3][6];
    for (auto& axis : c) {
      for (double& v : axis) v = 0.05 * signed_unit(rng);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = model.mean_shape(0, i) / kHalfWidth, y = model.mean_shape(1, i) / kHalfHeight;
      const double terms[6] = {1.0, x, y, x * y, x * x, y * y};
      for (int a = 0; a < 3; ++a) {
        double s = 0.0;
        for (int t = 0; t < 6; ++t) s += c[a][t] * terms[t];
        model.id_basis(3 * i + a, k) = s;
      }
    }
  }

  // Expression: six mouth controls, then small localized random fields.
  model.exp_basis.setZero(3 * n, 64);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d d = model.mean_shape.col(i).head<2>() - mouth_centre;
    const double w = std::exp(-d.squaredNorm() / 0.5);
    const double below = d.y() > 0.0 ? 1.0 : (d.y() < 0.0 ? 0.0 : 0.5);
    const double sx = d.x() > 0.0 ? 1.0 : (d.x() < 0.0 ? -1.0 : 0.0);
    // jaw open
    model.exp_basis(3 * i + 1, 0) = 0.4 * w * below + (d.y() > 0.0 ? 0.2 * std::exp(-d.x() * d.x()) * std::min(1.0, d.y()) : 0.0);
    // smile
    model.exp_basis(3 * i + 0, 1) = 0.2 * w * sx * std::abs(d.x());
    model.exp_basis(3 * i + 1, 1) = -0.15 * w * std::abs(d.x());
    // pucker
    model.exp_basis(3 * i + 0, 2) = -0.3 * w * d.x();
    model.exp_basis(3 * i + 1, 2) = -0.3 * w * d.y();
    model.exp_basis(3 * i + 2, 2) = -0.15 * w;
    // upper lip, lower lip
    model.exp_basis(3 * i + 1, 3) = -0.15 * w * (1.0 - below);
    model.exp_basis(3 * i + 1, 4) = 0.15 * w * below;
    // lateral shift
    model.exp_basis(3 * i + 0, 5) = 0.15 * w;
  }
  for (Eigen::Index k = 6; k < 64; ++k) {
    const Eigen::Vector2d centre(kHalfWidth * signed_unit(rng) * 0.7, kHalfHeight * signed_unit(rng) * 0.7);
    const Eigen::Vector3d dir(signed_unit(rng), signed_unit(rng), signed_unit(rng));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = std::exp(-(model.mean_shape.col(i).head<2>() - centre).squaredNorm() / 0.3);
      model.exp_basis.block<3, 1>(3 * i, k) = 0.02 * w * dir;
    }
  }

  // Albedo: smooth colour variation; illumination: low-order shading terms.
  model.alb_basis.setZero(3 * n, 10);
  for (Eigen::Index k = 0; k < 10; ++k) {
    double c[3][3];
    for (auto& ch : c) {
      for (double& v : ch) v = 0.04 * signed_unit(rng);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = model.mean_shape(0, i) / kHalfWidth, y = model.mean_shape(1, i) / kHalfHeight;
      for (int a = 0; a < 3; ++a) model.alb_basis(3 * i + a, k) = c[a][0] + c[a][1] * x + c[a][2] * y;
    }
  }
  model.illum_basis.setZero(3 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = model.mean_shape(0, i) / kHalfWidth, y = model.mean_shape(1, i) / kHalfHeight;
    const double z = -model.mean_shape(2, i) / 0.8;
    const double sh[9] = {1.0, y, z, x, x * y, y * z, 3 * z * z - 1, x * z, x * x - y * y};
    for (int k = 0; k < 9; ++k) {
      for (int a = 0; a < 3; ++a) model.illum_basis(3 * i + a, k) = 0.05 * sh[k];
    }
  }

  validate(model);
  return model;
}

}  // namespace ifvc
