#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <cctype>

#include <json.hpp>

#include "floorscan/error.hpp"
#include "floorscan/mesh.hpp"
#include "format_util.hpp"

namespace floorscan {
namespace {

constexpr std::string_view kProvenanceTag = "provenance:";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    parse_fail(line, "bad number '" + std::string(tok) + "'");
  }
  return v;
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    parse_fail(line, "bad index '" + std::string(tok) + "'");
  }
  return v;
}

void add_polygon(TriangleMesh& mesh, const std::vector<std::uint32_t>& poly, std::size_t line) {
  if (poly.size() < 3) parse_fail(line, "face needs at least 3 vertices");
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const Face f{poly[0], poly[i], poly[i + 1]};
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) parse_fail(line, "face repeats a vertex");
    mesh.faces.push_back(f);
  }
}

// --- PLY ---------------------------------------------------------------

enum class PlyType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

PlyType ply_type(std::string_view name, std::size_t line) {
  if (name == "char" || name == "int8") return PlyType::kInt8;
  if (name == "uchar" || name == "uint8") return PlyType::kUint8;
  if (name == "short" || name == "int16") return PlyType::kInt16;
  if (name == "ushort" || name == "uint16") return PlyType::kUint16;
  if (name == "int" || name == "int32") return PlyType::kInt32;
  if (name == "uint" || name == "uint32") return PlyType::kUint32;
  if (name == "float" || name == "float32") return PlyType::kFloat32;
  if (name == "double" || name == "float64") return PlyType::kFloat64;
  parse_fail(line, "unknown PLY type '" + std::string(name) + "'");
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::kInt8:
    case PlyType::kUint8: return 1;
    case PlyType::kInt16:
    case PlyType::kUint16: return 2;
    case PlyType::kInt32:
    case PlyType::kUint32:
    case PlyType::kFloat32: return 4;
    case PlyType::kFloat64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::kFloat32;
  bool is_list = false;
  PlyType count_type = PlyType::kUint8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

class PlyReader {
 public:
  PlyReader(std::string_view data, bool ascii, bool big_endian)
      : data_(data), ascii_(ascii), swap_(big_endian != (std::endian::native == std::endian::big)) {}

  double read(PlyType t) {
    if (ascii_) return read_ascii();
    const std::size_t n = ply_size(t);
    if (pos_ + n > data_.size()) throw Error(ErrorCode::kParse, "PLY body truncated");
    unsigned char buf[8];
    std::memcpy(buf, data_.data() + pos_, n);
    pos_ += n;
    if (swap_) std::reverse(buf, buf + n);
    switch (t) {
      case PlyType::kInt8: return static_cast<double>(std::bit_cast<std::int8_t>(buf[0]));
      case PlyType::kUint8: return static_cast<double>(buf[0]);
      case PlyType::kInt16: return load<std::int16_t>(buf);
      case PlyType::kUint16: return load<std::uint16_t>(buf);
      case PlyType::kInt32: return load<std::int32_t>(buf);
      case PlyType::kUint32: return load<std::uint32_t>(buf);
      case PlyType::kFloat32: return load<float>(buf);
      case PlyType::kFloat64: return load<double>(buf);
    }
    return 0.0;
  }

  /// Line number of the current ASCII record (1-based, counted from body start).
  std::size_t line() const { return line_; }
  std::size_t header_lines = 0;

 private:
  template <typename T>
  static double load(const unsigned char* buf) {
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return static_cast<double>(v);
  }

  double read_ascii() {
    while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      if (data_[pos_] == '\n') ++line_;
      ++pos_;
    }
    const std::size_t b = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (b == pos_) throw Error(ErrorCode::kParse, "PLY body truncated");
    return parse_double(data_.substr(b, pos_ - b), header_lines + line_);
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  bool ascii_;
  bool swap_;
};

TriangleMesh parse_ply(std::string_view text, double unit_scale) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::string_view {
    if (pos >= text.size()) throw Error(ErrorCode::kParse, "PLY header not terminated");
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    auto l = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return trim(l);
  };

  if (next_line() != "ply") parse_fail(1, "missing 'ply' magic");
  bool ascii = true;
  bool big_endian = false;
  std::vector<PlyElement> elements;
  TriangleMesh mesh;
  for (;;) {
    const auto l = next_line();
    const auto tok = split_ws(l);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() < 2) parse_fail(line_no, "bad format line");
      if (tok[1] == "ascii") {
        ascii = true;
      } else if (tok[1] == "binary_little_endian") {
        ascii = false;
      } else if (tok[1] == "binary_big_endian") {
        ascii = false;
        big_endian = true;
      } else {
        parse_fail(line_no, "unknown PLY format");
      }
    } else if (tok[0] == "comment") {
      const auto rest = trim(l.substr(std::string_view("comment").size()));
      if (rest.starts_with(kProvenanceTag)) mesh.provenance = trim(rest.substr(kProvenanceTag.size()));
    } else if (tok[0] == "element") {
      if (tok.size() != 3) parse_fail(line_no, "bad element line");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(parse_int(tok[2], line_no)), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) parse_fail(line_no, "property before element");
      PlyProperty prop;
      if (tok.size() == 5 && tok[1] == "list") {
        prop.is_list = true;
        prop.count_type = ply_type(tok[2], line_no);
        prop.type = ply_type(tok[3], line_no);
        prop.name = tok[4];
      } else if (tok.size() == 3) {
        prop.type = ply_type(tok[1], line_no);
        prop.name = tok[2];
      } else {
        parse_fail(line_no, "bad property line");
      }
      elements.back().properties.push_back(prop);
    } else if (tok[0] != "obj_info") {
      parse_fail(line_no, "unexpected header keyword '" + std::string(tok[0]) + "'");
    }
  }

  PlyReader reader(text.substr(std::min(pos, text.size())), ascii, big_endian);
  reader.header_lines = line_no;
  std::vector<std::uint32_t> poly;
  for (const PlyElement& el : elements) {
    const bool is_vertex = el.name == "vertex";
    const bool is_face = el.name == "face";
    for (std::size_t i = 0; i < el.count; ++i) {
      Vec3 v;
      for (const PlyProperty& prop : el.properties) {
        if (prop.is_list) {
          const auto n = static_cast<std::size_t>(reader.read(prop.count_type));
          const bool indices =
              is_face && (prop.name == "vertex_indices" || prop.name == "vertex_index");
          poly.clear();
          for (std::size_t k = 0; k < n; ++k) {
            const double idx = reader.read(prop.type);
            if (indices) {
              if (idx < 0 || idx >= static_cast<double>(mesh.vertices.size())) {
                throw Error(ErrorCode::kParse, "PLY face " + std::to_string(i) +
                                                   ": vertex index out of range");
              }
              poly.push_back(static_cast<std::uint32_t>(idx));
            }
          }
          if (indices) add_polygon(mesh, poly, ascii ? reader.header_lines + reader.line() : i);
        } else {
          const double value = reader.read(prop.type);
          if (is_vertex) {
            if (prop.name == "x") v.x = value * unit_scale;
            if (prop.name == "y") v.y = value * unit_scale;
            if (prop.name == "z") v.z = value * unit_scale;
          }
        }
      }
      if (is_vertex) mesh.vertices.push_back(v);
    }
  }
  return mesh;
}

}  // namespace

TriangleMesh parse_obj(std::string_view text, double unit_scale) {
  TriangleMesh mesh;
  std::vector<std::uint32_t> poly;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string_view l = trim(raw);
    if (l.empty()) continue;
    if (l[0] == '#') {
      const auto rest = trim(l.substr(1));
      if (rest.starts_with(kProvenanceTag)) mesh.provenance = trim(rest.substr(kProvenanceTag.size()));
      continue;
    }
    const auto tok = split_ws(l);
    if (tok[0] == "v") {
      if (tok.size() < 4) parse_fail(line_no, "vertex needs 3 coordinates");
      mesh.vertices.push_back({parse_double(tok[1], line_no) * unit_scale,
                               parse_double(tok[2], line_no) * unit_scale,
                               parse_double(tok[3], line_no) * unit_scale});
    } else if (tok[0] == "f") {
      poly.clear();
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto slash = tok[i].find('/');
        long long idx = parse_int(tok[i].substr(0, slash), line_no);
        const auto n = static_cast<long long>(mesh.vertices.size());
        if (idx < 0) idx += n + 1;
        if (idx < 1 || idx > n) parse_fail(line_no, "face index out of range");
        poly.push_back(static_cast<std::uint32_t>(idx - 1));
      }
      add_polygon(mesh, poly, line_no);
    }
    // vn, vt, o, g, s, usemtl, mtllib and friends carry nothing we use.
  }
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format, double unit_scale) {
  if (!(unit_scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "unit scale must be positive");
  const std::string text = read_file(path);
  if (format == MeshFormat::kAuto) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".ply" || text.starts_with("ply")) {
      format = MeshFormat::kPly;
    } else {
      format = MeshFormat::kObj;
    }
  }
  TriangleMesh mesh;
  try {
    mesh = format == MeshFormat::kPly ? parse_ply(text, unit_scale) : parse_obj(text, unit_scale);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  if (mesh.provenance.empty()) mesh.provenance = path.filename().string();
  return mesh;
}

std::string format_obj(const TriangleMesh& mesh, std::span<const std::string> header) {
  std::string out;
  out.reserve(mesh.vertices.size() * 48 + mesh.faces.size() * 24);
  for (const auto& h : header) out += "# " + h + "\n";
  if (!mesh.provenance.empty()) out += "# provenance: " + mesh.provenance + "\n";
  for (const Vec3& v : mesh.vertices) {
    out += "v " + detail::shortest(v.x) + " " + detail::shortest(v.y) + " " + detail::shortest(v.z) + "\n";
  }
  for (const Face& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
           std::to_string(f[2] + 1) + "\n";
  }
  return out;
}

void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh,
              std::span<const std::string> header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << format_obj(mesh, header);
}

AnnotationSet parse_annotations(std::string_view json_text) {
  AnnotationSet out;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("annotation JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kParse, "annotation JSON must be an array");
  auto vec = [](const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) {
      throw Error(ErrorCode::kParse, std::string("annotation ") + what + " must be [x,y,z]");
    }
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  };
  for (const auto& item : doc) {
    try {
      Annotation a;
      a.label = item.at("label").get<std::string>();
      a.kind = annotation_kind_from_string(item.value("kind", std::string("other")));
      a.position = vec(item.at("position"), "position");
      const Vec3 facing = item.contains("facing") ? vec(item.at("facing"), "facing") : kUnitX;
      const double len = norm(facing);
      if (!(len > 0.0)) throw Error(ErrorCode::kParse, "annotation facing must be non-zero");
      a.facing = facing / len;
      out.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("annotation JSON: ") + e.what());
    }
  }
  return out;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_file(path));
}

std::string format_annotations(const AnnotationSet& annotations) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Annotation& a : annotations) {
    doc.push_back({{"label", a.label},
                   {"kind", std::string(to_string(a.kind))},
                   {"position", {a.position.x, a.position.y, a.position.z}},
                   {"facing", {a.facing.x, a.facing.y, a.facing.z}}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace floorscan
