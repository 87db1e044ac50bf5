#include "flor/volume_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flor/errors.hpp"
#include "json.hpp"

namespace flor {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(sizeof(double) == 8 && sizeof(float) == 4);

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
void byteswap_inplace(T& v) {
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
    std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  v = std::bit_cast<T>(bytes);
}

constexpr bool host_is_little = std::endian::native == std::endian::little;

void write_payload_le(std::ostream& os, const std::vector<double>& values) {
  if constexpr (host_is_little) {
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    for (double v : values) {
      byteswap_inplace(v);
      os.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
  }
}

template <typename T>
std::vector<double> read_payload_le(std::istream& is, std::size_t count,
                                    const std::string& path) {
  std::vector<T> raw(count);
  is.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(count * sizeof(T)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(T))
    throw IoError(path + ": payload shorter than declared sizes");
  char extra;
  if (is.read(&extra, 1))
    throw IoError(path + ": payload longer than declared sizes");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    T v = raw[i];
    if constexpr (!host_is_little) byteswap_inplace(v);
    out[i] = static_cast<double>(v);
  }
  return out;
}

void write_nrrd(const VolumeGrid& g, std::ostream& os) {
  os << "NRRD0004\n";
  os << "# flor volume\n";
  os << "type: double\n";
  os << "dimension: 3\n";
  os << "sizes: " << g.dims[0] << " " << g.dims[1] << " " << g.dims[2] << "\n";
  os << "spacings: " << fmt_double(g.spacing[0]) << " "
     << fmt_double(g.spacing[1]) << " " << fmt_double(g.spacing[2]) << "\n";
  os << "axis mins: " << fmt_double(g.origin[0]) << " "
     << fmt_double(g.origin[1]) << " " << fmt_double(g.origin[2]) << "\n";
  os << "endian: little\n";
  os << "encoding: raw\n";
  os << "\n";
  write_payload_le(os, g.values);
}

std::array<double, 3> parse_three_doubles(const std::string& text,
                                          const std::string& path,
                                          const std::string& field) {
  std::istringstream iss(text);
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i)
    if (!(iss >> out[i]))
      throw IoError(path + ": malformed header field '" + field + "'");
  return out;
}

VolumeGrid read_nrrd(std::istream& is, const std::string& path) {
  std::string magic;
  if (!std::getline(is, magic)) throw IoError(path + ": empty file");
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (!magic.starts_with("NRRD000"))
    throw IoError(path + ": not a NRRD file (bad magic)");

  std::string type, encoding, endian;
  std::array<long, 3> sizes{0, 0, 0};
  std::array<double, 3> spacings{1.0, 1.0, 1.0};
  std::array<double, 3> mins{0.0, 0.0, 0.0};
  int dimension = -1;
  bool have_sizes = false;

  std::string line;
  for (;;) {
    if (!std::getline(is, line))
      throw IoError(path + ": header not terminated by blank line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;        // header/payload separator
    if (line[0] == '#') continue;   // comment
    const auto colon = line.find(": ");
    if (colon == std::string::npos)
      throw IoError(path + ": malformed header line '" + line + "'");
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 2);
    if (key == "type") {
      type = value;
    } else if (key == "dimension") {
      dimension = std::atoi(value.c_str());
    } else if (key == "sizes") {
      std::istringstream iss(value);
      for (int i = 0; i < 3; ++i)
        if (!(iss >> sizes[i]))
          throw IoError(path + ": malformed header field 'sizes'");
      have_sizes = true;
    } else if (key == "spacings") {
      spacings = parse_three_doubles(value, path, "spacings");
    } else if (key == "axis mins") {
      mins = parse_three_doubles(value, path, "axis mins");
    } else if (key == "encoding") {
      encoding = value;
    } else if (key == "endian") {
      endian = value;
    }
    // unknown fields are skipped; this reader is a subset of the format
  }

  if (dimension != 3)
    throw IoError(path + ": unsupported dimension (want 3)");
  if (!have_sizes) throw IoError(path + ": missing sizes field");
  if (encoding != "raw")
    throw IoError(path + ": unsupported encoding '" + encoding + "'");
  if (endian != "" && endian != "little")
    throw IoError(path + ": unsupported endian '" + endian + "'");
  if (sizes[0] <= 0 || sizes[1] <= 0 || sizes[2] <= 0)
    throw IoError(path + ": non-positive sizes");

  VolumeGrid g;
  g.dims = {static_cast<int>(sizes[0]), static_cast<int>(sizes[1]),
            static_cast<int>(sizes[2])};
  g.spacing = spacings;
  g.origin = mins;
  const std::size_t count =
      static_cast<std::size_t>(sizes[0]) * sizes[1] * sizes[2];
  if (type == "double") {
    g.values = read_payload_le<double>(is, count, path);
  } else if (type == "float") {
    g.values = read_payload_le<float>(is, count, path);
  } else {
    throw IoError(path + ": unsupported type '" + type + "'");
  }
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return g;
}

void write_raw(const VolumeGrid& g, const std::string& payload_path,
               std::ostream& os) {
  write_payload_le(os, g.values);
  json sidecar;
  sidecar["dims"] = g.dims;
  sidecar["spacing"] = g.spacing;
  sidecar["origin"] = g.origin;
  const std::string side_path = payload_path + ".json";
  const std::string tmp = side_path + ".tmp";
  {
    std::ofstream sf(tmp, std::ios::trunc);
    if (!sf) throw IoError("cannot write " + side_path);
    sf << sidecar.dump(2) << "\n";
    if (!sf.good()) throw IoError("failed writing " + side_path);
  }
  fs::rename(tmp, side_path);
}

VolumeGrid read_raw(std::istream& is, const std::string& path) {
  const std::string side_path = path + ".json";
  std::ifstream sf(side_path);
  if (!sf) throw IoError("missing sidecar " + side_path);
  json sidecar;
  try {
    sf >> sidecar;
  } catch (const json::exception& e) {
    throw IoError(side_path + ": " + e.what());
  }
  VolumeGrid g;
  try {
    g.dims = sidecar.at("dims").get<std::array<int, 3>>();
    g.spacing = sidecar.at("spacing").get<Vec3>();
    g.origin = sidecar.at("origin").get<Vec3>();
  } catch (const json::exception& e) {
    throw IoError(side_path + ": " + e.what());
  }
  if (g.dims[0] <= 0 || g.dims[1] <= 0 || g.dims[2] <= 0)
    throw IoError(side_path + ": non-positive dims");
  const std::size_t count =
      static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2];
  g.values = read_payload_le<double>(is, count, path);
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return g;
}

}  // namespace

VolumeFormat detect_format(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".nrrd" || ext == ".nhdr") return VolumeFormat::nrrd;
  return VolumeFormat::raw;
}

VolumeGrid load_volume(const std::string& path, VolumeFormat format) {
  if (format == VolumeFormat::auto_detect) format = detect_format(path);
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return format == VolumeFormat::nrrd ? read_nrrd(is, path)
                                      : read_raw(is, path);
}

void save_volume(const VolumeGrid& grid, const std::string& path,
                 VolumeFormat format) {
  grid.validate();
  if (format == VolumeFormat::auto_detect) format = detect_format(path);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path);
    if (format == VolumeFormat::nrrd)
      write_nrrd(grid, os);
    else
      write_raw(grid, path, os);
    if (!os.good()) throw IoError("failed writing " + path);
  }
  fs::rename(tmp, path);
}

}  // namespace flor
