#include "morp/mask_io.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "morp/errors.hpp"

namespace morp {
namespace {

struct ByteReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  int get() { return pos < bytes.size() ? bytes[pos++] : -1; }
  int peek() const { return pos < bytes.size() ? bytes[pos] : -1; }

  void skip_ws_and_comments() {
    for (;;) {
      int c = peek();
      if (c == '#') {
        while (c != -1 && c != '\n') c = get();
      } else if (c != -1 && std::isspace(c)) {
        get();
      } else {
        return;
      }
    }
  }

  long read_int() {
    skip_ws_and_comments();
    std::string tok;
    while (peek() != -1 && std::isdigit(peek())) tok.push_back(char(get()));
    if (tok.empty()) throw MalformedImage("expected integer in PNM header");
    return std::stol(tok);
  }
};

struct PnmHeader {
  int magic;  // 5 or 6
  int width, height, maxval;
  std::size_t data_offset;
};

PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes) {
  ByteReader rd{bytes};
  if (rd.get() != 'P') throw MalformedImage("not a PNM image");
  int m = rd.get();
  if (m != '5' && m != '6') throw MalformedImage("unsupported PNM type");
  PnmHeader h;
  h.magic = m - '0';
  h.width = static_cast<int>(rd.read_int());
  h.height = static_cast<int>(rd.read_int());
  h.maxval = static_cast<int>(rd.read_int());
  if (rd.get() == -1) throw MalformedImage("truncated PNM header");
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535)
    throw MalformedImage("bad PNM dimensions");
  h.data_offset = rd.pos;
  return h;
}

}  // namespace

const std::array<Rgb, kNumClasses>& class_palette() {
  static const std::array<Rgb, kNumClasses> palette = {{
      {0, 0, 0},        // sea: black
      {0, 255, 255},    // oil: cyan
      {255, 0, 0},      // look-alike: red
      {165, 42, 42},    // ship: brown
      {0, 255, 0},      // land: green
  }};
  return palette;
}

LabelMap decode_mask(std::span<const std::uint8_t> bytes, MaskFormat format) {
  PnmHeader h = parse_pnm_header(bytes);
  const std::size_t npx = static_cast<std::size_t>(h.width) * h.height;
  LabelMap map(h.width, h.height);

  if (format == MaskFormat::indexed) {
    if (h.magic != 5 || h.maxval > 255)
      throw MalformedImage("indexed mask must be 8-bit P5");
    if (bytes.size() - h.data_offset < npx)
      throw MalformedImage("truncated PGM data");
    for (std::size_t i = 0; i < npx; ++i) {
      std::uint8_t v = bytes[h.data_offset + i];
      if (v >= kNumClasses)
        throw UnknownPixelValue("pixel value " + std::to_string(int(v)) +
                                " outside class range");
      map.data[i] = v;
    }
  } else {
    if (h.magic != 6 || h.maxval != 255)
      throw MalformedImage("palette mask must be 8-bit P6");
    if (bytes.size() - h.data_offset < npx * 3)
      throw MalformedImage("truncated PPM data");
    const auto& pal = class_palette();
    for (std::size_t i = 0; i < npx; ++i) {
      Rgb px{bytes[h.data_offset + 3 * i], bytes[h.data_offset + 3 * i + 1],
             bytes[h.data_offset + 3 * i + 2]};
      int cls = -1;
      for (int c = 0; c < kNumClasses; ++c)
        if (pal[c] == px) cls = c;
      if (cls < 0)
        throw UnknownPixelValue("RGB value not in the class palette");
      map.data[i] = static_cast<std::uint8_t>(cls);
    }
  }
  return map;
}

std::vector<std::uint8_t> encode_mask(const LabelMap& map, MaskFormat format) {
  const std::string dims =
      std::to_string(map.width) + " " + std::to_string(map.height);
  std::vector<std::uint8_t> out;
  if (format == MaskFormat::indexed) {
    std::string header = "P5\n" + dims + "\n255\n";
    out.assign(header.begin(), header.end());
    out.insert(out.end(), map.data.begin(), map.data.end());
  } else {
    std::string header = "P6\n" + dims + "\n255\n";
    out.assign(header.begin(), header.end());
    const auto& pal = class_palette();
    out.reserve(out.size() + map.size() * 3);
    for (std::uint8_t v : map.data) {
      const Rgb& px = pal[v];
      out.push_back(px.r);
      out.push_back(px.g);
      out.push_back(px.b);
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

LabelMap load_mask(const std::filesystem::path& path, MaskFormat format) {
  return decode_mask(read_file_bytes(path), format);
}

void save_mask(const LabelMap& map, const std::filesystem::path& path,
               MaskFormat format) {
  write_file_bytes(path, encode_mask(map, format));
}

Grid<float> load_intensity(const std::filesystem::path& path, double scale) {
  auto bytes = read_file_bytes(path);
  PnmHeader h = parse_pnm_header(bytes);
  if (h.magic != 5 || h.maxval != 65535)
    throw MalformedImage("intensity image must be 16-bit P5");
  const std::size_t npx = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() - h.data_offset < npx * 2)
    throw MalformedImage("truncated intensity data");
  Grid<float> img(h.width, h.height);
  for (std::size_t i = 0; i < npx; ++i) {
    // big-endian per PNM convention
    unsigned v = (unsigned(bytes[h.data_offset + 2 * i]) << 8) |
                 bytes[h.data_offset + 2 * i + 1];
    img.data[i] = static_cast<float>(v / scale);
  }
  return img;
}

void save_intensity(const Grid<float>& img, const std::filesystem::path& path,
                    double scale) {
  std::string header = "P5\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n65535\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.size() * 2);
  for (float v : img.data) {
    double s = v * scale;
    long q = std::lround(s < 0 ? 0.0 : (s > 65535.0 ? 65535.0 : s));
    out.push_back(static_cast<std::uint8_t>((q >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(q & 0xff));
  }
  write_file_bytes(path, out);
}

}  // namespace morp
