#include "bfe/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>

#include "bfe/error.hpp"

namespace bfe {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) fail(ErrorKind::Parse, "PNM: truncated header");
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) fail(ErrorKind::Parse, "PNM: malformed header");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) fail(ErrorKind::Parse, "PNM: header value too large");
      ++pos_;
    }
    return value;
  }

  std::size_t& pos() { return pos_; }
  std::string_view bytes() const { return bytes_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PnmImage load_pnm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') fail(ErrorKind::Parse, "PNM: missing magic number");
  const char kind = bytes[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    fail(ErrorKind::Parse, std::string("PNM: unsupported magic P") + kind);
  }
  const bool color = kind == '3' || kind == '6';
  const bool binary = kind == '5' || kind == '6';

  HeaderReader in(bytes.substr(2));
  if (in.bytes().empty() || (!std::isspace(static_cast<unsigned char>(in.bytes()[0])) && in.bytes()[0] != '#')) {
    fail(ErrorKind::Parse, "PNM: malformed header");
  }
  const long width = in.number();
  const long height = in.number();
  const long maxval = in.number();
  if (width <= 0 || height <= 0) fail(ErrorKind::Parse, "PNM: non-positive dimensions");
  if (maxval <= 0 || maxval > 65535) fail(ErrorKind::Parse, "PNM: maxval out of range (1..65535)");

  const std::size_t channels = color ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  std::vector<double> samples(count);
  const double scale = 255.0 / static_cast<double>(maxval);

  if (binary) {
    std::size_t& pos = in.pos();
    if (pos >= in.bytes().size() || !std::isspace(static_cast<unsigned char>(in.bytes()[pos]))) {
      fail(ErrorKind::Parse, "PNM: missing whitespace after maxval");
    }
    ++pos;
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (in.bytes().size() - pos < count * bytes_per) fail(ErrorKind::Parse, "PNM: truncated payload");
    const auto* raw = reinterpret_cast<const unsigned char*>(in.bytes().data() + pos);
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned v = bytes_per == 2 ? (raw[2 * i] << 8u) | raw[2 * i + 1] : raw[i];
      if (static_cast<long>(v) > maxval) fail(ErrorKind::Parse, "PNM: sample exceeds maxval");
      samples[i] = maxval == 255 ? static_cast<double>(v) : v * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      in.skip_space_and_comments();
      if (in.pos() >= in.bytes().size()) fail(ErrorKind::Parse, "PNM: truncated payload");
      const long v = in.number();
      if (v > maxval) fail(ErrorKind::Parse, "PNM: sample exceeds maxval");
      samples[i] = maxval == 255 ? static_cast<double>(v) : static_cast<double>(v) * scale;
    }
  }

  const int w = static_cast<int>(width);
  const int h = static_cast<int>(height);
  if (!color) {
    GrayImage img(w, h);
    img.data = std::move(samples);
    return img;
  }
  RgbImage rgb{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (std::size_t i = 0; i < rgb.r.data.size(); ++i) {
    rgb.r.data[i] = samples[3 * i];
    rgb.g.data[i] = samples[3 * i + 1];
    rgb.b.data[i] = samples[3 * i + 2];
  }
  return rgb;
}

GrayImage load_gray(const std::filesystem::path& path) {
  auto img = load_pnm(read_file(path));
  if (auto* rgb = std::get_if<RgbImage>(&img)) return rgb_to_gray(rgb->r, rgb->g, rgb->b);
  return std::get<GrayImage>(std::move(img));
}

namespace {

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
}

std::string encode(const std::vector<const GrayImage*>& channels, bool binary) {
  const GrayImage& first = *channels.front();
  const bool color = channels.size() == 3;
  std::string out = std::string(binary ? (color ? "P6" : "P5") : (color ? "P3" : "P2")) + "\n" +
                    std::to_string(first.width) + " " + std::to_string(first.height) + "\n255\n";
  const std::size_t n = first.data.size();
  if (binary) {
    out.reserve(out.size() + n * channels.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto* c : channels) out.push_back(static_cast<char>(to_byte(c->data[i])));
    }
  } else {
    std::size_t on_line = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto* c : channels) {
        out += std::to_string(static_cast<int>(to_byte(c->data[i])));
        out.push_back(++on_line % 16 == 0 ? '\n' : ' ');
      }
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace

std::string save_pgm(const GrayImage& img, bool binary) { return encode({&img}, binary); }

std::string save_ppm(const RgbImage& img, bool binary) {
  if (!img.r.same_shape(img.g) || !img.r.same_shape(img.b)) fail(ErrorKind::InvalidArgument, "save_ppm: channel size mismatch");
  return encode({&img.r, &img.g, &img.b}, binary);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace bfe
