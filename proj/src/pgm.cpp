#include "gradsym/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gradsym {

namespace {

class HeaderReader {
public:
  explicit HeaderReader(const std::string& b) : b_(b) {}

  void skip_space() {
    while (pos_ < b_.size()) {
      auto c = static_cast<unsigned char>(b_[pos_]);
      if (c == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_space();
    std::size_t start = pos_;
    long v = 0;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + (b_[pos_] - '0');
      if (v > 1000000) throw ParseError(std::string("PGM ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("PGM: expected ") + what, start);
    return v;
  }

  std::size_t pos_ = 0;

private:
  const std::string& b_;
};

}  // namespace

GridField parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw ParseError("PGM: missing P5 magic", 0);
  HeaderReader r(bytes);
  r.pos_ = 2;
  if (r.pos_ < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[r.pos_])) && bytes[r.pos_] != '#')
    throw ParseError("PGM: expected whitespace after magic", r.pos_);
  long w = r.number("width");
  long h = r.number("height");
  r.skip_space();
  std::size_t maxpos = r.pos_;
  long maxval = r.number("maxval");
  if (maxval != 255) throw ParseError("PGM: maxval must be 255", maxpos);
  if (r.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos_])))
    throw ParseError("PGM: expected a single whitespace byte before the raster", r.pos_);
  ++r.pos_;
  if (w < 3 || h < 3) throw ParseError("PGM: image must be at least 3x3", 2);
  std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - r.pos_ < need) throw ParseError("PGM: raster truncated", bytes.size());
  if (bytes.size() - r.pos_ > need) throw ParseError("PGM: trailing bytes after raster", r.pos_ + need);
  GridField g;
  g.dim = 2;
  g.lo = {0.0, 0.0};
  g.h = {1.0, 1.0};
  g.n = {static_cast<int>(w), static_cast<int>(h)};
  g.values.resize(need);
  for (std::size_t i = 0; i < need; ++i)
    g.values[i] = static_cast<unsigned char>(bytes[r.pos_ + i]) / 255.0;
  return g;
}

GridField read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pgm(ss.str());
}

std::string encode_pgm(const GridField& g) {
  if (g.dim != 2) throw InvalidArgument("PGM needs a 2-D grid");
  std::string out = "P5\n" + std::to_string(g.n[0]) + " " + std::to_string(g.n[1]) + "\n255\n";
  for (double v : g.values) {
    double c = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255))));
  }
  return out;
}

void write_pgm(const GridField& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  auto s = encode_pgm(g);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

}  // namespace gradsym
