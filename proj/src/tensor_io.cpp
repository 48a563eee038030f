#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "ii/imaging.hpp"

namespace ii {

namespace {

constexpr char kMagic[4] = {'I', 'T', 'N', 'S'};
constexpr std::uint8_t kVersion = 1;

void put_u32_le(std::ostream& os, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void put_f64_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::size_t Tensor::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
  if (t.dims.size() > 255) throw ShapeError("tensor rank exceeds 255");
  if (t.data.size() != t.element_count())
    throw ShapeError("tensor payload does not match its dimensions");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");

  os.write(kMagic, 4);
  os.put(static_cast<char>(kVersion));
  os.put(static_cast<char>(t.dims.size()));
  for (std::uint32_t d : t.dims) put_u32_le(os, d);
  for (double v : t.data) put_f64_le(os, v);
  os.flush();
  if (!os) throw IoError("short write to '" + path.string() + "'");
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingFileError("cannot open '" + path.string() + "'");

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("'" + path.string() + "' is not an ITNS tensor file");

  const int version = is.get();
  if (version != kVersion)
    throw FormatError("unsupported ITNS version " + std::to_string(version));

  const int rank = is.get();
  if (rank < 0 || !is) throw FormatError("truncated ITNS header");

  Tensor t;
  t.dims.resize(rank);
  for (int i = 0; i < rank; ++i) t.dims[i] = get_u32_le(is);
  if (!is) throw FormatError("truncated ITNS header");

  std::size_t count = 1;
  for (std::uint32_t d : t.dims) {
    if (d != 0 && count > std::numeric_limits<std::size_t>::max() / d)
      throw FormatError("ITNS dimensions overflow");
    count *= d;
  }

  t.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) t.data[i] = get_f64_le(is);
  if (!is) throw FormatError("ITNS payload shorter than its dimension header");

  // A well-formed file ends exactly after the payload.
  is.peek();
  if (!is.eof()) throw FormatError("trailing bytes after ITNS payload");
  return t;
}

}  // namespace ii
