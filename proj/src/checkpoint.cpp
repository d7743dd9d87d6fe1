#include <bit>
#include <cstring>
#include <fstream>

#include "hypermp/error.hpp"
#include "hypermp/model.hpp"

namespace hypermp {

namespace {

constexpr char kMagic[8] = {'H', 'M', 'P', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("truncated checkpoint");
  return value;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.kind));
  put<std::uint64_t>(out, model.dims.in_features);
  put<std::uint64_t>(out, model.dims.width);
  put<std::uint64_t>(out, model.dims.mlp_hidden);
  put<std::uint64_t>(out, model.dims.layers);
  put<std::uint64_t>(out, model.dims.classes);
  put<double>(out, model.dropout);
  put<std::uint64_t>(out, model.params.size());
  out.write(reinterpret_cast<const char*>(model.params.data()),
            static_cast<std::streamsize>(model.params.size() * sizeof(double)));
  if (!out) throw Error("write failed: " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(path.string() + ": not a checkpoint (bad magic)");
  }
  if (get<std::uint32_t>(in) != kVersion) throw ParseError("unsupported checkpoint version");
  auto kind = get<std::uint32_t>(in);
  if (kind > static_cast<std::uint32_t>(ModelKind::kMlpCb)) throw ParseError("unknown model kind");
  ModelDims dims;
  dims.in_features = get<std::uint64_t>(in);
  dims.width = get<std::uint64_t>(in);
  dims.mlp_hidden = get<std::uint64_t>(in);
  dims.layers = get<std::uint64_t>(in);
  dims.classes = get<std::uint64_t>(in);
  double dropout = get<double>(in);
  auto count = get<std::uint64_t>(in);

  Model m;
  m.kind = static_cast<ModelKind>(kind);
  m.dims = dims;
  m.dropout = dropout;
  m.layout = ParameterLayout::build(m.kind, dims);
  if (count != m.layout.total) throw ParseError("checkpoint parameter count does not match its dims");
  m.params.resize(count);
  in.read(reinterpret_cast<char*>(m.params.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ParseError("truncated checkpoint");
  return m;
}

}  // namespace hypermp
