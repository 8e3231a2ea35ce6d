#include "mw/cnn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mw/error.hpp"

namespace mw::cnn {

namespace {

constexpr char kMagic[8] = {'M', 'W', 'N', 'E', 'T', '0', '1', '\n'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  if (!in) {
    throw DataError(path + ": checkpoint ends unexpectedly");
  }
  return v;
}

std::string describe(const ModelConfig& cfg) {
  std::ostringstream out;
  out << "in " << cfg.in_channels << " " << cfg.in_h << " " << cfg.in_w << "\n";
  out << "classes " << cfg.classes << "\n";
  for (const ConvBlockSpec& b : cfg.blocks) {
    out << "block " << b.filters << " " << b.kernel << " " << b.stride << " " << b.pad << " "
        << b.pool_window << " " << b.pool_stride << "\n";
  }
  for (int w : cfg.dense_widths) {
    out << "dense " << w << "\n";
  }
  return out.str();
}

ModelConfig parse_description(const std::string& text, const std::string& path) {
  ModelConfig cfg;
  cfg.blocks.clear();
  cfg.dense_widths.clear();
  bool have_in = false, have_classes = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "in") {
      have_in = static_cast<bool>(ls >> cfg.in_channels >> cfg.in_h >> cfg.in_w);
    } else if (key == "classes") {
      have_classes = static_cast<bool>(ls >> cfg.classes);
    } else if (key == "block") {
      ConvBlockSpec b;
      if (!(ls >> b.filters >> b.kernel >> b.stride >> b.pad >> b.pool_window >> b.pool_stride)) {
        throw DataError(path + ": malformed conv block line '" + line + "'");
      }
      cfg.blocks.push_back(b);
    } else if (key == "dense") {
      int w = 0;
      if (!(ls >> w)) {
        throw DataError(path + ": malformed dense line '" + line + "'");
      }
      cfg.dense_widths.push_back(w);
    } else {
      throw DataError(path + ": unknown model description key '" + key + "'");
    }
  }
  if (!have_in || !have_classes) {
    throw DataError(path + ": model description lacks input or class count");
  }
  return cfg;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, Network<float>& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeError("cannot open for writing: " + path.string());
  }
  out.write(kMagic, sizeof kMagic);
  write_u32(out, kVersion);

  std::string desc = describe(net.config());
  write_u32(out, static_cast<std::uint32_t>(desc.size()));
  out.write(desc.data(), static_cast<std::streamsize>(desc.size()));

  auto named = net.named_params();
  write_u32(out, static_cast<std::uint32_t>(named.size()));
  for (auto& [name, tensor] : named) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(out, static_cast<std::uint32_t>(tensor->shape.size()));
    for (int d : tensor->shape) {
      write_u32(out, static_cast<std::uint32_t>(d));
    }
    out.write(reinterpret_cast<const char*>(tensor->data.data()),
              static_cast<std::streamsize>(tensor->size() * sizeof(float)));
  }
  out.flush();
  if (!out) {
    throw RuntimeError("failed writing checkpoint to " + path.string());
  }
}

Network<float> load_checkpoint(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open checkpoint: " + name);
  }
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw DataError(name + ": not a parameter checkpoint");
  }
  std::uint32_t version = read_u32(in, name);
  if (version != kVersion) {
    throw DataError(name + ": unsupported checkpoint version " + std::to_string(version));
  }

  std::uint32_t desc_len = read_u32(in, name);
  if (desc_len > (1u << 20)) {
    throw DataError(name + ": implausible model description size");
  }
  std::string desc(desc_len, '\0');
  in.read(desc.data(), desc_len);
  if (!in) {
    throw DataError(name + ": checkpoint ends inside the model description");
  }

  Network<float> net(parse_description(desc, name));
  auto named = net.named_params();

  std::uint32_t count = read_u32(in, name);
  if (count != named.size()) {
    throw DataError(name + ": manifest lists " + std::to_string(count) + " tensors, model has " +
                    std::to_string(named.size()));
  }
  for (std::uint32_t t = 0; t < count; ++t) {
    std::uint32_t name_len = read_u32(in, name);
    if (name_len > 256) {
      throw DataError(name + ": implausible tensor name length");
    }
    std::string tensor_name(name_len, '\0');
    in.read(tensor_name.data(), name_len);
    std::uint32_t ndim = read_u32(in, name);
    if (!in || ndim > 8) {
      throw DataError(name + ": bad tensor header for entry " + std::to_string(t));
    }
    std::vector<int> shape(ndim);
    for (std::uint32_t d = 0; d < ndim; ++d) {
      shape[d] = static_cast<int>(read_u32(in, name));
    }
    if (tensor_name != named[t].first || shape != named[t].second->shape) {
      throw DataError(name + ": tensor '" + tensor_name + "' does not match model layout");
    }
    in.read(reinterpret_cast<char*>(named[t].second->data.data()),
            static_cast<std::streamsize>(named[t].second->size() * sizeof(float)));
    if (!in) {
      throw DataError(name + ": truncated payload for tensor '" + tensor_name + "'");
    }
  }
  return net;
}

}  // namespace mw::cnn
