/* Copyright 2026 The ELSR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "elsr/weights.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

namespace elsr {

namespace {

constexpr char kMagic[4] = {'E', 'L', 'S', 'R'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw FormatError(std::string("truncated archive while reading ") + what,
                        pos_);
    }
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const ArchiveEntry* WeightArchive::find(std::string_view name) const {
  for (const ArchiveEntry& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::int64_t WeightArchive::scalar_count() const {
  std::int64_t n = 0;
  for (const ArchiveEntry& e : entries) n += dims_numel(e.dims);
  return n;
}

void WeightArchive::validate() const {
  std::set<std::string> names;
  for (const ArchiveEntry& e : entries) {
    if (!names.insert(e.name).second) {
      throw Error("weight archive: duplicate layer name '" + e.name + "'");
    }
    for (std::int64_t d : e.dims) {
      if (d < 0 || d > 0xFFFFFFFFll) {
        throw Error("weight archive: layer '" + e.name + "' has invalid dims " +
                    dims_str(e.dims));
      }
    }
    if (static_cast<std::int64_t>(e.data.size()) != dims_numel(e.dims)) {
      throw Error("weight archive: layer '" + e.name + "' holds " +
                  std::to_string(e.data.size()) + " values for dims " +
                  dims_str(e.dims));
    }
  }
}

std::vector<std::uint8_t> serialize(const WeightArchive& archive) {
  archive.validate();
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, archive.version);
  put_u32(out, archive.scale);
  put_u32(out, archive.nf);
  put_u32(out, static_cast<std::uint32_t>(archive.entries.size()));
  for (const ArchiveEntry& e : archive.entries) {
    put_u32(out, static_cast<std::uint32_t>(e.name.size()));
    out.insert(out.end(), e.name.begin(), e.name.end());
    put_u32(out, static_cast<std::uint32_t>(e.dims.size()));
    for (std::int64_t d : e.dims) put_u32(out, static_cast<std::uint32_t>(d));
    for (float f : e.data) put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

WeightArchive deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    throw FormatError("bad magic, expected \"ELSR\"", 0);
  }
  WeightArchive a;
  const std::uint64_t version_at = r.offset();
  a.version = r.u32("version");
  if (a.version != WeightArchive::kVersion) {
    throw FormatError("unsupported archive version " + std::to_string(a.version),
                      version_at);
  }
  a.scale = r.u32("scale");
  a.nf = r.u32("nf");
  const std::uint32_t count = r.u32("layer count");
  std::set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    ArchiveEntry e;
    const std::uint64_t entry_at = r.offset();
    const std::uint32_t name_len = r.u32("name length");
    auto name = r.take(name_len, "layer name");
    e.name.assign(name.begin(), name.end());
    if (!names.insert(e.name).second) {
      throw FormatError("duplicate layer name '" + e.name + "'", entry_at);
    }
    const std::uint32_t ndim = r.u32("ndim");
    // Each dim takes 4 bytes, so this also bounds hostile ndim values.
    r.need(std::size_t{ndim} * 4, "dims");
    std::uint64_t numel = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      const std::uint32_t v = r.u32("dim");
      e.dims.push_back(v);
      numel *= v;
      if (numel > r.remaining()) {
        throw FormatError("layer '" + e.name + "' declares more data than "
                          "the archive holds", r.offset());
      }
    }
    r.need(numel * 4, "layer data");
    e.data.resize(numel);
    for (float& f : e.data) f = std::bit_cast<float>(r.u32("layer data"));
    a.entries.push_back(std::move(e));
  }
  if (r.remaining() != 0) {
    throw FormatError(std::to_string(r.remaining()) +
                          " trailing bytes after last layer",
                      r.offset());
  }
  return a;
}

void write_archive(const WeightArchive& archive,
                   const std::filesystem::path& path) {
  const auto bytes = serialize(archive);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

WeightArchive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open weight archive " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return deserialize(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.offset());
  }
}

WeightArchive to_archive(const Model& model) {
  WeightArchive a;
  a.scale = static_cast<std::uint32_t>(model.config().scale);
  a.nf = static_cast<std::uint32_t>(model.config().nf);
  a.init = model.init_descriptor();
  for (const Parameter& p : model.parameters()) {
    a.entries.push_back({p.name, p.dims, p.value.vec()});
  }
  return a;
}

Model from_archive(const WeightArchive& archive, const ModelConfig& config,
                   bool allow_partial, std::uint64_t init_seed,
                   LoadReport* report) {
  archive.validate();
  Model fresh = build_model(config, init_seed);
  std::vector<Parameter> params(fresh.parameters().begin(),
                                fresh.parameters().end());

  // A layer loads only if all its parameters are present and well-shaped.
  std::map<std::string, bool> layer_ok;
  std::vector<std::string> order;
  for (const Parameter& p : params) {
    const std::string layer = layer_of(p.name);
    if (!layer_ok.count(layer)) {
      layer_ok[layer] = true;
      order.push_back(layer);
    }
    const ArchiveEntry* e = archive.find(p.name);
    if (!e) {
      if (!allow_partial) {
        throw Error("weight archive has no entry '" + p.name + "'");
      }
      layer_ok[layer] = false;
    } else if (e->dims != p.dims) {
      if (!allow_partial) {
        throw Error("layer '" + p.name + "' has shape " + dims_str(e->dims) +
                    " in the archive but the model expects " +
                    dims_str(p.dims));
      }
      layer_ok[layer] = false;
    }
  }
  if (!allow_partial) {
    for (const ArchiveEntry& e : archive.entries) {
      bool known = false;
      for (const Parameter& p : params) known = known || p.name == e.name;
      if (!known) {
        throw Error("weight archive entry '" + e.name +
                    "' does not belong to the model");
      }
    }
  }

  for (Parameter& p : params) {
    if (!layer_ok[layer_of(p.name)]) continue;
    const ArchiveEntry* e = archive.find(p.name);
    p.value = Tensor(storage_shape(p.dims), e->data);
  }
  if (report) {
    for (const std::string& layer : order) {
      (layer_ok[layer] ? report->loaded_layers : report->skipped_layers)
          .push_back(layer);
    }
  }
  std::string init = archive.init.empty() ? fresh.init_descriptor() : archive.init;
  return Model(config, std::move(params), std::move(init));
}

void save_weights(const Model& model, const std::filesystem::path& path) {
  write_archive(to_archive(model), path);
}

Model load_weights(const std::filesystem::path& path, const ModelConfig& config,
                   bool allow_partial, LoadReport* report,
                   std::uint64_t init_seed) {
  return from_archive(read_archive(path), config, allow_partial, init_seed,
                      report);
}

ModelConfig infer_config(const WeightArchive& archive,
                         const ModelConfig& fallback) {
  ModelConfig c = fallback;
  c.scale = static_cast<int>(archive.scale);
  c.nf = static_cast<int>(archive.nf);
  int convs = 0;
  while (archive.find("conv" + std::to_string(convs + 1) + ".weight")) ++convs;
  c.nb_convs = convs;
  if (archive.find("act1.slope")) {
    c.activation = Activation::PReLU;
  } else if (c.activation == Activation::PReLU) {
    c.activation = Activation::ReLU;
  }
  c.validate();
  return c;
}

WeightArchive adapt_weights_x2_to_x4(const WeightArchive& x2,
                                     const ModelConfig& target) {
  x2.validate();
  if (x2.scale != 2) {
    throw Error("adapt: source archive is x" + std::to_string(x2.scale) +
                ", expected a x2 archive");
  }
  if (target.scale != 4) {
    throw Error("adapt: target config must be x4, got x" +
                std::to_string(target.scale));
  }
  const std::string tail = target.tail_name();
  const std::int64_t nf = target.nf;

  WeightArchive out;
  out.scale = 4;
  out.nf = static_cast<std::uint32_t>(target.nf);
  out.init = x2.init;
  for (const ParamSpec& spec : parameter_layout(target)) {
    const ArchiveEntry* src = x2.find(spec.name);
    if (!src) throw Error("adapt: x2 archive has no layer '" + spec.name + "'");
    if (layer_of(spec.name) != tail) {
      if (src->dims != spec.dims) {
        throw Error("adapt: layer '" + spec.name + "' has shape " +
                    dims_str(src->dims) + ", target expects " +
                    dims_str(spec.dims));
      }
      out.entries.push_back(*src);
      continue;
    }

    const bool is_weight = spec.name.ends_with(".weight");
    const std::vector<std::int64_t> want_src =
        is_weight ? std::vector<std::int64_t>{12, nf, 3, 3}
                  : std::vector<std::int64_t>{12};
    if (src->dims != want_src) {
      throw Error("adapt: tail layer '" + spec.name + "' has shape " +
                  dims_str(src->dims) + ", expected " + dims_str(want_src));
    }
    const std::size_t block = is_weight ? static_cast<std::size_t>(nf * 9) : 1;
    ArchiveEntry e{spec.name, spec.dims, std::vector<float>(48 * block)};
    for (int co = 0; co < 3; ++co) {
      for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
          const std::size_t dst = static_cast<std::size_t>(co * 16 + p * 4 + q);
          const std::size_t from =
              static_cast<std::size_t>(co * 4 + (p / 2) * 2 + (q / 2));
          std::copy_n(src->data.begin() + from * block, block,
                      e.data.begin() + dst * block);
        }
      }
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace elsr
