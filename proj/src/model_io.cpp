// Model file layout (all integers little-endian):
//
//   8 bytes   magic "WGBOWEMB"
//   u32       format version
//   u64       header length H
//   H bytes   JSON header (vocabulary, params, metadata, matrix shapes)
//   V*D f32   token embedding rows, row-major
//   B*D f32   subword bucket rows, row-major (B may be 0)

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "worldgen/embedding.hpp"

namespace worldgen {

using nlohmann::json;

namespace {

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  if (in.size() - pos < sizeof(T) || pos > in.size()) {
    throw CorruptModelError("model file truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  return value;
}

void put_floats(std::string& out, const std::vector<float>& values) {
  for (float f : values) put_le(out, std::bit_cast<std::uint32_t>(f));
}

std::vector<float> get_floats(const std::string& in, std::size_t& pos, std::size_t count) {
  if ((in.size() - pos) / 4 < count) throw CorruptModelError("model file truncated");
  std::vector<float> out(count);
  for (auto& f : out) f = std::bit_cast<float>(get_le<std::uint32_t>(in, pos));
  return out;
}

}  // namespace

std::string serialize_model(const EmbeddingModel& model) {
  const auto& vocab = model.vocabulary();
  json tasks = json::array();
  for (Task t : model.metadata().tasks) tasks.push_back(to_string(t));
  json header = {
      {"params", to_json(model.params())},
      {"vocabulary",
       {{"tokens", vocab.tokens()},
        {"document_frequency", vocab.frequencies()},
        {"documents", vocab.document_count()}}},
      {"rows", vocab.size()},
      {"buckets", model.bucket_count()},
      {"metadata",
       {{"epochs_run", model.metadata().epochs_run},
        {"final_loss", model.metadata().final_loss},
        {"seed", model.metadata().seed},
        {"tasks", tasks},
        {"feature_mode", to_string(model.metadata().feature_mode)}}},
  };
  const std::string text = header.dump();

  std::string out(kModelMagic, sizeof(kModelMagic));
  put_le<std::uint32_t>(out, kModelVersion);
  put_le<std::uint64_t>(out, text.size());
  out += text;
  put_floats(out, model.rows());
  put_floats(out, model.bucket_rows());
  return out;
}

std::shared_ptr<const EmbeddingModel> deserialize_model(const std::string& bytes) {
  if (bytes.size() < sizeof(kModelMagic) ||
      std::memcmp(bytes.data(), kModelMagic, sizeof(kModelMagic)) != 0) {
    throw ModelVersionError("not an embedding model file (bad magic)");
  }
  std::size_t pos = sizeof(kModelMagic);
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kModelVersion) {
    throw ModelVersionError("unsupported model version " + std::to_string(version));
  }
  const auto header_len = get_le<std::uint64_t>(bytes, pos);
  if (bytes.size() - pos < header_len) throw CorruptModelError("model file truncated");

  try {
    const json header = json::parse(bytes.substr(pos, header_len));
    pos += header_len;
    const auto params = params_from_json(header.at("params"));
    const auto& v = header.at("vocabulary");
    Vocabulary vocab = Vocabulary::from_parts(v.at("tokens").get<std::vector<std::string>>(),
                                              v.at("document_frequency").get<std::vector<std::size_t>>(),
                                              v.at("documents").get<std::size_t>());
    const auto n_rows = header.at("rows").get<std::size_t>();
    const auto n_buckets = header.at("buckets").get<std::size_t>();
    if (n_rows != vocab.size()) throw CorruptModelError("row count does not match vocabulary");

    const auto& m = header.at("metadata");
    TrainingMetadata meta;
    meta.epochs_run = m.at("epochs_run").get<std::size_t>();
    meta.final_loss = m.at("final_loss").get<double>();
    meta.seed = m.at("seed").get<std::uint64_t>();
    for (const auto& t : m.at("tasks")) meta.tasks.push_back(parse_task(t.get<std::string>()));
    meta.feature_mode = parse_feature_mode(m.at("feature_mode").get<std::string>());

    auto rows = get_floats(bytes, pos, n_rows * params.dim);
    auto bucket_rows = get_floats(bytes, pos, n_buckets * params.dim);
    if (pos != bytes.size()) throw CorruptModelError("trailing bytes after model data");
    return std::make_shared<const EmbeddingModel>(std::move(vocab), params, std::move(rows),
                                                  std::move(bucket_rows), std::move(meta));
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw CorruptModelError(std::string("corrupt model header: ") + e.what());
  }
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  const std::string bytes = serialize_model(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("error writing model file: " + path.string());
}

std::shared_ptr<const EmbeddingModel> load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace worldgen
