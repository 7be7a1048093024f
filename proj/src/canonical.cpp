#include <fstream>
#include <sstream>

#include "crowdnet/data_io.hpp"
#include "crowdnet/error.hpp"
#include "crowdnet/json_format.hpp"

namespace crowdnet {
namespace {

// Dataset values are written verbatim (no significant-digit rounding) so that
// load(serialize(d)) == d holds exactly.
json body_of(const Dataset& d) {
  json meta = json::object();
  meta["seed"] = d.metadata.seed ? json(*d.metadata.seed) : json(nullptr);
  meta["generator"] = d.metadata.generator;
  meta["rng"] = d.metadata.rng;
  meta["planted_clusters"] = d.metadata.planted_clusters;

  json workers = json::array();
  for (const auto& w : d.workers) workers.push_back({{"id", w.id}, {"rating", w.rating}});

  json tasks = json::array();
  for (const auto& t : d.tasks) {
    tasks.push_back({{"id", t.id},
                     {"project_id", t.project_id},
                     {"status", to_string(t.status)},
                     {"posting_date", t.posting_date.str()},
                     {"submission_deadline", t.submission_deadline.str()},
                     {"prize", t.prize},
                     {"technologies", t.technologies},
                     {"platforms", t.platforms}});
  }

  json events = json::array();
  for (const auto& e : d.events) {
    events.push_back({{"worker_id", e.worker_id},
                      {"task_id", e.task_id},
                      {"registration_date", e.registration_date.str()},
                      {"submitted", e.submitted},
                      {"valid", e.valid},
                      {"won", e.won},
                      {"score", e.score ? json(*e.score) : json(nullptr)}});
  }

  return {{"schema_version", kSchemaVersion},
          {"metadata", meta},
          {"workers", workers},
          {"tasks", tasks},
          {"events", events}};
}

template <class T>
T field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("canonical dataset: missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("canonical dataset: bad field '") + key + "'");
  }
}

Dataset dataset_of(const json& body) {
  Dataset d;
  const auto& meta = body.at("metadata");
  if (!meta.at("seed").is_null()) d.metadata.seed = meta.at("seed").get<std::uint64_t>();
  d.metadata.generator = field<std::string>(meta, "generator");
  d.metadata.rng = field<std::string>(meta, "rng");
  d.metadata.planted_clusters = field<std::map<std::string, int>>(meta, "planted_clusters");

  for (const auto& w : body.at("workers")) {
    d.workers.push_back({field<std::string>(w, "id"), field<double>(w, "rating")});
  }
  for (const auto& j : body.at("tasks")) {
    TaskRecord t;
    t.id = field<std::string>(j, "id");
    t.project_id = field<std::string>(j, "project_id");
    t.status = parse_task_status(field<std::string>(j, "status"));
    t.posting_date = Date::parse(field<std::string>(j, "posting_date"));
    t.submission_deadline = Date::parse(field<std::string>(j, "submission_deadline"));
    t.prize = field<double>(j, "prize");
    t.technologies = field<std::vector<std::string>>(j, "technologies");
    t.platforms = field<std::vector<std::string>>(j, "platforms");
    d.tasks.push_back(std::move(t));
  }
  for (const auto& j : body.at("events")) {
    RegistrationEvent e;
    e.worker_id = field<std::string>(j, "worker_id");
    e.task_id = field<std::string>(j, "task_id");
    e.registration_date = Date::parse(field<std::string>(j, "registration_date"));
    e.submitted = field<bool>(j, "submitted");
    e.valid = field<bool>(j, "valid");
    e.won = field<bool>(j, "won");
    if (!j.at("score").is_null()) e.score = field<double>(j, "score");
    d.events.push_back(std::move(e));
  }
  return d;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string dataset_checksum(const Dataset& input) {
  Dataset d = input;
  canonicalize(d);
  return hash_hex(body_of(d).dump());
}

std::string serialize_dataset(const Dataset& input) {
  Dataset d = input;
  canonicalize(d);
  json doc = body_of(d);
  doc["checksum"] = hash_hex(doc.dump());
  return dump_stable(doc);
}

Dataset load_dataset(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("canonical dataset: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("canonical dataset: expected an object");
  const auto version = field<int>(doc, "schema_version");
  if (version != kSchemaVersion) {
    throw DataError("canonical dataset: schema_version " + std::to_string(version) +
                    " is not supported (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const auto stored = field<std::string>(doc, "checksum");
  doc.erase("checksum");
  if (hash_hex(doc.dump()) != stored) throw DataError("canonical dataset: checksum mismatch");
  Dataset d;
  try {
    d = dataset_of(doc);
  } catch (const json::exception& e) {
    throw DataError(std::string("canonical dataset: ") + e.what());
  }
  canonicalize(d);
  validate(d);
  return d;
}

Dataset load_dataset_file(const std::filesystem::path& path) { return load_dataset(read_file(path)); }

void save_dataset_file(const Dataset& d, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << serialize_dataset(d);
}

Dataset load_any(const std::filesystem::path& path, std::vector<RejectedRow>* rejected) {
  if (std::filesystem::is_directory(path)) {
    if (std::filesystem::exists(path / "dataset.json") && !std::filesystem::exists(path / "tasks.csv")) {
      return load_dataset_file(path / "dataset.json");
    }
    auto r = parse_dataset_dir(path);
    if (rejected) *rejected = std::move(r.rejected);
    return std::move(r.dataset);
  }
  if (!std::filesystem::exists(path)) throw DataError("no such input: " + path.string());
  return load_dataset_file(path);
}

}  // namespace crowdnet
