#pragma once

// Delimited-file ingestion and the canonical single-document interchange.
//
// tasks.csv:          task_id,project_id,status,posting_date,submission_deadline,prize,technologies,platforms
// registrations.csv:  worker_id,task_id,registration_date,submitted,valid,won,score
// workers.csv:        worker_id,rating
//
// technologies/platforms are '|'-separated; dates are YYYY-MM-DD; flags are
// literal 0/1; score may be empty.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "crowdnet/dataset.hpp"

namespace crowdnet {

inline constexpr int kSchemaVersion = 1;

struct RejectedRow {
  std::string file;
  std::size_t row = 0;  // 1-based line number, header is line 1
  std::string reason;
};

struct IngestResult {
  Dataset dataset;
  std::vector<RejectedRow> rejected;
  /// Repeated (worker, task) registrations; the first one is kept.
  std::size_t duplicate_events = 0;
};

/// Parses and validates. Throws DataError for missing columns, malformed
/// values and dangling references; flag-chain violations only reject the row.
IngestResult parse_dataset(std::istream& tasks, std::istream& registrations, std::istream& workers);

IngestResult parse_dataset_files(const std::filesystem::path& tasks,
                                 const std::filesystem::path& registrations,
                                 const std::filesystem::path& workers);

/// Reads tasks.csv, registrations.csv and workers.csv from a directory.
IngestResult parse_dataset_dir(const std::filesystem::path& dir);

void write_dataset_csv(const Dataset& d, const std::filesystem::path& dir);

/// Split one CSV record (RFC 4180 quoting).
std::vector<std::string> split_csv_line(std::string_view line);

/// Canonical JSON text: schema_version, metadata, workers, tasks, events and
/// a checksum over the rest. Dataset is canonicalized first.
std::string serialize_dataset(const Dataset& d);

/// Throws DataError on schema-version mismatch or checksum failure.
Dataset load_dataset(std::string_view text);

Dataset load_dataset_file(const std::filesystem::path& path);
void save_dataset_file(const Dataset& d, const std::filesystem::path& path);

/// Checksum stored in the canonical form of `d`.
std::string dataset_checksum(const Dataset& d);

/// Directory of CSVs or a canonical .json document.
Dataset load_any(const std::filesystem::path& path, std::vector<RejectedRow>* rejected = nullptr);

}  // namespace crowdnet
