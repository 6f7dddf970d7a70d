#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "synpoly/synpoly.hpp"

namespace synpoly::app {

namespace fs = std::filesystem;

/// Term vectors of every sentence of one treebank, in file order.
using PolyRecords = std::vector<std::pair<std::string, std::vector<TermVector>>>;

struct Treebank {
  std::string language;
  fs::path path;
  std::string digest;      // SHA-256 of the file content
  std::string ud_version;  // empty when the file does not name a release
  std::vector<SentenceRecord> sentences;
};

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);
std::string sha256_hex(std::string_view data);

/// `<code>.conllu` in the directory, else a `<iso1>_pud*.conllu` file at
/// the top level or one directory down.
std::optional<fs::path> locate_treebank(const fs::path& dir, const std::string& code);

Treebank load_treebank(const fs::path& path, const std::string& language);

/// `# sent_id = ...` header, one line of 75 integers per term, blank line.
void write_poly_records(std::ostream& out, const PolyRecords& records);
PolyRecords parse_poly_records(std::string_view text);

PolyRecords compute_poly_records(const std::vector<SentenceRecord>& sentences, unsigned workers);

/// Term vectors keyed by treebank digest; a changed file gets a new key.
class PolyCache {
 public:
  explicit PolyCache(std::optional<fs::path> dir) : dir_(std::move(dir)) {}

  PolyRecords get(const Treebank& treebank, unsigned workers) const;
  bool enabled() const noexcept { return dir_.has_value(); }

 private:
  std::optional<fs::path> dir_;
};

/// `--cache-dir`, else the SYNPOLY_CACHE_DIR environment variable, else none.
std::optional<fs::path> resolve_cache_dir(const std::string& flag);

struct DatasetOptions {
  fs::path dataset_dir;
  std::string split = "ENG";
  std::vector<std::string> languages;  // empty: the 20 parallel-corpus languages
  std::optional<fs::path> split_file;
  unsigned workers = 1;
  std::optional<fs::path> cache_dir;
  std::string ud_version;  // overrides whatever the files say
};

struct LoadedDataset {
  std::string split;
  TermGrid grid;
  std::string ud_version;  // "unknown" when absent from files and flags
  std::string split_source;
  std::size_t max_terms = 0;
};

LoadedDataset load_dataset(const DatasetOptions& options);

// Emission. Decimal output uses two fractional digits rounded half up.

std::string matrix_csv(const DistanceMatrix& m, bool exact);
std::string matrix_json(const DistanceMatrix& m, bool exact);
std::string summary_json(const LanguageSummary& s, const std::string& split, bool exact);
std::string embedding_csv(const Embedding& e);
std::string embedding_svg(const Embedding& e);
std::string diversity_json(const std::vector<CorpusStats>& stats, bool exact);
std::string diversity_csv(const std::vector<CorpusStats>& stats, bool exact);
std::string extremes_report(const ExtremeSentences& x, const std::string& lang_a, const std::string& lang_b,
                            bool exact);

struct PipelineOptions {
  DatasetOptions dataset;
  fs::path out_dir;
  Rational bin_width{1, 2};
  bool exact = false;
  bool include_timestamp = true;
};

/// Writes language_matrix.csv, summary.json, dendrogram.nwk, mds.csv,
/// mds.svg, diversity.json and metadata.json into out_dir.
void run_pipeline(const PipelineOptions& options);

/// Parses "0.5" or "1/2".
Rational parse_rational(const std::string& text);

}  // namespace synpoly::app
