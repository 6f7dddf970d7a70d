#include "app.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace synpoly::app {

using nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::optional<fs::path> locate_treebank(const fs::path& dir, const std::string& code) {
  auto direct = dir / (code + ".conllu");
  if (fs::is_regular_file(direct)) return direct;

  auto it = std::find(kLanguageOrder.begin(), kLanguageOrder.end(), code);
  if (it == kLanguageOrder.end() || !fs::is_directory(dir)) return std::nullopt;
  const std::string prefix =
      std::string(kTreebankPrefixes[static_cast<std::size_t>(it - kLanguageOrder.begin())]) + "_pud";

  std::vector<fs::path> hits;
  auto consider = [&](const fs::path& p) {
    auto name = p.filename().string();
    if (fs::is_regular_file(p) && name.starts_with(prefix) && p.extension() == ".conllu") hits.push_back(p);
  };
  for (const auto& entry : fs::directory_iterator(dir)) {
    consider(entry.path());
    if (entry.is_directory()) {
      for (const auto& inner : fs::directory_iterator(entry.path())) consider(inner.path());
    }
  }
  if (hits.empty()) return std::nullopt;
  std::sort(hits.begin(), hits.end());
  return hits.front();
}

Treebank load_treebank(const fs::path& path, const std::string& language) {
  Treebank tb;
  tb.language = language;
  tb.path = path;
  auto text = read_file(path);
  tb.digest = sha256_hex(text);
  tb.ud_version = find_release_version(text);
  tb.sentences = parse_conllu(text, language);
  return tb;
}

void write_poly_records(std::ostream& out, const PolyRecords& records) {
  for (const auto& [sent_id, vectors] : records) {
    out << "# sent_id = " << sent_id << '\n';
    write_term_vectors(out, vectors);
    out << '\n';
  }
}

PolyRecords parse_poly_records(std::string_view text) {
  PolyRecords records;
  bool open = false;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      open = false;
      continue;
    }
    if (line.starts_with("# sent_id = ")) {
      records.emplace_back(std::string(line.substr(12)), std::vector<TermVector>{});
      open = true;
      continue;
    }
    if (!open) throw Error(ErrorKind::MalformedLine, "poly line " + std::to_string(line_no) + ": no sent_id header");
    records.back().second.push_back(parse_term_vector(std::string(line)));
  }
  return records;
}

PolyRecords compute_poly_records(const std::vector<SentenceRecord>& sentences, unsigned workers) {
  PolyRecords records(sentences.size());
  parallel_for(sentences.size(), workers, [&](std::size_t i) {
    records[i] = {sentences[i].sent_id, to_term_vectors(compute_labeled(from_sentence(sentences[i])))};
  });
  return records;
}

PolyRecords PolyCache::get(const Treebank& treebank, unsigned workers) const {
  if (!dir_) return compute_poly_records(treebank.sentences, workers);
  auto file = *dir_ / (treebank.digest + ".poly");
  if (fs::is_regular_file(file)) {
    auto records = parse_poly_records(read_file(file));
    // A partial write (interrupted run) would leave fewer records.
    if (records.size() == treebank.sentences.size()) return records;
  }
  auto records = compute_poly_records(treebank.sentences, workers);
  std::ostringstream out;
  write_poly_records(out, records);
  auto tmp = file;
  tmp += ".tmp";
  write_file(tmp, out.str());
  fs::rename(tmp, file);
  return records;
}

std::optional<fs::path> resolve_cache_dir(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("SYNPOLY_CACHE_DIR"); env != nullptr && *env != '\0') return fs::path(env);
  return std::nullopt;
}

LoadedDataset load_dataset(const DatasetOptions& options) {
  if (!is_split_name(options.split)) {
    throw Error(ErrorKind::SplitMismatch, "unknown split '" + options.split + "'");
  }
  std::vector<std::string> languages = options.languages;
  if (languages.empty()) languages.assign(kLanguageOrder.begin(), kLanguageOrder.end());
  languages = order_languages(std::move(languages));

  std::vector<std::string> missing;
  std::vector<fs::path> paths;
  for (const auto& code : languages) {
    auto p = locate_treebank(options.dataset_dir, code);
    if (!p) {
      missing.push_back(code);
    } else {
      paths.push_back(*p);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorKind::MissingTranslation,
                "no treebank for language(s) " + list + " in " + options.dataset_dir.string());
  }

  std::vector<Treebank> treebanks(languages.size());
  parallel_for(languages.size(), options.workers,
               [&](std::size_t i) { treebanks[i] = load_treebank(paths[i], languages[i]); });

  LoadedDataset out{options.split, TermGrid({}, {}, {}), "", "", 0};

  SplitMapping mapping;
  if (options.split_file) {
    mapping = parse_split_mapping(read_file(*options.split_file));
    out.split_source = options.split_file->filename().string();
  } else if (auto default_file = options.dataset_dir / "split.tsv"; fs::is_regular_file(default_file)) {
    mapping = parse_split_mapping(read_file(default_file));
    out.split_source = "split.tsv";
  } else {
    for (const auto& tb : treebanks) {
      for (const auto& rec : tb.sentences) {
        if (auto s = split_from_sent_id(rec.sent_id)) mapping[rec.sent_id] = *s;
      }
    }
    out.split_source = "sent_id prefix";
  }

  std::map<std::string, std::vector<SentenceRecord>> by_language;
  for (const auto& tb : treebanks) by_language[tb.language] = tb.sentences;
  auto dataset = build_dataset(by_language, mapping, options.split);

  PolyCache cache(options.cache_dir);
  std::vector<std::map<std::string, TermVectorSet>> sets(languages.size());
  for (std::size_t l = 0; l < treebanks.size(); ++l) {
    for (auto& [sent_id, vectors] : cache.get(treebanks[l], options.workers)) {
      out.max_terms = std::max(out.max_terms, vectors.size());
      sets[l].emplace(sent_id, TermVectorSet(std::move(vectors)));
    }
  }

  // dataset.languages() follows the same fixed order as `languages`
  std::vector<TermVectorSet> cells;
  cells.reserve(dataset.tree_count());
  for (const auto& id : dataset.sent_ids()) {
    for (std::size_t l = 0; l < languages.size(); ++l) cells.push_back(sets[l].at(id));
  }
  out.grid = TermGrid(dataset.sent_ids(), dataset.languages(), std::move(cells));

  if (!options.ud_version.empty()) {
    out.ud_version = options.ud_version;
  } else {
    std::set<std::string> versions;
    for (const auto& tb : treebanks) {
      if (!tb.ud_version.empty()) versions.insert(tb.ud_version);
    }
    if (versions.empty()) {
      out.ud_version = "unknown";
    } else {
      for (const auto& v : versions) out.ud_version += (out.ud_version.empty() ? "" : ",") + v;
    }
  }
  return out;
}

namespace {

ordered_json number_json(const Rational& q, bool exact) {
  auto rounded = std::stod(format_fixed(q));
  if (!exact) return rounded;
  return ordered_json{{"value", rounded},
                      {"numerator", boost::multiprecision::numerator(q).str()},
                      {"denominator", boost::multiprecision::denominator(q).str()}};
}

std::string cell(const Rational& q, bool exact) { return exact ? to_exact_string(q) : format_fixed(q); }

std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << (v == 0.0 ? 0.0 : v);  // no "-0.000000"
  return s.str();
}

}  // namespace

std::string matrix_csv(const DistanceMatrix& m, bool exact) {
  std::ostringstream out;
  out << "language";
  for (const auto& l : m.labels()) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << cell(m.at(i, j), exact);
    out << '\n';
  }
  return out.str();
}

std::string matrix_json(const DistanceMatrix& m, bool exact) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(number_json(m.at(i, j), exact));
    rows.push_back(std::move(row));
  }
  ordered_json doc{{"labels", m.labels()}, {"values", std::move(rows)}};
  return doc.dump(2) + "\n";
}

std::string summary_json(const LanguageSummary& s, const std::string& split, bool exact) {
  auto pairs = [&](const std::vector<PairEntry>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : v) arr.push_back({{"pair", {p.first, p.second}}, {"distance", number_json(p.value, exact)}});
    return arr;
  };
  auto labels = [&](const std::vector<LabelValue>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : v) arr.push_back({{"language", p.label}, {"distance", number_json(p.value, exact)}});
    return arr;
  };
  ordered_json doc{
      {"dataset", split},
      {"pairwise_language_distance",
       {{"mean", number_json(s.mean, exact)},
        {"median", number_json(s.median, exact)},
        {"smallest", pairs(s.smallest)},
        {"largest", pairs(s.largest)}}},
      {"average_language_distance",
       {{"smallest", labels(s.smallest_average)},
        {"largest", labels(s.largest_average)},
        {"all", labels(s.average)}}},
  };
  return doc.dump(2) + "\n";
}

std::string embedding_csv(const Embedding& e) {
  std::ostringstream out;
  out << "label,x,y,eigenvalue_share\n";
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    const auto& c = e.coordinates[i];
    out << e.labels[i] << ',' << fixed6(c.size() > 0 ? c[0] : 0.0) << ',' << fixed6(c.size() > 1 ? c[1] : 0.0)
        << ',' << fixed6(i < e.eigenvalues.size() ? e.eigenvalue_share(i) : 0.0) << '\n';
  }
  return out.str();
}

std::string embedding_svg(const Embedding& e) {
  constexpr double size = 480.0;
  constexpr double margin = 40.0;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (const auto& c : e.coordinates) {
    lo_x = std::min(lo_x, c.at(0));
    hi_x = std::max(hi_x, c.at(0));
    lo_y = std::min(lo_y, c.size() > 1 ? c[1] : 0.0);
    hi_y = std::max(hi_y, c.size() > 1 ? c[1] : 0.0);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  auto px = [&](double v) { return margin + (v - lo_x) / span * (size - 2 * margin); };
  auto py = [&](double v) { return size - margin - (v - lo_y) / span * (size - 2 * margin); };

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    const double x = px(e.coordinates[i][0]);
    const double y = py(e.coordinates[i].size() > 1 ? e.coordinates[i][1] : 0.0);
    out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"steelblue\"/>\n";
    out << "<text x=\"" << x + 5 << "\" y=\"" << y - 5 << "\" font-size=\"11\">" << e.labels[i] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string diversity_json(const std::vector<CorpusStats>& stats, bool exact) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : stats) {
    ordered_json bins = ordered_json::array();
    for (const auto& b : s.bins) {
      bins.push_back({{"lo", number_json(b.lo, exact)}, {"hi", number_json(b.hi, exact)}, {"count", b.count}});
    }
    arr.push_back({{"language", s.language},
                   {"n_sentences", s.n_sentences},
                   {"n_pairs", s.n_pairs},
                   {"diameter", number_json(s.diameter, exact)},
                   {"mean", number_json(s.mean, exact)},
                   {"bins", std::move(bins)},
                   {"extras", {{"min", number_json(s.min_distance, exact)}, {"variance", std::stod(fixed6(s.variance))}}}});
  }
  return arr.dump(2) + "\n";
}

std::string diversity_csv(const std::vector<CorpusStats>& stats, bool exact) {
  std::ostringstream out;
  out << "language,n_sentences,n_pairs,diameter,mean,bin_lo,bin_hi,count\n";
  for (const auto& s : stats) {
    for (const auto& b : s.bins) {
      out << s.language << ',' << s.n_sentences << ',' << s.n_pairs << ',' << cell(s.diameter, exact) << ','
          << cell(s.mean, exact) << ',' << cell(b.lo, exact) << ',' << cell(b.hi, exact) << ',' << b.count << '\n';
    }
  }
  return out.str();
}

std::string extremes_report(const ExtremeSentences& x, const std::string& lang_a, const std::string& lang_b,
                            bool exact) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& id : v) s += (s.empty() ? "" : ",") + id;
    return s;
  };
  std::ostringstream out;
  out << "pair\t" << lang_a << '\t' << lang_b << '\n';
  out << "min\t" << x.min_sent_id << '\t' << cell(x.min_distance, exact) << "\tties=" << x.min_ties.size() << '\t'
      << join(x.min_ties) << '\n';
  out << "max\t" << x.max_sent_id << '\t' << cell(x.max_distance, exact) << "\tties=" << x.max_ties.size() << '\t'
      << join(x.max_ties) << '\n';
  return out.str();
}

void run_pipeline(const PipelineOptions& options) {
  auto loaded = load_dataset(options.dataset);
  const auto& grid = loaded.grid;
  const unsigned workers = options.dataset.workers;
  const bool exact = options.exact;
  const auto& dir = options.out_dir;
  fs::create_directories(dir);

  auto matrix = language_matrix(grid, workers);
  write_file(dir / "language_matrix.csv", matrix_csv(matrix, exact));
  write_file(dir / "summary.json", summary_json(summarize(matrix), loaded.split, exact));
  write_file(dir / "dendrogram.nwk", to_newick(upgma(matrix)) + "\n");

  auto embedding = classical_mds(matrix);
  write_file(dir / "mds.csv", embedding_csv(embedding));
  write_file(dir / "mds.svg", embedding_svg(embedding));

  std::vector<CorpusStats> stats;
  for (const auto& lang : grid.languages()) stats.push_back(corpus_stats(grid, lang, options.bin_width, workers));
  write_file(dir / "diversity.json", diversity_json(stats, exact));

  ordered_json meta{
      {"dataset", loaded.split},
      {"languages", grid.languages()},
      {"sentences", grid.sent_ids().size()},
      {"ud_version", loaded.ud_version},
      {"ud_version_matches_reference", "unknown"},
      {"split_source", loaded.split_source},
      {"deprel_subtypes", "stripped before relation lookup"},
      {"rounding", "half-up to 2 decimals, applied at emission only"},
      {"exact_values", exact},
      {"histogram_bin_width", to_exact_string(options.bin_width)},
      {"max_term_count", loaded.max_terms},
      {"mds_warnings", embedding.warnings},
  };
  if (options.include_timestamp) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    meta["timestamp"] = ts.str();
  }
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

Rational parse_rational(const std::string& text) {
  auto fail = [&] { throw Error(ErrorKind::MalformedLine, "not a number: '" + text + "'"); };
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      Integer num(text.substr(0, slash));
      Integer den(text.substr(slash + 1));
      if (den == 0) fail();
      return Rational(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(Integer(text));
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) fail();
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer w(whole.empty() ? "0" : whole);
    return Rational(w * scale + Integer(frac), scale);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail();
  }
  return {};
}

}  // namespace synpoly::app
