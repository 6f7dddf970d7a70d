#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "app.hpp"

namespace {

using namespace synpoly;
using namespace synpoly::app;

enum ExitCode { kOk = 0, kInputError = 1, kInternalError = 2 };

struct CommonFlags {
  std::string dataset_dir;
  std::string split = "ENG";
  std::vector<std::string> langs;
  std::string split_file;
  unsigned workers = 1;
  std::string cache_dir;
  std::string format = "csv";
  std::string ud_version;
  bool exact = false;
  std::string output;

  DatasetOptions dataset() const {
    DatasetOptions o;
    o.dataset_dir = dataset_dir;
    o.split = split;
    o.languages = langs;
    if (!split_file.empty()) o.split_file = split_file;
    o.workers = workers;
    o.cache_dir = resolve_cache_dir(cache_dir);
    o.ud_version = ud_version;
    return o;
  }
};

void add_dataset_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--dataset-dir", f.dataset_dir, "Directory holding one CoNLL-U treebank per language")->required();
  cmd->add_option("--split", f.split, "Dataset by original language")
      ->check(CLI::IsMember({"ENG", "GER", "FRE", "ITA", "SPA"}));
  cmd->add_option("--langs", f.langs, "Languages to include (default: all 20)")->delimiter(',');
  cmd->add_option("--split-file", f.split_file, "sent_id<TAB>SPLIT mapping (default: <dataset-dir>/split.tsv)");
  cmd->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--cache-dir", f.cache_dir, "Polynomial cache directory (env SYNPOLY_CACHE_DIR)");
  cmd->add_option("--ud-version", f.ud_version, "Record this UD release instead of the one found in the files");
  cmd->add_flag("--exact", f.exact, "Emit exact rationals instead of 2-decimal values");
  cmd->add_option("-o,--output", f.output, "Output file (default: stdout)");
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::vector<std::pair<std::string, std::vector<TermVector>>> poly_of_file(const std::string& path,
                                                                          unsigned workers) {
  auto sentences = parse_conllu(read_file(path), fs::path(path).stem().string());
  return compute_poly_records(sentences, workers);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Dependency tree polynomials and polynomial distances"};
  cli.require_subcommand(1);
  CommonFlags f;

  auto* poly = cli.add_subcommand("poly", "Write per-sentence term vectors of a CoNLL-U file");
  std::string poly_input;
  poly->add_option("input", poly_input, "CoNLL-U file")->required()->check(CLI::ExistingFile);
  poly->add_option("-o,--output", f.output, "Output file (default: stdout)");
  poly->add_option("--workers", f.workers)->check(CLI::PositiveNumber);

  auto* dist = cli.add_subcommand("dist", "Polynomial distance between sentences of two CoNLL-U files");
  std::string dist_a, dist_b, sent_a, sent_b;
  dist->add_option("first", dist_a)->required()->check(CLI::ExistingFile);
  dist->add_option("second", dist_b)->required()->check(CLI::ExistingFile);
  dist->add_option("--sent-a", sent_a, "sent_id in the first file");
  dist->add_option("--sent-b", sent_b, "sent_id in the second file");
  dist->add_flag("--exact", f.exact);

  auto* matrix = cli.add_subcommand("matrix", "Language distance matrix, or one sentence's translation matrix");
  std::string sent_id;
  add_dataset_flags(matrix, f);
  matrix->add_option("--sent-id", sent_id, "Translation matrix of this sentence");
  matrix->add_option("--format", f.format)->check(CLI::IsMember({"csv", "json"}));

  auto* summary = cli.add_subcommand("summary", "Summary of the language distance matrix (JSON)");
  add_dataset_flags(summary, f);

  auto* cluster = cli.add_subcommand("cluster", "UPGMA dendrogram of the language distance matrix (Newick)");
  add_dataset_flags(cluster, f);

  auto* mds = cli.add_subcommand("mds", "Classical MDS of the language distance matrix (CSV)");
  std::string svg;
  add_dataset_flags(mds, f);
  mds->add_option("--svg", svg, "Also write a scatter plot");

  auto* diversity = cli.add_subcommand("diversity", "Pairwise sentence distances within each language corpus");
  std::string bin_width = "0.5";
  add_dataset_flags(diversity, f);
  diversity->add_option("--bin-width", bin_width, "Histogram bin width, e.g. 0.5 or 1/4");
  diversity->add_option("--format", f.format)->check(CLI::IsMember({"csv", "json"}));

  auto* extremes = cli.add_subcommand("extremes", "Closest and farthest translations between two languages");
  std::string lang_a, lang_b;
  add_dataset_flags(extremes, f);
  extremes->add_option("--lang-a", lang_a)->required();
  extremes->add_option("--lang-b", lang_b)->required();

  auto* pipeline = cli.add_subcommand("pipeline", "Every dataset artifact into one directory");
  std::string out_dir;
  add_dataset_flags(pipeline, f);
  pipeline->add_option("--out-dir", out_dir)->required();
  pipeline->add_option("--bin-width", bin_width, "Histogram bin width");
  bool no_timestamp = false;
  pipeline->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from metadata.json");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (poly->parsed()) {
      std::ostringstream out;
      write_poly_records(out, poly_of_file(poly_input, f.workers));
      emit(f.output, out.str());
    } else if (dist->parsed()) {
      auto a = poly_of_file(dist_a, 1);
      auto b = poly_of_file(dist_b, 1);
      auto find = [](const auto& records, const std::string& id) -> const std::vector<TermVector>& {
        for (const auto& [sid, v] : records) {
          if (sid == id) return v;
        }
        throw Error(ErrorKind::MissingTranslation, "no sentence '" + id + "'");
      };
      auto show = [&](const Rational& q) { return f.exact ? to_exact_string(q) : format_fixed(q); };
      if (!sent_a.empty() || !sent_b.empty()) {
        const auto& va = find(a, sent_a.empty() ? sent_b : sent_a);
        const auto& vb = find(b, sent_b.empty() ? sent_a : sent_b);
        std::cout << show(polynomial_distance(TermVectorSet(va), TermVectorSet(vb)).value()) << '\n';
      } else {
        std::size_t shown = 0;
        for (const auto& [id, va] : a) {
          for (const auto& [idb, vb] : b) {
            if (id != idb) continue;
            std::cout << id << '\t' << show(polynomial_distance(TermVectorSet(va), TermVectorSet(vb)).value()) << '\n';
            ++shown;
          }
        }
        if (shown == 0 && a.size() == 1 && b.size() == 1) {
          std::cout << a[0].first << '\t' << b[0].first << '\t'
                    << show(polynomial_distance(TermVectorSet(a[0].second), TermVectorSet(b[0].second)).value())
                    << '\n';
        } else if (shown == 0) {
          throw Error(ErrorKind::MissingTranslation, "the two files share no sent_id; use --sent-a/--sent-b");
        }
      }
    } else if (matrix->parsed()) {
      auto data = load_dataset(f.dataset());
      auto m = sent_id.empty() ? language_matrix(data.grid, f.workers) : translation_matrix(data.grid, sent_id);
      emit(f.output, f.format == "json" ? matrix_json(m, f.exact) : matrix_csv(m, f.exact));
    } else if (summary->parsed()) {
      auto data = load_dataset(f.dataset());
      emit(f.output, summary_json(summarize(language_matrix(data.grid, f.workers)), data.split, f.exact));
    } else if (cluster->parsed()) {
      auto data = load_dataset(f.dataset());
      emit(f.output, to_newick(upgma(language_matrix(data.grid, f.workers))) + "\n");
    } else if (mds->parsed()) {
      auto data = load_dataset(f.dataset());
      auto e = classical_mds(language_matrix(data.grid, f.workers));
      for (const auto& w : e.warnings) std::cerr << "warning: " << w << '\n';
      emit(f.output, embedding_csv(e));
      if (!svg.empty()) write_file(svg, embedding_svg(e));
    } else if (diversity->parsed()) {
      auto data = load_dataset(f.dataset());
      auto width = parse_rational(bin_width);
      std::vector<CorpusStats> stats;
      for (const auto& lang : data.grid.languages()) stats.push_back(corpus_stats(data.grid, lang, width, f.workers));
      emit(f.output, f.format == "json" ? diversity_json(stats, f.exact) : diversity_csv(stats, f.exact));
    } else if (extremes->parsed()) {
      auto data = load_dataset(f.dataset());
      emit(f.output, extremes_report(extreme_sentences(data.grid, lang_a, lang_b, f.workers), lang_a, lang_b, f.exact));
    } else if (pipeline->parsed()) {
      PipelineOptions o;
      o.dataset = f.dataset();
      o.out_dir = out_dir;
      o.bin_width = parse_rational(bin_width);
      o.exact = f.exact;
      o.include_timestamp = !no_timestamp;
      run_pipeline(o);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_input_error(e.kind()) ? kInputError : kInternalError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}
