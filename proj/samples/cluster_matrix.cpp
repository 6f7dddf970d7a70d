// UPGMA and classical MDS on a hand-written distance matrix.
//
//   build/samples/cluster_matrix

#include <iomanip>
#include <iostream>

#include "synpoly/synpoly.hpp"

int main() {
  using namespace synpoly;

  DistanceMatrix m({"eng", "ger", "fre", "spa", "jpn"});
  // upper triangle, row by row
  const Rational values[] = {Rational(506, 100), Rational(560, 100), Rational(570, 100), Rational(1163, 100),
                             Rational(610, 100), Rational(640, 100), Rational(1180, 100),
                             Rational(420, 100), Rational(1190, 100),
                             Rational(1175, 100)};
  std::size_t k = 0;
  for (auto [i, j] : upper_pairs(m.size())) m.set(i, j, values[k++]);

  auto s = summarize(m, 2);
  std::cout << "mean " << format_fixed(s.mean) << ", median " << format_fixed(s.median) << '\n';
  std::cout << "closest " << s.smallest[0].first << '-' << s.smallest[0].second << ' '
            << format_fixed(s.smallest[0].value) << '\n';

  std::cout << to_newick(upgma(m)) << '\n';

  auto e = classical_mds(m);
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    std::cout << e.labels[i] << std::fixed << std::setprecision(3) << "  " << e.coordinates[i][0] << "  "
              << e.coordinates[i][1] << '\n';
  }
  for (const auto& w : e.warnings) std::cout << "warning: " << w << '\n';
}
