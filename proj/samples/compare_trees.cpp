// Two small dependency trees, their polynomials and the distance between them.
//
//   build/samples/compare_trees

#include <iostream>

#include "synpoly/synpoly.hpp"

int main() {
  using namespace synpoly;

  const std::string english =
      "# sent_id = demo\n"
      "1\tThe\t_\t_\t_\t_\t2\tdet\t_\t_\n"
      "2\tcat\t_\t_\t_\t_\t3\tnsubj\t_\t_\n"
      "3\tsleeps\t_\t_\t_\t_\t0\troot\t_\t_\n"
      "4\t.\t_\t_\t_\t_\t3\tpunct\t_\t_\n\n";
  const std::string german =
      "# sent_id = demo\n"
      "1\tDie\t_\t_\t_\t_\t2\tdet\t_\t_\n"
      "2\tKatze\t_\t_\t_\t_\t3\tnsubj\t_\t_\n"
      "3\tschläft\t_\t_\t_\t_\t0\troot\t_\t_\n"
      "4\ttief\t_\t_\t_\t_\t3\tadvmod\t_\t_\n"
      "5\t.\t_\t_\t_\t_\t3\tpunct\t_\t_\n\n";

  auto a = from_sentence(parse_conllu(english, "eng").front());
  auto b = from_sentence(parse_conllu(german, "ger").front());
  auto pa = compute_labeled(a);
  auto pb = compute_labeled(b);

  std::cout << "eng  " << canonical_encoding(a) << "\n     P = " << pa.to_string() << '\n';
  std::cout << "ger  " << canonical_encoding(b) << "\n     P = " << pb.to_string() << '\n';
  std::cout << "unlabeled eng: " << compute_unlabeled(a).to_string() << '\n';

  auto d = polynomial_distance(pa, pb);
  std::cout << "distance " << format_fixed(d.value()) << " (exactly " << to_exact_string(d.value()) << ")\n";
}
