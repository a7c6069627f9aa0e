// Critical group of the two-vertex family graph against its closed form.
#include <cstdlib>
#include <iostream>

#include "jllab/dualgraph.hpp"

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 3;
    const int m = argc > 2 ? std::atoi(argv[2]) : 4;
    const auto g = jllab::familyGraph(n, m);
    const auto res = jllab::criticalGroup(g);
    std::cout << jllab::toDot(g, "family") << "critical group: " << res.group.toString()
              << "\nclosed form order: " << jllab::familyGroup(n, m).order
              << "\nspanning trees: " << jllab::spanningTreeCount(g) << "\n";
}
