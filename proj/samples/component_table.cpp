// Prints the component-group table for q = 2, 3, 4, 5.
#include <iostream>

#include "jllab/report.hpp"

int main() {
    for (std::uint32_t q : {2u, 3u, 4u, 5u})
        std::cout << jllab::renderTable(jllab::componentGroupTable(jllab::XYLevel::standard(q))) << "\n";
}
