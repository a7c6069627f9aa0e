// The q = 2 chain: reference curves, kernel candidates, selected kernel.
#include <iostream>

#include "jllab/isogeny.hpp"

int main() {
    const auto v = jllab::q2Verification();
    for (const auto& c : v.curves)
        std::cout << c.name << ": " << c.computed[0] << " " << c.computed[1] << " " << c.computed[2] << "\n";
    for (const auto& c : v.candidates) std::cout << c.name << " -> |Phi_inf| = " << c.order << (c.matches ? " *" : "") << "\n";
    std::cout << "selected " << v.selected << (v.selectedIsC0 ? " (= C0)" : "") << "\n" << v.optimalNote << "\n";
    return v.pass ? 0 : 1;
}
