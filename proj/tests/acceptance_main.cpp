#include <iostream>

#include "moduli/acceptance.hpp"

int main() { return moduli::print_acceptance(moduli::run_acceptance(), std::cout) == 0 ? 0 : 1; }
